"""Command line harness: ``adl <subcommand> ...``.

Reports are JSON (sorted keys, fixed float repr) so identical seeds and flags
give identical bytes.  Wall-clock fields only appear with ``--timing``.
Exit codes: 0 ok, 1 usage or input error, 2 acceptance failure, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .boosting import BoostConfig, BoostingError, WeakLearnerFailure, WeakLearnerHandle, aboost_di_run, aboost_run
from .bruteforce import EnumerationCapError, opt_enumerate
from .chebyshev import build_approx, certify_approx
from .csq_weak import CsqLearnerError, csq_degree, csq_weak_learner_run
from .distributions import (
    EmpiricalSample,
    ExplicitDistribution,
    gen_elimination,
    gen_planted,
    gen_random,
    marginal_from_args,
    read_examples,
    write_examples,
)
from .domain import MonotoneDisjunction, hypothesis_error
from .l1regression import l1_fit, l1_regress_learner, regression_degree, round_to_hypothesis
from .learner_sample import Alg1Config, alg1_weak_learner_run, forced_guess_hook, strong_learner_sample
from .learner_sq import Alg2Config, alg2_learner, forced_correct_policy
from .learner_tradeoff import Alg3Config, alg3_handle, alg3_weak_learner_run, tradeoff_learner
from .sqoracle import QueryBudget, SqOracle

EXIT_OK, EXIT_USAGE, EXIT_ACCEPT, EXIT_INTERNAL = 0, 1, 2, 3
OPT_MAX_N = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# --------------------------------------------------------------------------- helpers


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [_jsonable(x) for x in items]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return None if not np.isfinite(f) else f
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    return v


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _emit(report, args):
    text = dump_json(report)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    sys.stdout.write(text)


def _jobs(args) -> int:
    env = os.environ.get("ADL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"ADL_JOBS must be an integer, got {env!r}")
    return max(1, args.jobs)


def _load(path):
    if not path:
        raise UsageError("--in <file> is required")
    try:
        return read_examples(path)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {path}")
    except ValueError as exc:
        raise UsageError(f"cannot parse {path}: {exc}")


def _explicit(data) -> ExplicitDistribution:
    return data.to_explicit() if isinstance(data, EmpiricalSample) else data


def _opt_block(dist):
    if dist.n > OPT_MAX_N:
        return None
    try:
        opt, f, count = opt_enumerate(dist, "monotone")
    except EnumerationCapError:
        return None
    return {"opt": opt, "argmin": sorted(f.support), "count_enumerated": count}


def _planted_S(dist, required=False):
    planted = getattr(dist, "planted", None)
    if planted is None:
        if required:
            raise UsageError("--force-correct-guesses needs a planted instance (written by `gen --planted`)")
        return None
    return tuple(planted[0])


def _base(args, dist, **extra):
    rep = {"command": args.command, "seed": args.seed, "n": dist.n, "support": len(dist.X)}
    rep.update(extra)
    return rep


# --------------------------------------------------------------------------- subcommands


def cmd_gen(args):
    rng_seed = args.seed
    if args.random:
        data = gen_random(args.n, args.support_size, rng_seed, args.max_weight)
    else:
        if args.planted is None:
            raise UsageError("gen needs --planted S (comma separated) or --random")
        S = [int(s) for s in args.planted.split(",") if s.strip()]
        if any(not 0 <= i < args.n for i in S):
            raise UsageError(f"planted coordinates must lie in [0, {args.n})")
        if args.marginal == "elimination":
            r = args.r if args.r is not None else max(1, args.n // 3)
            data = gen_elimination(args.n, S, r, args.p_heavy, args.eta, args.support_size, rng_seed)
        else:
            kw = {"lo": args.lo, "hi": args.hi if args.hi is not None else args.n, "mode": args.mode,
                  "support_size": args.support_size, "p_heavy": args.p_heavy,
                  "r": args.r if args.r is not None else max(1, args.n // 3)}
            spec = marginal_from_args(args.marginal, args.n, **kw)
            data = gen_planted(args.n, S, spec, args.eta, rng_seed)
    if args.sample:
        from .distributions import draw
        data = draw(data, args.sample, rng_seed)
    if args.out:
        write_examples(args.out, data)
    rep = {"command": "gen", "seed": args.seed, "n": data.n, "records": len(data.X),
           "planted": getattr(data, "planted", None), "out": args.out}
    sys.stdout.write(dump_json(rep))
    return EXIT_OK


def cmd_opt(args):
    dist = _explicit(_load(args.input))
    try:
        opt, f, count = opt_enumerate(dist, args.cls)
    except EnumerationCapError as exc:
        raise UsageError(str(exc))
    if isinstance(f, MonotoneDisjunction):
        arg = {"support": sorted(f.support)}
    elif hasattr(f, "positive"):
        arg = {"positive": sorted(f.positive), "negative": sorted(f.negative)}
    else:
        arg = f.describe()
    _emit({"opt": opt, "argmin": arg, "class": args.cls, "count_enumerated": count}, args)
    return EXIT_OK


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def frontier_rows(rs, epss):
    rows = []
    for r in rs:
        for eps in epss:
            q = build_approx(r, eps)
            rep = certify_approx(q, r, eps)
            rows.append({"r": r, "eps": eps, "degree": q.degree, "regime": q.regime,
                         "max_dev": max(rep.max_dev_at_zero, rep.max_dev_on_band), "passed": rep.passed})
    return rows


def cmd_approx(args):
    if args.mode == "certify":
        q = build_approx(args.r, args.epsilon)
        rep = certify_approx(q, args.r, args.epsilon, target=args.target)
        out = {"r": args.r, "eps": args.epsilon, "regime": q.regime, **rep.as_dict()}
        _emit(out, args)
        return EXIT_OK
    rows = frontier_rows([int(x) for x in _floats(args.rs)], _floats(args.eps_list))
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "frontier.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["r", "eps", "degree", "regime", "max_dev", "passed"])
        w.writeheader()
        w.writerows(rows)
    png = None
    if not args.no_plot:
        from .plotting import frontier_figure
        png = str(frontier_figure(rows, outdir / "frontier.png"))
    sys.stdout.write(csv_path.read_text())
    sys.stdout.write(dump_json({"csv": str(csv_path), "png": png, "all_passed": all(r["passed"] for r in rows)}))
    return EXIT_OK


def cmd_l1fit(args):
    dist = _explicit(_load(args.input))
    I = sorted(int(c) for c in args.coords.split(",")) if args.coords else list(range(dist.n))
    r = int(dist.X[:, I].sum(axis=1).max()) if I else 0
    d = args.degree if args.degree is not None else regression_degree(max(r, 1), args.epsilon / 4, len(I))
    p = l1_fit(dist, I, d)
    h = round_to_hypothesis(p, dist, eps=args.epsilon)
    rep = {"loss": p.loss, "degree": d, "threshold": h.threshold, "error": hypothesis_error(h, dist),
           "coords": I, "terms": len(p.terms)}
    block = _opt_block(dist)
    if block:
        rep["opt"] = block["opt"]
    _emit(rep, args)
    return EXIT_OK


def _alg1_cfg(args):
    return Alg1Config(eps=args.epsilon, repeats=args.repeats, sample_size=args.sample_size, seed=args.seed,
                      jobs=_jobs(args), max_degree=args.max_degree)


def cmd_weak_sample(args):
    dist = _explicit(_load(args.input))
    hook = forced_guess_hook(_planted_S(dist, True)) if args.force_correct_guesses else None
    cfg = _alg1_cfg(args)
    res = alg1_weak_learner_run(dist, cfg, hook, keep_traces=bool(args.trace))
    rc = cfg.resolve(dist.n)
    if args.trace:
        with open(args.trace, "w") as fh:
            for k, tr in enumerate(res.traces):
                for st in tr.steps:
                    fh.write(json.dumps(_jsonable({"run": k, "t": st.t, "coords": len(st.coords),
                                                   "light": st.n_light, "heavy": st.n_heavy, "err1": st.err1,
                                                   "err2": st.err2, "guess": st.guess}), sort_keys=True) + "\n")
                fh.write(json.dumps({"run": k, "outcome": tr.outcome}, sort_keys=True) + "\n")
    rep = _base(args, dist, config={"eps": rc.eps, "r": rc.r, "T": rc.T, "sample_size": rc.sample_size,
                                    "repeats": rc.repeats, "forced": args.force_correct_guesses},
                degree=rc.degree, holdout_error=res.holdout_error, error=hypothesis_error(res.hypothesis, dist),
                successes=res.successes, trial=res.trial, hypothesis=res.hypothesis.describe())
    rep["oracle"] = _opt_block(dist)
    _emit(rep, args)
    return EXIT_OK


def cmd_strong_sample(args):
    dist = _explicit(_load(args.input))
    cfg = _alg1_cfg(args)
    run = strong_learner_sample(dist, args.epsilon, cfg, BoostConfig(seed=args.seed, max_rounds=args.max_rounds))
    rep = _base(args, dist, config={"eps": args.epsilon, "repeats": args.repeats, "max_rounds": args.max_rounds},
                degree=cfg.resolve(dist.n).degree, rounds=run.rounds, weak_calls=run.weak_calls,
                error=run.error, stopped=run.stopped, potentials=run.potentials)
    rep["oracle"] = _opt_block(dist)
    _emit(rep, args)
    return EXIT_OK


def sq_learn_report(dist, eps, trials, backend="exact", forced=False, seed=0, keep=False, timing=False):
    """Run the SQ learner with a shared budget and build its report; ``keep`` also returns the result."""
    cfg = Alg2Config(eps=eps, trials=trials, seed=seed)
    rc = cfg.resolve(dist.n)
    budget = QueryBudget()
    policy = None
    if forced:
        S = _planted_S(dist) if dist.n > OPT_MAX_N else None
        policy = forced_correct_policy(dist, Alg2Config(eps=eps / 3).resolve(dist.n).r, S)
    res = alg2_learner(lambda k: SqOracle(dist, backend, seed=(seed, k) if k >= 0 else (seed, 2**31 - 1),
                                          budget=budget), cfg, policy)
    run_cfg = Alg2Config(eps=eps / 3).resolve(dist.n)
    tr = res.traces[res.trial]
    degrees = sorted({st.l1_info.get("degree") for st in tr.steps if st.l1_info.get("degree")})
    rep = {"command": "sq-learn", "seed": seed, "n": dist.n, "support": len(dist.X),
           "config": {"eps": eps, "trials": trials, "backend": backend, "forced": forced,
                      "r": rc.r, "T_run": run_cfg.T},
           "tolerances": {"light": run_cfg.eps * run_cfg.r / (800 * dist.n), "mass": run_cfg.eps / 100,
                          "validate": eps / 3, "l1_floor": cfg.l1_floor},
           "budget": budget.report(backend, timing),
           "degree": degrees, "iterations": len(tr.steps), "candidates": res.candidates,
           "estimate": res.estimate, "error": hypothesis_error(res.hypothesis, dist),
           "branches": [st.branch for st in tr.steps], "hypothesis": res.hypothesis.describe()}
    block = _opt_block(dist)
    rep["oracle"] = block
    if block:
        rep["within_bound"] = rep["error"] <= block["opt"] + eps + 1e-12
    return (rep, res) if keep else rep


def cmd_sq_learn(args):
    dist = _explicit(_load(args.input))
    if args.force_correct_guesses and dist.n > OPT_MAX_N:
        _planted_S(dist, True)
    rep = sq_learn_report(dist, args.epsilon, args.trials, args.backend, args.force_correct_guesses,
                          args.seed, timing=args.timing)
    if args.budget_out:
        Path(args.budget_out).write_text(dump_json(rep["budget"]))
    _emit(rep, args)
    return EXIT_OK


def cmd_tradeoff(args):
    dist = _explicit(_load(args.input))
    cfg = Alg3Config(alpha=args.alpha, eps=args.epsilon, relaxed=args.relaxed_constants, trials=args.trials,
                     seed=args.seed, c=args.c)
    try:
        rc = cfg.resolve(dist.n)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.weak_only:
        budget = QueryBudget()
        policy = None
        if args.force_correct_guesses:
            policy = forced_correct_policy(dist, rc.r, _planted_S(dist) if dist.n > OPT_MAX_N else None)
        res = alg3_weak_learner_run(lambda k: SqOracle(dist, args.backend, seed=(args.seed, k if k >= 0 else 2**31 - 1),
                                                       budget=budget), cfg, policy=policy)
        rep = _base(args, dist, mode="weak", estimate=res.estimate, error=hypothesis_error(res.hypothesis, dist),
                    margin=rc.r / (16 * dist.n), budget=budget.report(args.backend, args.timing))
    else:
        res = tradeoff_learner(dist, args.alpha, args.epsilon, cfg, args.backend, args.force_correct_guesses)
        rep = _base(args, dist, mode="boosted", error=res.error,
                    runs=[{"eps": e, "ok": run is not None, "error": err if run is not None else None,
                           "rounds": run.engine.rounds if run is not None else None,
                           "failure": None if run is not None else err} for e, run, err in res.runs])
    rep["config"] = {"alpha": args.alpha, "eps": args.epsilon, "r": rc.r, "T": rc.T, "relaxed": args.relaxed_constants,
                     "trials": args.trials, "backend": args.backend}
    rep["degree"] = rc.degree
    block = _opt_block(dist)
    rep["oracle"] = block
    if block and not args.weak_only:
        rep["bound"] = args.alpha * block["opt"] + args.epsilon
    _emit(rep, args)
    return EXIT_OK


def _opt_finder(view, seed):
    return opt_enumerate(view, "monotone")[1]


def weak_handle(name, args, n):
    """Registered weak learners for the boost subcommand."""
    if name == "alg1":
        cfg = _alg1_cfg(args)

        def fn(view, seed):
            from dataclasses import replace
            from .learner_sample import alg1_weak_learner
            return alg1_weak_learner(view, replace(cfg, seed=seed))
        return WeakLearnerHandle(fn, args.epsilon, args.gamma or args.epsilon / 100, "alg1")
    if name == "alg3":
        cfg = Alg3Config(alpha=args.alpha, relaxed=True, trials=args.trials)
        h = alg3_handle(cfg, "exact", False, n)
        if args.gamma:
            h.gamma = args.gamma
        return h
    if name == "opt":
        from .domain import Disjunction

        def fn(view, seed):
            return Disjunction(_opt_finder(view, seed))
        return WeakLearnerHandle(fn, 0.0, args.gamma or 0.05, "opt")
    if name == "csq":
        def fn(view, seed):
            d = args.degree or csq_degree(view.n, args.epsilon)
            try:
                return csq_weak_learner_run(SqOracle(view, "exact", seed).csq_view(), args.epsilon, d).hypothesis
            except CsqLearnerError as exc:
                raise WeakLearnerFailure(str(exc))
        return WeakLearnerHandle(fn, args.epsilon, args.gamma or args.epsilon / 16, "csq")
    raise UsageError(f"unknown weak learner {name!r}; choose from alg1, alg3, opt, csq")


def cmd_boost(args):
    dist = _explicit(_load(args.input))
    handle = weak_handle(args.weak, args, dist.n)
    bcfg = BoostConfig(seed=args.seed, max_rounds=args.max_rounds, rounds=args.rounds)
    if args.di:
        run = aboost_di_run(handle, dist, handle.alpha, handle.gamma, args.epsilon, bcfg)
        rep = _base(args, dist, mode="di", error=run.error, schedule=run.schedule, budgets=run.budgets,
                    weak_calls=run.weak_calls, chosen_delta=run.chosen_delta, rounds=run.engine.rounds)
    else:
        run = aboost_run(handle, dist, handle.alpha, handle.gamma, bcfg)
        rep = _base(args, dist, mode="aboost", error=run.error, rounds=run.rounds, weak_calls=run.weak_calls,
                    stopped=run.stopped, potentials=run.potentials, max_density=run.max_density)
    rep["config"] = {"weak": args.weak, "eps": args.epsilon, "gamma": handle.gamma, "max_rounds": args.max_rounds}
    rep["oracle"] = _opt_block(dist)
    _emit(rep, args)
    return EXIT_OK


def cmd_csq_weak(args):
    dist = _explicit(_load(args.input))
    d = args.degree if args.degree is not None else csq_degree(dist.n, args.epsilon)
    oracle = SqOracle(dist, args.backend, args.seed)
    pts = None
    if args.constraint_mode == "support+random":
        from .csq_weak import constraint_points
        pts = constraint_points(dist.n, "support+random", extra=dist.X, seed=args.seed)
    try:
        res = csq_weak_learner_run(oracle.csq_view(), args.epsilon, d, mode=args.constraint_mode, points=pts,
                                   seed=args.seed)
    except CsqLearnerError as exc:
        rep = _base(args, dist, ok=False, reason=str(exc), budget=oracle.report(args.timing))
        _emit(rep, args)
        return EXIT_INTERNAL
    rep = _base(args, dist, ok=True, degree=d, basis=len(res.correlations), lp_objective=res.polynomial.objective,
                threshold=res.hypothesis.threshold, estimate=res.estimate,
                error=hypothesis_error(res.hypothesis, dist), budget=oracle.report(args.timing),
                config={"eps": args.epsilon, "constraint_mode": args.constraint_mode, "backend": args.backend})
    rep["oracle"] = _opt_block(dist)
    _emit(rep, args)
    return EXIT_OK


def bench_rows(ns, seed=0, timing=False):
    """Error above OPT and cost for the learners on planted instances of growing n."""
    from .distributions import HeavyLightMixture, WeightBand
    rows = []
    for n in ns:
        rng = np.random.default_rng([seed, n])
        S = tuple(int(i) for i in rng.choice(n, min(3, n), replace=False))
        d = gen_planted(n, S, HeavyLightMixture(0.5, max(1, n // 3), 24), 0.1, [seed, n])
        opt = opt_enumerate(d)[0]
        runs = []

        def l1():
            h = l1_regress_learner(d, range(n), 0.05)
            return h, {"degree": h.poly.degree, "queries": 0}

        def sample():
            res = alg1_weak_learner_run(d, Alg1Config(eps=0.1, repeats=20, seed=seed, sample_size=2000))
            return res.hypothesis, {"degree": Alg1Config(eps=0.1).resolve(n).degree, "queries": 0}

        def sq():
            rep, res = sq_learn_report(d, 0.1, 1, "exact", True, seed, keep=True)
            return res.hypothesis, {"degree": max(rep["degree"], default=0), "queries": rep["budget"]["queries"]}

        def csq():
            o = SqOracle(d, "exact", seed)
            k = min(csq_degree(n, 0.25), n)
            res = csq_weak_learner_run(o.csq_view(), 0.25, k)
            return res.hypothesis, {"degree": k, "queries": o.budget.queries}

        runs = [("l1", l1), ("sample", sample), ("sq", sq)] + ([("csq", csq)] if n <= 10 else [])
        for name, fn in runs:
            t0 = time.perf_counter()
            h, extra = fn()
            row = {"learner": name, "n": n, "error": hypothesis_error(h, d), "opt": opt, **extra}
            if timing:
                row["seconds"] = round(time.perf_counter() - t0, 4)
            rows.append(row)
    return rows


def cmd_bench(args):
    ns = [int(x) for x in args.ns.split(",") if x.strip()]
    rows = bench_rows(ns, args.seed, args.timing)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    fields = ["learner", "n", "error", "opt", "degree", "queries"] + (["seconds"] if args.timing else [])
    csv_path = outdir / "bench.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    png = None
    if not args.no_plot:
        from .plotting import bench_figure
        png = str(bench_figure(rows, outdir / "bench.png", "seconds" if args.timing else "queries"))
    sys.stdout.write(csv_path.read_text())
    sys.stdout.write(dump_json({"csv": str(csv_path), "png": png}))
    return EXIT_OK


def cmd_accept(args):
    from .acceptance import SUITES, run_suite
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    only = set(args.only.split(",")) if args.only else None
    results = run_suite(args.suite, only, echo=lambda line: print(line, flush=True))
    if args.out:
        Path(args.out).write_text(dump_json([{"key": r.key, "title": r.title, "passed": r.passed,
                                              "seconds": round(r.seconds, 3), "limit": r.limit,
                                              "detail": r.detail} for r in results]))
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_ACCEPT if failed else EXIT_OK


# --------------------------------------------------------------------------- parser


def build_parser():
    p = _Parser(prog="adl", description="Agnostic learning of disjunctions: generators, learners, reports.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker threads (ADL_JOBS overrides)")
    common.add_argument("--out", help="also write the JSON report here")
    common.add_argument("--timing", action="store_true", help="include wall-clock fields")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="write an example file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--planted", help="planted coordinates, e.g. 0,3,5")
    g.add_argument("--random", action="store_true", help="arbitrary labels instead of a planted concept")
    g.add_argument("--eta", type=float, default=0.1)
    g.add_argument("--marginal", choices=["uniform", "weight-band", "heavy-light", "elimination"],
                   default="weight-band")
    g.add_argument("--lo", type=int, default=0)
    g.add_argument("--hi", type=int)
    g.add_argument("--mode", choices=["auto", "enumerate", "sample"], default="auto")
    g.add_argument("--support-size", type=int, default=64)
    g.add_argument("--max-weight", type=int)
    g.add_argument("--p-heavy", type=float, default=0.5)
    g.add_argument("--r", type=int)
    g.add_argument("--sample", type=int, help="draw this many examples instead of writing the distribution")

    o = sub.add_parser("opt", parents=[common], help="exact OPT by enumeration")
    o.add_argument("--in", dest="input")
    o.add_argument("--class", dest="cls", choices=["monotone", "monotone+const1", "general-literals"],
                   default="monotone")

    a = sub.add_parser("approx", parents=[common], help="certify one approximator or tabulate the frontier")
    a.add_argument("mode", choices=["certify", "frontier"])
    a.add_argument("--r", type=int, default=25)
    a.add_argument("--epsilon", type=float, default=0.1)
    a.add_argument("--target", choices=["disjunction", "constant1"], default="disjunction")
    a.add_argument("--rs", default="4,9,25,64,100")
    a.add_argument("--eps-list", default="0.3,0.25,0.1,0.05,0.01")
    a.add_argument("--out-dir", default="frontier_out")
    a.add_argument("--no-plot", action="store_true")

    l = sub.add_parser("l1fit", parents=[common], help="L1 polynomial regression plus rounding")
    l.add_argument("--in", dest="input")
    l.add_argument("--degree", type=int)
    l.add_argument("--epsilon", type=float, default=0.05)
    l.add_argument("--coords", help="comma separated coordinate subset (default: all)")

    for name, helptext in (("weak-sample", "sample-based weak learner"), ("strong-sample", "boosted sample learner")):
        w = sub.add_parser(name, parents=[common], help=helptext)
        w.add_argument("--in", dest="input")
        w.add_argument("--n", type=int, help="dimension check for the input file")
        w.add_argument("--epsilon", type=float, default=0.1)
        w.add_argument("--repeats", type=int, default=500 if name == "weak-sample" else 50)
        w.add_argument("--sample-size", type=int)
        w.add_argument("--max-degree", type=int)
        w.add_argument("--max-rounds", type=int, default=40)
        w.add_argument("--force-correct-guesses", action="store_true")
        w.add_argument("--trace", help="JSON-lines trace of every run")

    s = sub.add_parser("sq-learn", parents=[common], help="statistical-query learner")
    s.add_argument("--in", dest="input")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--backend", choices=["exact", "empirical", "adversarial"], default="exact")
    s.add_argument("--force-correct-guesses", action="store_true")
    s.add_argument("--budget-out")

    t = sub.add_parser("tradeoff", parents=[common], help="alpha*OPT + eps learner")
    t.add_argument("--in", dest="input")
    t.add_argument("--alpha", type=float, default=4)
    t.add_argument("--epsilon", type=float, default=0.1)
    t.add_argument("--relaxed-constants", action=argparse.BooleanOptionalAction, default=True)
    t.add_argument("--trials", type=int, default=4)
    t.add_argument("--c", type=float, default=4.0)
    t.add_argument("--backend", choices=["exact", "empirical", "adversarial"], default="exact")
    t.add_argument("--force-correct-guesses", action="store_true")
    t.add_argument("--weak-only", action="store_true", help="run the weak learner once, no boosting")

    b = sub.add_parser("boost", parents=[common], help="boost a registered weak learner")
    b.add_argument("--in", dest="input")
    b.add_argument("--weak", default="alg1", help="alg1 | alg3 | opt | csq")
    b.add_argument("--epsilon", type=float, default=0.1)
    b.add_argument("--gamma", type=float)
    b.add_argument("--alpha", type=float, default=4)
    b.add_argument("--trials", type=int, default=4)
    b.add_argument("--degree", type=int)
    b.add_argument("--repeats", type=int, default=50)
    b.add_argument("--sample-size", type=int)
    b.add_argument("--max-degree", type=int)
    b.add_argument("--rounds", type=int)
    b.add_argument("--max-rounds", type=int, default=40)
    b.add_argument("--di", action="store_true", help="unknown-OPT schedule")

    c = sub.add_parser("csq-weak", parents=[common], help="correlational-query weak learner")
    c.add_argument("--in", dest="input")
    c.add_argument("--epsilon", type=float, default=0.25)
    c.add_argument("--degree", type=int)
    c.add_argument("--constraint-mode", choices=["enumerate", "support+random"], default="enumerate")
    c.add_argument("--backend", choices=["exact", "empirical", "adversarial"], default="exact")

    be = sub.add_parser("bench", parents=[common], help="error and cost table over n (CSV + png)")
    be.add_argument("--ns", default="6,8,10")
    be.add_argument("--out-dir", default="bench_out")
    be.add_argument("--no-plot", action="store_true")

    ac = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    ac.add_argument("--suite", default="all")
    ac.add_argument("--only", help="comma separated keys, e.g. C1,C7")
    return p


HANDLERS = {
    "gen": cmd_gen, "opt": cmd_opt, "approx": cmd_approx, "l1fit": cmd_l1fit,
    "weak-sample": cmd_weak_sample, "strong-sample": cmd_strong_sample, "sq-learn": cmd_sq_learn,
    "tradeoff": cmd_tradeoff, "boost": cmd_boost, "csq-weak": cmd_csq_weak, "bench": cmd_bench,
    "accept": cmd_accept,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        if getattr(args, "n", None) is not None and args.command in ("weak-sample", "strong-sample"):
            data = _load(args.input)
            if data.n != args.n:
                raise UsageError(f"--n {args.n} does not match the input dimension {data.n}")
        return HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"adl {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoostingError, WeakLearnerFailure) as exc:
        print(f"adl {args.command}: learner failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:
        print(f"adl {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
