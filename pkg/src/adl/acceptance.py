"""Acceptance suite: twelve checks, each returning an Outcome with its measured details.

Every check enforces its own runtime limit; a check that produces correct
numbers too slowly fails.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .boosting import BoostConfig
from .bruteforce import opt_enumerate
from .chebyshev import approx_degree, build_approx, certify_approx, chebyshev_eval
from .csq_weak import csq_degree, csq_weak_learner_run
from .distributions import (
    ExplicitDistribution,
    HeavyLightMixture,
    WeightBand,
    gen_elimination,
    gen_planted,
    gen_random,
)
from .domain import (
    Complement,
    GeneralDisjunction,
    Intersection,
    all_points,
    hypothesis_error,
    monotonize_instance,
)
from .l1regression import l1_regress_learner
from .learner_sample import Alg1Config, alg1_weak_learner_run, forced_guess_hook, strong_learner_sample
from .learner_sq import Alg2Config, alg2_learner, alg2_single_run, forced_correct_policy
from .learner_tradeoff import Alg3Config, alg3_single_run, tradeoff_learner
from .sqoracle import QueryBudget, SqOracle, ratio_estimate


@dataclass
class Outcome:
    key: str
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.key} {self.title} ({self.seconds:.1f}s / {self.limit:.0f}s)"


def _err(h, d):
    return hypothesis_error(h, d)


# --------------------------------------------------------------------------- 1, 2: approximators


def check_certification():
    worst = []
    ok = True
    for r in (4, 9, 25, 64, 100):
        for eps in (0.3, 0.25, 0.1, 0.01):
            q = build_approx(r, eps)
            rep = certify_approx(q, r, eps)
            cap = math.ceil(2 * math.sqrt(r)) * max(1, math.ceil(math.log2(1 / eps))) + 1
            good = rep.passed and q.degree <= cap
            ok &= good
            worst.append({"r": r, "eps": eps, "degree": q.degree, "cap": cap,
                          "dev0": rep.max_dev_at_zero, "dev": rep.max_dev_on_band, "ok": good})
    return ok, {"pairs": worst}


def check_chebyshev_facts():
    grid = np.linspace(-1, 1, 1000)
    worst_abs = 0.0
    for d in range(1, 201):
        worst_abs = max(worst_abs, float(np.max(np.abs(chebyshev_eval(d, grid)))))
    deltas = np.linspace(1e-3, 1, 200)
    growth_ok = True
    for d in range(1, 201):
        growth_ok &= bool(np.all(chebyshev_eval(d, 1 + deltas) >= 1 + d * d * deltas - 1e-9 * (1 + d * d * deltas)))
    return worst_abs <= 1 + 1e-9 and growth_ok, {"max_abs_on_interval": worst_abs, "growth_ok": growth_ok}


# --------------------------------------------------------------------------- 3: L1 regression


def l1_instance(s):
    rng = np.random.default_rng(s)
    n = int(rng.integers(4, 11))
    if s % 2:
        return gen_random(n, int(rng.integers(10, 200)), s, max_weight=4)
    S = rng.choice(n, 3, replace=False)
    return gen_planted(n, S, WeightBand(0, 4, "sample", 150), 0.1, s)


def check_l1():
    worst = -1.0
    for s in range(50):
        d = l1_instance(s)
        h = l1_regress_learner(d, range(d.n), 0.05)
        worst = max(worst, _err(h, d) - opt_enumerate(d)[0])
    return worst <= 0.05 + 1e-6, {"worst_gap": worst, "degree_at": approx_degree(4, 0.0125)}


# --------------------------------------------------------------------------- 4: sample-based weak learner


def check_weak_sample():
    eps = 0.2
    rows = []
    ok = True
    for s in range(10):
        rng = np.random.default_rng(s)
        S = tuple(int(i) for i in rng.choice(30, 4, replace=False))
        d = gen_planted(30, S, HeavyLightMixture(0.5, 10, 64), 0.25, s)
        res = alg1_weak_learner_run(d, Alg1Config(eps=eps, repeats=500, seed=s))
        good = res.holdout_error <= 0.5 - eps / 100
        # the forced hook only guesses points the planted disjunction labels 0; with almost all
        # mass heavy no constant clears the target, so guesses must fire
        e = gen_elimination(30, S, 10, 0.98, 0.1, rng_seed=s)
        forced = alg1_weak_learner_run(e, Alg1Config(eps=eps, repeats=50, seed=s), forced_guess_hook(S),
                                       keep_traces=True)
        kept = all(set(S) <= c for tr in forced.traces for c in tr.coord_sets())
        guesses = sum(st.guess is not None for tr in forced.traces for st in tr.steps)
        ok &= good and kept and guesses > 0
        rows.append({"holdout": res.holdout_error, "subset_kept": kept, "guesses": guesses})
    return ok, {"instances": rows}


# --------------------------------------------------------------------------- 5, 6: SQ learner


def sq_instance(s):
    rng = np.random.default_rng(s)
    n = int(rng.integers(6, 13))
    S = rng.choice(n, 3, replace=False)
    return gen_planted(n, S, HeavyLightMixture(0.5, max(1, n // 3), 24), 0.1, s)


def _partition_ok(h, final_U, n):
    X = all_points(n)
    cover = np.zeros(len(X), dtype=int)
    for B, _ in h.entries:
        cover += B.contains(X)
    cover += final_U.contains(X)
    return bool(np.all(cover == 1))


_SQ_RUNS = {}


def _sq_forced_runs():
    """Forced-guess exact runs shared by checks 5 and 6."""
    if not _SQ_RUNS:
        for s in range(20):
            d = sq_instance(s)
            cfg = Alg2Config(eps=0.1).resolve(d.n)
            h, tr = alg2_single_run(SqOracle(d, "exact"), cfg, s, forced_correct_policy(d, cfg.r))
            _SQ_RUNS[s] = (d, cfg, h, tr)
    return _SQ_RUNS


def check_sq_learner():
    ok = True
    rows = []
    for s, (d, cfg, h, tr) in _sq_forced_runs().items():
        T = math.ceil(4 * d.n * math.log(1 / 0.1) / cfg.r)
        opt = opt_enumerate(d)[0]
        err = _err(h, d) if h is not None else 1.0
        part = h is not None and _partition_ok(h, tr.final_U, d.n)
        good = h is not None and len(tr.steps) <= T + 1 and err <= opt + 0.1 + 1e-12 and part
        ok &= good
        rows.append({"n": d.n, "iterations": len(tr.steps), "T": T, "error": err, "opt": opt})
    d = gen_planted(8, (1, 4, 6), HeavyLightMixture(0.5, 2, 24), 0.1, 3)
    budget = QueryBudget()
    res = alg2_learner(lambda k: SqOracle(d, "exact", seed=k, budget=budget), Alg2Config(eps=0.1, trials=2000, seed=1))
    opt = opt_enumerate(d)[0]
    err = _err(res.hypothesis, d)
    win = [tr for tr in res.traces if tr.outcome == "returned"]
    part = all(_partition_ok(h, tr.final_U, 8) for h, tr in ((res.hypothesis, res.traces[res.trial]),))
    random_ok = err <= opt + 0.1 + 1e-12 and part
    return ok and random_ok, {"forced": rows, "random": {"error": err, "opt": opt, "returned": len(win),
                                                          "queries": budget.queries}}


def check_progress():
    light, heavy = [], []
    for d, cfg, h, tr in _sq_forced_runs().values():
        for st in tr.steps:
            mu = d.mass(st.U)
            if mu <= 0:
                continue
            if st.branch == "light":
                light.append(d.mass(st.B) / mu)
            else:
                heavy.append(d.mass(st.B) / mu - cfg.r / d.n)
    ok = (not light or min(light) >= 1 / 3 - 1e-9) and (not heavy or min(heavy) >= -1e-9)
    return ok, {"light_steps": len(light), "min_light_fraction": min(light, default=None),
                "heavy_steps": len(heavy), "min_heavy_excess": min(heavy, default=None)}


# --------------------------------------------------------------------------- 7: ratio estimator


def check_ratio():
    rng = np.random.default_rng(7)
    bad = 0
    done = 0
    while done < 10**4:
        P2 = rng.uniform(0.01, 1)
        P1 = rng.uniform(0, P2)
        tau = rng.uniform(1e-4, 0.2) * P2
        h1 = float(np.clip(P1 + rng.uniform(-tau, tau), 0, 1))
        h2 = float(np.clip(P2 + rng.uniform(-tau, tau), 0, 1))
        gamma = rng.uniform(0.01, 1) * (h2 - tau)
        if gamma <= 0:
            continue
        done += 1
        if abs(ratio_estimate(h1, h2, tau, gamma) - P1 / P2) > 2 * tau / gamma + 1e-12:
            bad += 1
    return bad == 0, {"tuples": done, "violations": bad}


# --------------------------------------------------------------------------- 8: trade-off weak learner


def tradeoff_instance(s, n=256, r=21):
    rng = np.random.default_rng(s)
    S = tuple(int(i) for i in rng.choice(n, 6, replace=False))
    spec = WeightBand(1, 8, "sample", 64) if s % 2 == 0 else HeavyLightMixture(0.2, 2 * r, 32)
    return gen_planted(n, S, spec, 0.06, s), S


def check_tradeoff_weak():
    n, alpha = 256, 8
    cfg = Alg3Config(alpha=alpha).resolve(n)
    tau = cfg.r / (100 * n)
    margin = cfg.r / (16 * n)
    ok = True
    rows = []
    for s in range(10):
        d, S = tradeoff_instance(s, n, cfg.r)
        h, tr = alg3_single_run(SqOracle(d, "exact"), cfg, s, forced_correct_policy(d, cfg.r, S))
        if h is None:
            ok = False
            rows.append({"outcome": tr.outcome})
            continue
        # signed agreement A on B and the best constant elsewhere give error <= 1/2 - (A - tau)/2
        implied = 0.5 - (tr.agreement - tau) / 2
        err = _err(h, d)
        before = [st for st in tr.steps[:-1]] + [st for st in tr.steps[-1:] if st.branch == "heavy"]
        u_ok = all(d.mass(st.U_next) >= 0.5 for st in before)
        good = len(tr.steps) <= cfg.T + 1 and implied <= 0.5 - margin and err <= implied + 1e-12 and u_ok
        ok &= good
        rows.append({"iterations": len(tr.steps), "branches": [st.branch for st in tr.steps],
                     "implied": implied, "error": err, "U_ok": u_ok})
    return ok, {"r": cfg.r, "T": cfg.T, "degree": cfg.degree, "margin": margin, "instances": rows}


# --------------------------------------------------------------------------- 9: CSQ weak learner


class _StatTrap(SqOracle):
    def stat(self, q, tau):
        raise AssertionError("STAT query issued by a CSQ learner")


def check_csq():
    eps = 0.25
    deg = csq_degree(8, eps)
    ok = True
    rows = []
    for s in range(10):
        rng = np.random.default_rng(s)
        S = tuple(int(i) for i in rng.choice(8, 3, replace=False))
        d = gen_planted(8, S, WeightBand(0, 8, "sample", 40), 0.2, s)
        view = _StatTrap(d, "exact").csq_view()
        res = csq_weak_learner_run(view, eps, deg)
        err = _err(res.hypothesis, d)
        descriptors = {k for k, _ in view.budget.history}
        pure = not hasattr(view, "stat") and all(k.startswith(("parity", "sign")) for k in descriptors)
        good = err <= 0.5 - eps / 16 and pure
        ok &= good
        rows.append({"error": err, "queries": view.budget.queries, "pure": pure})
    return ok, {"degree": deg, "instances": rows}


# --------------------------------------------------------------------------- 10: boosting


def check_boosting():
    ok = True
    a_rows = []
    for s in range(10):
        rng = np.random.default_rng(s)
        S = tuple(int(i) for i in rng.choice(10, 3, replace=False))
        d = gen_planted(10, S, WeightBand(0, 10, "sample", 64), 0.1, s)
        opt = opt_enumerate(d)[0]
        run = strong_learner_sample(d, 0.1, boost_cfg=BoostConfig(seed=s))
        err = _err(run.hypothesis, d)
        ok &= err <= opt + 0.1 + 1e-12
        a_rows.append({"error": err, "opt": opt, "rounds": run.rounds})
    di_rows = []
    alpha, eps = 4, 0.1
    for s in range(5):
        rng = np.random.default_rng(s)
        S = tuple(int(i) for i in rng.choice(16, 3, replace=False))
        d = gen_planted(16, S, HeavyLightMixture(0.3, 8, 24), 0.05, s)
        opt = opt_enumerate(d)[0]
        res = tradeoff_learner(d, alpha, eps, Alg3Config(alpha=alpha, trials=4, seed=s))
        err = _err(res.hypothesis, d)
        ok &= err <= alpha * opt + eps + 1e-12
        di_rows.append({"error": err, "opt": opt, "bound": alpha * opt + eps})
    return ok, {"aboost": a_rows, "aboost_di": di_rows}


# --------------------------------------------------------------------------- 11: reduction


def _reduction_pair(d, g):
    m = monotonize_instance(d)
    return hypothesis_error(g, d), hypothesis_error(g.monotone_image(d.n), m)


def _general_error(g, d):
    return float(np.dot(d.weights, g(d.X) != d.y))


def check_reduction():
    worst = 0.0
    checks = 0
    X3 = all_points(3)
    for s in range(5):
        rng = np.random.default_rng(s)
        d = ExplicitDistribution(3, np.concatenate([X3, X3]), np.repeat([0, 1], 8).astype(np.uint8),
                                 rng.random(16), normalize=True)
        m = monotonize_instance(d)
        for g in GeneralDisjunction.enumerate(3):
            worst = max(worst, abs(_general_error(g, d) - _general_error(g.monotone_image(3), m)))
            checks += 1
    rng = np.random.default_rng(11)
    for k in range(1000):
        d = gen_random(10, int(rng.integers(5, 60)), int(rng.integers(2**31)))
        lits = rng.integers(0, 3, size=10)
        g = GeneralDisjunction(np.flatnonzero(lits == 1), np.flatnonzero(lits == 2))
        m = monotonize_instance(d)
        worst = max(worst, abs(_general_error(g, d) - _general_error(g.monotone_image(10), m)))
        checks += 1
    return worst <= 1e-12, {"checks": checks, "worst_difference": worst}


# --------------------------------------------------------------------------- 12: budget bookkeeping


def tree_query_count(dist, region, I, tau):
    """Queries issued by the prefix-tree reconstruction, counted directly from the distribution."""
    I = sorted(I)
    inside = region.contains(dist.X)
    X, y, w = dist.X[inside][:, I], dist.y[inside], dist.weights[inside]
    count = 0
    expanded = [()]              # the root is always expanded
    for depth in range(len(I) + 1):
        nxt = []
        for pre in expanded:
            if depth == len(I):
                count += 2       # one query per label
                continue
            for bit in (0, 1):
                child = pre + (bit,)
                count += 1
                sel = np.all(X[:, :len(child)] == np.array(child, dtype=np.uint8), axis=1)
                if float(w[sel].sum()) > tau:
                    nxt.append(child)
        expanded = nxt
    return count


def scripted_policy(script):
    def policy(t, U, I, rng):
        return script[t] if t < len(script) else ("light", None)
    return policy


def expected_step_queries(dist, step, n, last):
    if step.branch == "heavy":
        q = 1
    else:
        info = step.l1_info
        q = 1 + len(step.I_before) + tree_query_count(dist, step.B, step.I_after, info["tau"])
        q += info["thresholds"] + 1
    return q + (2 if last else 0)


def tolerances_used(traces, eps_run, eps_validate, n, r):
    used = {eps_validate}
    for tr in traces:
        for st in tr.steps:
            used.add(eps_run / 100)
            if st.branch == "light":
                used.add(eps_run * r / (800 * n))
                used.add(st.l1_info["tau"])
                if st.l1_info.get("thresholds"):
                    used.add(st.l1_info["tau_threshold"])
    return min(used)


def check_budget():
    from .cli import sq_learn_report
    ok = True
    rows = []
    d = gen_random(8, 60, 12)
    eps = 0.1
    cfg = Alg2Config(eps=eps).resolve(8)
    oracle = SqOracle(d, "exact")
    h, tr = alg2_single_run(oracle, cfg, 0, scripted_policy([("heavy", 0), ("heavy", 1), ("light", None)]))
    tallies = [expected_step_queries(d, st, 8, k == len(tr.steps) - 1) for k, st in enumerate(tr.steps)]
    measured = [st.queries for st in tr.steps]
    script_ok = len(tr.steps) == 3 and tallies == measured and sum(tallies) == oracle.budget.queries
    ok &= script_ok
    for s in range(4):
        inst = sq_instance(s)
        for forced in (True, False):
            rep, res = sq_learn_report(inst, eps=0.1, trials=3, backend="exact", forced=forced, seed=s,
                                       keep=True)
            rc = Alg2Config(eps=0.1).resolve(inst.n)
            want = tolerances_used(res.traces, 0.1 / 3, 0.1 / 3, inst.n, rc.r)
            good = math.isclose(rep["budget"]["min_tolerance"], want, rel_tol=0, abs_tol=1e-15)
            ok &= good
            rows.append({"n": inst.n, "forced": forced, "reported": rep["budget"]["min_tolerance"], "expected": want})
    return ok, {"script": {"tallies": tallies, "measured": measured, "total": oracle.budget.queries},
                "reports": rows}


# --------------------------------------------------------------------------- registry


CRITERIA = [
    ("C1", "approximator certification", "approx", 5, check_certification),
    ("C2", "Chebyshev bound and growth", "approx", 5, check_chebyshev_facts),
    ("C3", "L1 regression vs enumerated OPT", "l1", 300, check_l1),
    ("C4", "sample-based weak learner", "sample", 600, check_weak_sample),
    ("C5", "SQ learner on exact oracles", "sq", 900, check_sq_learner),
    ("C6", "SQ learner per-iteration progress", "sq", 60, check_progress),
    ("C7", "conditional ratio estimate", "sq", 1, check_ratio),
    ("C8", "trade-off weak learner", "tradeoff", 600, check_tradeoff_weak),
    ("C9", "CSQ weak learner", "csq", 300, check_csq),
    ("C10", "boosting contracts", "boost", 900, check_boosting),
    ("C11", "monotonization reduction", "reduction", 10, check_reduction),
    ("C12", "query budget bookkeeping", "budget", 60, check_budget),
]

SUITES = sorted({c[2] for c in CRITERIA}) + ["all"]


def run_criterion(entry) -> Outcome:
    key, title, _, limit, fn = entry
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:           # reported as a failure, not a crash of the suite
        passed, detail = False, {"exception": f"{type(exc).__name__}: {exc}"}
    dt = time.perf_counter() - t0
    return Outcome(key, title, bool(passed) and dt < limit, dt, limit, detail)


def run_suite(suite: str = "all", only=None, echo=None):
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    out = []
    for entry in CRITERIA:
        if suite != "all" and entry[2] != suite:
            continue
        if only and entry[0] not in only:
            continue
        res = run_criterion(entry)
        if echo:
            echo(res.line())
        out.append(res)
    return out
