"""Weak learner for the regime OPT <= 1/alpha and the boosted (alpha * OPT + eps) learner."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .boosting import BoostConfig, BoostingError, WeakLearnerFailure, WeakLearnerHandle, aboost_di_run
from .domain import (
    Complement,
    Constant,
    CoordinateOne,
    Intersection,
    RegionSplit,
    WeightAtMost,
)
from .learner_sq import forced_correct_policy, random_policy, sq_l1_regression
from .sqoracle import (
    RatioGuardError,
    SqOracle,
    agreement_query,
    error_query,
    ratio_estimate,
    region_coord_query,
    region_label_query,
    region_query,
)

STRICT_ALPHA_MIN = 64
RELAXED_ALPHA_MIN = 4


@dataclass
class Alg3Config:
    alpha: float
    eps: float = 0.1
    r: int | None = None
    T: int | None = None
    degree: int | None = None
    c: float = 4.0
    relaxed: bool = True
    trials: int = 1
    seed: int = 0
    l1_floor: float = 1e-4
    max_leaves: int = 4096

    def resolve(self, n: int) -> "Alg3Config":
        lo = RELAXED_ALPHA_MIN if self.relaxed else STRICT_ALPHA_MIN
        if not lo <= self.alpha <= math.sqrt(n):
            raise ValueError(f"alpha must lie in [{lo}, sqrt(n)] = [{lo}, {math.sqrt(n):.3g}]")
        r = self.r if self.r is not None else max(1, math.ceil(n ** (2 / 3) * self.alpha ** (-1 / 3)))
        T = self.T if self.T is not None else max(1, math.ceil(self.c * n / (self.alpha * r)))
        d = self.degree if self.degree is not None else max(1, math.ceil(self.c * math.sqrt(r / self.alpha)))
        return replace(self, r=r, T=T, degree=d)

    def margin(self, n: int) -> float:
        return self.resolve(n).r / (16 * n)


@dataclass
class Alg3Step:
    t: int
    branch: str
    B: object
    I_before: tuple
    I_after: tuple
    coord: int | None = None
    agreement: float | None = None
    U_next: object = None


@dataclass
class Alg3Trace:
    steps: list = field(default_factory=list)
    outcome: str = ""
    agreement: float | None = None


def alg3_single_run(oracle, cfg: Alg3Config, rng=None, policy=None):
    """One run; returns (RegionSplit hypothesis or None, trace)."""
    n = oracle.n
    cfg = cfg.resolve(n)
    r, T, d, alpha = cfg.r, cfg.T, cfg.degree, cfg.alpha
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    policy = policy or random_policy
    tau1 = r / (800 * n)
    tau_check = r / (100 * n)
    U_parts = ()
    I = tuple(range(n))
    trace = Alg3Trace()
    for t in range(T + 1):
        U = Intersection(U_parts)
        branch, i = policy(t, U, I, rng)
        if branch == "heavy":
            local = CoordinateOne(i)
            B = Intersection(U_parts + (local,))
            h = Constant(1)
            I_next = tuple(j for j in I if j != i)
        else:
            pu = oracle.stat(region_query(U, "U"), tau1)
            gamma = pu - tau1
            dropped = []
            if gamma > 0:
                for j in I:
                    pj = oracle.stat(region_coord_query(U, j), tau1)
                    try:
                        if ratio_estimate(pj, pu, tau1, gamma) >= (1 + 1 / 100) * r / n:
                            dropped.append(j)
                    except RatioGuardError:
                        pass
            I_next = tuple(j for j in I if j not in dropped)
            local = WeightAtMost(I_next, 2 * r)
            B = Intersection(U_parts + (local,))
            h, _ = sq_l1_regression(oracle, B, I_next, d, 1.0 / alpha, max(gamma, 1e-3) / 6,
                                    cfg.l1_floor, cfg.max_leaves)
        U_parts = U_parts + (Complement(local),)
        P = oracle.stat(agreement_query(h, B), tau_check)
        step = Alg3Step(t, branch, B, I, I_next, i, P, Intersection(U_parts))
        trace.steps.append(step)
        I = I_next
        if P >= r / (4 * n):
            rest = Complement(B)
            e0 = oracle.stat(region_label_query(rest, 1), tau_check)
            e1 = oracle.stat(region_label_query(rest, 0), tau_check)
            c = 0 if e0 <= e1 else 1
            trace.outcome = "returned"
            trace.agreement = P
            return RegionSplit(B, h, Constant(c)), trace
    trace.outcome = "iterations exhausted"
    return None, trace


class NoWeakHypothesis(WeakLearnerFailure):
    pass


@dataclass
class Alg3Result:
    hypothesis: object
    estimate: float
    trial: int
    candidates: int


def alg3_weak_learner_run(oracle_factory, cfg: Alg3Config, trials: int | None = None, policy=None,
                          validator=None) -> Alg3Result:
    trials = trials or cfg.trials
    first = oracle_factory(0)
    n = first.n
    rc = cfg.resolve(n)
    margin = rc.r / (16 * n)
    tau_v = rc.r / (100 * n)
    validator = validator or oracle_factory(-1)
    ss = np.random.SeedSequence(cfg.seed).spawn(trials)
    best = None
    count = 0
    for k in range(trials):
        oracle = first if k == 0 else oracle_factory(k)
        h, _ = alg3_single_run(oracle, rc, np.random.default_rng(ss[k]), policy)
        if h is None:
            continue
        count += 1
        e = validator.stat(error_query(h), tau_v)
        if best is None or e < best[0]:
            best = (e, k, h)
    if best is None or best[0] > 0.5 - margin - tau_v:
        raise NoWeakHypothesis(f"no candidate with validated error <= 1/2 - {margin:.4g} in {trials} trials")
    return Alg3Result(best[2], best[0], best[1], count)


def alg3_weak_learner(oracle_factory, cfg: Alg3Config, trials: int | None = None, policy=None):
    return alg3_weak_learner_run(oracle_factory, cfg, trials, policy).hypothesis


def alg3_handle(cfg: Alg3Config, backend: str = "exact", forced: bool = False, n: int | None = None):
    """Weak-learner handle running the tradeoff learner on each boosting view."""

    def fn(view, seed):
        rc = cfg.resolve(view.n)
        policy = forced_correct_policy(view, rc.r) if forced else None
        factory = lambda k: SqOracle(view, backend, seed=(seed, k) if k >= 0 else (seed, 10**6))
        return alg3_weak_learner(factory, replace(cfg, seed=seed), policy=policy)

    margin = cfg.margin(n) if n is not None else 0.0
    return WeakLearnerHandle(fn, 0.5 - 1.0 / (2 * cfg.alpha), margin, "alg3")


@dataclass
class TradeoffResult:
    hypothesis: object
    error: float
    runs: list


def tradeoff_learner(dist, alpha: float, eps: float, cfg: Alg3Config | None = None,
                     backend: str = "exact", forced: bool = False,
                     boost_cfg: BoostConfig | None = None) -> TradeoffResult:
    """alpha * OPT + eps learner: boosted tradeoff weak learner at eps and at eps/4, better validated run wins."""
    cfg = cfg or Alg3Config(alpha=alpha)
    n = dist.n
    handle = alg3_handle(cfg, backend, forced, n)
    # OPT / (1 - 2 a) = alpha * OPT
    boost_alpha = 0.5 - 1.0 / (2 * alpha)
    runs = []
    for e in (eps, eps / 4):
        try:
            run = aboost_di_run(handle, dist, boost_alpha, handle.gamma, e, boost_cfg or BoostConfig(seed=cfg.seed))
        except BoostingError as exc:      # a weak-learner failure in round 1 voids this run only
            runs.append((e, None, str(exc)))
            continue
        err = float(np.dot(dist.weights, run.hypothesis.predict(dist.X) != dist.y))
        runs.append((e, run, err))
    done = [(err, run) for _, run, err in runs if run is not None]
    if not done:
        raise WeakLearnerFailure("both boosted runs failed: " + "; ".join(str(x[2]) for x in runs))
    err, run = min(done, key=lambda z: z[0])
    return TradeoffResult(run.hypothesis, err, runs)
