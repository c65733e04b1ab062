"""Statistical-query agnostic learner for monotone disjunctions (additive error).

A run peels the domain into disjoint pieces B_0, B_1, ... .  Each iteration
either guesses a heavy coordinate i (B = {x in U : x_i = 1}, predict 1) or
guesses there is none, drops coordinates that are frequent on U, and runs an
SQ implementation of L1 regression on the light part of U.  The output is the
decision list of the pieces with a constant default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bruteforce import opt_enumerate
from .distributions import ExplicitDistribution
from .domain import (
    Complement,
    Constant,
    CoordinateOne,
    DecisionList,
    Intersection,
    WeightAtMost,
)
from .l1regression import default_grid, l1_fit
from .sqoracle import (
    RatioGuardError,
    StatQuery,
    error_query,
    ratio_estimate,
    region_coord_query,
    region_label_query,
    region_query,
)
from .domain import ThresholdPoly


@dataclass
class Alg2Config:
    eps: float
    r: int | None = None
    T: int | None = None
    c: float = 4.0
    degree_c: float = 2.0
    trials: int = 1
    seed: int = 0
    guess: str = "random"          # random | forced-correct
    l1_floor: float = 1e-4         # smallest tolerance the SQ regression will use
    max_leaves: int = 4096
    grid_c: float = 0.125

    def resolve(self, n: int) -> "Alg2Config":
        if not 0 < self.eps < 0.5:
            raise ValueError("eps must lie in (0, 1/2)")
        r = self.r if self.r is not None else max(1, math.ceil(n ** (2 / 3)))
        T = self.T if self.T is not None else max(1, math.ceil(self.c * n * math.log(1 / self.eps) / r))
        return replace(self, r=r, T=T)

    def tolerances(self, n: int) -> dict:
        cfg = self.resolve(n)
        return {"light": cfg.eps * cfg.r / (800 * n), "mass": cfg.eps / 100, "validate": cfg.eps / 3}


@dataclass
class Alg2Step:
    t: int
    branch: str                 # heavy | light
    U: object                   # region before the step
    B: object
    I_before: tuple
    I_after: tuple
    coord: int | None = None
    dropped: tuple = ()
    guard_ok: bool = True
    mass_estimate: float | None = None
    queries: int = 0
    l1_info: dict = field(default_factory=dict)


@dataclass
class Alg2Trace:
    steps: list = field(default_factory=list)
    outcome: str = ""
    final_U: object = None
    default: int | None = None


class _LightFitCache:
    """Memo of L1 fits keyed by the reconstructed data; the queries are always issued."""

    def __init__(self):
        self.store = {}

    def fit(self, data, I, d):
        key = (data.X.tobytes(), data.y.tobytes(), data.weights.round(15).tobytes(), tuple(I), d)
        if key not in self.store:
            self.store[key] = l1_fit(data, I, d)
        return self.store[key]


_CACHE = _LightFitCache()


def _point_query(region, I, prefix, label=None):
    idx = np.asarray(I[:len(prefix)], dtype=np.int64)
    pat = np.asarray(prefix, dtype=np.uint8)

    def fn(X, y):
        ok = region.contains(X)
        if idx.size:
            ok &= np.all(X[:, idx] == pat, axis=1)
        if label is not None:
            ok &= y == label
        return ok.astype(float)
    return StatQuery(fn, "leaf" if label is not None else "prefix")


def sq_l1_regression(oracle, region, I, degree: int, eps_p: float, mass_lower: float,
                     floor: float = 1e-4, max_leaves: int = 4096, grid_c: float = 0.125,
                     cache: _LightFitCache | None = _CACHE):
    """L1 regression on D conditioned on ``region`` using only STAT queries.

    The conditional law of (x_I, y) is rebuilt by a prefix tree of mass queries
    (subtrees whose estimate is at most the tolerance are pruned), the L1 fit runs
    on that reconstruction, and each candidate threshold is scored by one STAT
    query.  Returns (hypothesis, info).
    """
    I = sorted(I)
    L = min(2 ** (len(I) + 1), max_leaves)
    tau = max(floor, eps_p * mass_lower / (4 * L))
    leaves = []

    def expand(prefix):
        if len(prefix) == len(I):
            for lab in (0, 1):
                v = oracle.stat(_point_query(region, I, prefix, lab), tau)
                if v > tau:
                    leaves.append((prefix, lab, v))
            return
        for bit in (0, 1):
            child = prefix + (bit,)
            v = oracle.stat(_point_query(region, I, child), tau)
            if v > tau:
                expand(child)

    expand(())
    if not leaves:
        return Constant(0), {"tau": tau, "leaves": 0, "thresholds": 0}
    n = oracle.n
    Xr = np.zeros((len(leaves), n), dtype=np.uint8)
    for k, (pre, _, _) in enumerate(leaves):
        Xr[k, I] = pre
    yr = np.array([lab for _, lab, _ in leaves], dtype=np.uint8)
    wr = np.array([v for _, _, v in leaves])
    recon = ExplicitDistribution(n, Xr, yr, wr, normalize=True)
    d = min(degree, len(I))
    p = cache.fit(recon, I, d) if cache is not None else l1_fit(recon, I, d)
    grid = default_grid(eps_p, grid_c, p.evaluate(recon.X))
    tau_thr = max(floor, eps_p * mass_lower / 4)
    errs = [oracle.stat(error_query(ThresholdPoly(p, float(t)), region, "threshold"), tau_thr)
            for t in grid]
    best = int(np.argmin(errs))
    return ThresholdPoly(p, float(grid[best])), {"tau": tau, "tau_threshold": tau_thr,
                                                  "leaves": len(leaves), "degree": d, "thresholds": len(grid)}


def forced_correct_policy(dist, r: int, S=None):
    """Guess policy that consults a fixed optimal disjunction (lexicographically smallest)."""
    if S is None:
        _, f, _ = opt_enumerate(dist, "monotone")
        S = sorted(f.support)
    S = set(S)
    n = dist.n

    def policy(t, U, I, rng):
        inside = U.contains(dist.X)
        mass = float(dist.weights[inside].sum())
        if mass > 0:
            for i in sorted(S & set(I)):
                cond = float(dist.weights[inside & (dist.X[:, i] == 1)].sum()) / mass
                if cond >= r / n:
                    return "heavy", i
        return "light", None
    policy.S = tuple(sorted(S))
    return policy


def random_policy(t, U, I, rng):
    if I and rng.random() < 0.5:
        return "heavy", int(sorted(I)[rng.integers(len(I))])
    return "light", None


def alg2_single_run(oracle, cfg: Alg2Config, rng=None, policy=None):
    """One run; returns (DecisionList or None, trace)."""
    n = oracle.n
    cfg = cfg.resolve(n)
    eps, r, T = cfg.eps, cfg.r, cfg.T
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    policy = policy or random_policy
    tau1 = eps * r / (800 * n)
    gamma = eps / 3 - eps / 100 - 2 * tau1
    U_parts = ()
    I = tuple(range(n))
    entries = []
    trace = Alg2Trace()
    for t in range(T + 1):
        U = Intersection(U_parts)
        q0 = oracle.budget.queries
        branch, i = policy(t, U, I, rng)
        if branch == "heavy":
            local = CoordinateOne(i)
            B = Intersection(U_parts + (local,))
            h = Constant(1)
            I_next = tuple(j for j in I if j != i)
            step = Alg2Step(t, "heavy", U, B, I, I_next, coord=i)
        else:
            pu = oracle.stat(region_query(U, "U"), tau1)
            dropped = []
            guard = True
            for j in I:
                pj = oracle.stat(region_coord_query(U, j), tau1)
                try:
                    ratio = ratio_estimate(pj, pu, tau1, gamma)
                except RatioGuardError:
                    guard = False
                    continue
                if ratio >= (1 + 1 / 100) * r / n:
                    dropped.append(j)
            if not guard:
                dropped = []
            I_next = tuple(j for j in I if j not in dropped)
            local = WeightAtMost(I_next, 2 * r)
            B = Intersection(U_parts + (local,))
            deg = max(1, math.ceil(cfg.degree_c * math.sqrt(r) * math.log(T / eps)))
            h, info = sq_l1_regression(oracle, B, I_next, deg, eps / 3, gamma / 3,
                                       cfg.l1_floor, cfg.max_leaves, cfg.grid_c)
            step = Alg2Step(t, "light", U, B, I, I_next, dropped=tuple(dropped), guard_ok=guard,
                            l1_info=info)
        entries.append((B, h))
        U_parts = U_parts + (Complement(local),)
        U_next = Intersection(U_parts)
        m = oracle.stat(region_query(U_next, "U_next"), eps / 100)
        step.mass_estimate = m
        step.queries = oracle.budget.queries - q0
        trace.steps.append(step)
        I = I_next
        if m <= eps / 3:
            e0 = oracle.stat(region_label_query(U_next, 1), eps / 100)
            e1 = oracle.stat(region_label_query(U_next, 0), eps / 100)
            c = 0 if e0 <= e1 else 1
            step.queries = oracle.budget.queries - q0
            trace.outcome = "returned"
            trace.final_U = U_next
            trace.default = c
            return DecisionList(entries, Constant(c)), trace
    trace.outcome = "iterations exhausted"
    trace.final_U = Intersection(U_parts)
    return None, trace


@dataclass
class Alg2Result:
    hypothesis: object
    estimate: float
    trial: int
    candidates: int
    trials: int
    traces: list = field(default_factory=list)


def alg2_learner(oracle_factory, cfg: Alg2Config, policy=None, validator=None) -> Alg2Result:
    """Repeat the single run at error eps/3 and keep the candidate with least estimated error.

    ``oracle_factory(k)`` supplies the oracle for trial k; ``validator`` (default:
    ``oracle_factory(-1)``) answers the STAT(eps/3) validation queries.
    """
    run_cfg = replace(cfg, eps=cfg.eps / 3)
    validator = validator or oracle_factory(-1)
    ss = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    best = None
    count = 0
    traces = []
    for k in range(cfg.trials):
        h, tr = alg2_single_run(oracle_factory(k), run_cfg, np.random.default_rng(ss[k]), policy)
        traces.append(tr)
        if h is None:
            continue
        count += 1
        e = validator.stat(error_query(h), cfg.eps / 3)
        if best is None or e < best[0]:
            best = (e, k, h)
    if best is None:
        raise RuntimeError(f"no candidate produced in {cfg.trials} trials")
    return Alg2Result(best[2], best[0], best[1], count, cfg.trials, traces)
