"""Smooth agnostic boosting.

The engine keeps margins M_j = sum_t a_t (2[h_t(x_j) = y_j] - 1) and shows the
weak learner the view D_t(j) proportional to p_j * min(1, exp(-M_j)).  The
step a_t minimises the convex potential

    Phi(M) = sum_j p_j * phi(M_j),  phi(m) = exp(-m) if m >= 0 else 1 - m,

along h_t, so Phi never increases.  Since min(1, exp(-m)) <= 1 the view never
puts more than 1/Phi_t times the base mass on any example, and the run stops once
the potential falls under the smoothing floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import EmpiricalSample, ExplicitDistribution, reweighted
from .domain import Hypothesis, WeightedMajority


class BoostingError(RuntimeError):
    def __init__(self, msg, round_index=None):
        super().__init__(msg)
        self.round_index = round_index


class WeakLearnerFailure(RuntimeError):
    pass


@dataclass
class WeakLearnerHandle:
    """``fn(view, seed)`` returns a Hypothesis (or None / raises on failure)."""

    fn: object
    alpha: float
    gamma: float
    name: str = "weak"

    def __call__(self, view, seed):
        try:
            return self.fn(view, seed)
        except WeakLearnerFailure:
            return None


@dataclass
class BoostConfig:
    c: float = 1.0
    max_rounds: int = 40
    floor: float = 1e-3
    retries: int = 10
    seed: int = 0
    rounds: int | None = None    # overrides ceil(c / gamma^2)

    def round_budget(self, gamma: float) -> int:
        r = self.rounds if self.rounds is not None else math.ceil(self.c / gamma**2)
        return max(1, min(r, self.max_rounds))


@dataclass
class BoostRun:
    hypothesis: Hypothesis
    error: float
    rounds: int
    weak_calls: int
    potentials: list = field(default_factory=list)
    max_density: list = field(default_factory=list)
    round_errors: list = field(default_factory=list)
    prefix_errors: list = field(default_factory=list)
    terms: list = field(default_factory=list)
    stopped: str = ""


def _phi(m):
    return np.where(m >= 0, np.exp(-np.maximum(m, 0)), 1 - m)


def _dphi(m):
    return -np.minimum(1.0, np.exp(-m))


def _line_search(p, M, u, hi=20.0, iters=60):
    """argmin_{a in [0, hi]} sum p phi(M + a u) by bisection on the derivative."""
    g = lambda a: float(np.dot(p * u, _dphi(M + a * u)))
    if g(0.0) >= 0:
        return 0.0
    if g(hi) <= 0:
        return hi
    lo = 0.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _as_explicit(data) -> ExplicitDistribution:
    return data.to_explicit() if isinstance(data, EmpiricalSample) else data


def boost_engine(weak: WeakLearnerHandle, data, gamma: float, rounds: int, cfg: BoostConfig) -> BoostRun:
    data = _as_explicit(data)
    X, y = data.X, data.y
    p = data.weights / data.weights.sum()
    M = np.zeros(len(p))
    terms = []
    H = np.zeros(len(p))
    best = None
    run = BoostRun(None, 1.0, 0, 0)
    run.potentials.append(float(np.dot(p, _phi(M))))
    for t in range(rounds):
        mu = np.minimum(1.0, np.exp(-M))
        mass = float(np.dot(p, mu))
        if mass < cfg.floor:
            run.stopped = "floor"
            break
        run.max_density.append(float(np.max(mu / mass)))
        view = reweighted(data, p * mu)
        h = None
        for attempt in range(cfg.retries):
            run.weak_calls += 1
            cand = weak(view, _seed(cfg.seed, t, attempt))
            if cand is None:
                continue
            e = float(np.dot(view.weights, cand.predict(view.X) != view.y))
            if e <= 0.5 - gamma + 1e-12:
                h = cand
                break
        if h is None:
            if t == 0:
                raise BoostingError(f"weak learner failed {cfg.retries} consecutive attempts in round 1",
                                    round_index=1)
            run.stopped = f"weak learner failed in round {t + 1}"
            break
        correct = h.predict(X) == y
        u = np.where(correct, 1.0, -1.0)
        a = _line_search(p, M, u)
        if a <= 0:
            a = 1e-9
        M = M + a * u
        terms.append((a, h))
        H = H + a * (2.0 * h.predict(X) - 1.0)
        run.potentials.append(float(np.dot(p, _phi(M))))
        single = float(np.dot(p, ~correct))
        combined = float(np.dot(p, (H > 0).astype(np.uint8) != y))
        run.round_errors.append(single)
        run.prefix_errors.append(combined)
        for err, kind in ((combined, "combined"), (single, "single")):
            if best is None or err < best[0] - 1e-15:
                best = (err, kind, len(terms), h)
        run.rounds = t + 1
    else:
        run.stopped = run.stopped or "round budget"
    if best is None:
        raise BoostingError("no round completed", round_index=1)
    err, kind, k, h = best
    run.terms = terms
    run.error = err
    run.hypothesis = WeightedMajority(terms[:k]) if kind == "combined" else WeightedMajority([(1.0, h)])
    return run


def _seed(base, t, attempt):
    return int(np.random.SeedSequence([int(base) & 0xFFFFFFFF, t, attempt]).generate_state(1)[0])


def aboost_run(weak: WeakLearnerHandle, data, alpha: float, gamma: float,
               cfg: BoostConfig | None = None) -> BoostRun:
    cfg = cfg or BoostConfig()
    return boost_engine(weak, data, gamma, cfg.round_budget(gamma), cfg)


def aboost(weak: WeakLearnerHandle, data, alpha: float, gamma: float, cfg: BoostConfig | None = None):
    """Boost ``weak`` to error OPT + alpha on ``data`` (returns a WeightedMajority)."""
    return aboost_run(weak, data, alpha, gamma, cfg).hypothesis


def di_budget(gamma: float, delta: float, c: float = 1.0) -> int:
    """ceil(c * gamma^-2 * Delta^-1 * log(1/Delta)) weak-learner calls for a guess Delta."""
    return math.ceil(c * gamma**-2 / delta * math.log(1.0 / delta))


def delta_schedule(eps: float) -> list:
    """Guesses 1/4, 1/8, ... halving down to (and including) eps."""
    out = [0.25]
    while out[-1] / 2 > eps:
        out.append(out[-1] / 2)
    if out[-1] > eps:
        out.append(eps)
    return out


@dataclass
class DiRun:
    hypothesis: Hypothesis
    error: float
    schedule: list
    budgets: list
    weak_calls: int
    chosen_delta: float
    engine: BoostRun


def aboost_di_run(weak: WeakLearnerHandle, data, alpha: float, gamma: float, eps: float,
                  cfg: BoostConfig | None = None) -> DiRun:
    """Boosting for error OPT/(1 - 2 alpha) + eps with an unknown OPT.

    The engine is deterministic in its round budget, so a run with the budget of
    the smallest guess contains every shorter run as a prefix; each guess is
    validated on its prefix and the best validated prefix is returned.
    """
    cfg = cfg or BoostConfig()
    sched = delta_schedule(min(eps, 0.25))
    c = cfg.c
    budgets = [max(1, min(di_budget(gamma, d, c), cfg.max_rounds)) for d in sched]
    run = boost_engine(weak, data, gamma, max(budgets), cfg)
    data = _as_explicit(data)
    best = None
    for d, b in zip(sched, budgets):
        k = min(b, len(run.terms))
        if k == 0:
            continue
        h = WeightedMajority(run.terms[:k])
        err = float(np.dot(data.weights, h.predict(data.X) != data.y))
        if best is None or err < best[0] - 1e-15:
            best = (err, h, d)
    if best is None or run.error < best[0] - 1e-15:
        best = (run.error, run.hypothesis, sched[-1])
    return DiRun(best[1], best[0], sched, budgets, run.weak_calls, best[2], run)


def aboost_di(weak: WeakLearnerHandle, data, alpha: float, gamma: float, eps: float,
              cfg: BoostConfig | None = None):
    return aboost_di_run(weak, data, alpha, gamma, eps, cfg).hypothesis
