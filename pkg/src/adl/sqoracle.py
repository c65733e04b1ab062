"""Statistical-query oracles with budget accounting.

Three backends answer tolerance-tau queries about an explicit distribution:

* ``exact``: the true expectation;
* ``empirical``: a fresh i.i.d. sample mean, sized by Hoeffding so that a
  single answer misses by more than tau with probability at most ``delta_q``;
* ``adversarial``: the true value pushed 0.99*tau in a seeded random direction.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field

import numpy as np

RANGE_SLACK = 1e-12
BACKENDS = ("exact", "empirical", "adversarial")


class QueryRangeError(ValueError):
    pass


class RatioGuardError(ValueError):
    pass


def _check_range(v, what):
    if v.size and np.max(np.abs(v)) > 1 + RANGE_SLACK:
        raise QueryRangeError(f"{what} produced a value outside [-1, 1]")


@dataclass(frozen=True, eq=False)
class StatQuery:
    """q(x, y) in [-1, 1]; ``fn`` maps a batch (X, y) to an array."""

    fn: object
    descriptor: str = "stat"

    def __call__(self, X, y) -> np.ndarray:
        v = np.asarray(self.fn(X, y), dtype=float).reshape(-1)
        _check_range(v, self.descriptor)
        return v


@dataclass(frozen=True, eq=False)
class CorrQuery:
    """q(x) in [-1, 1], answered as E[(2y-1) q(x)]."""

    fn: object
    descriptor: str = "corr"

    def __call__(self, X) -> np.ndarray:
        v = np.asarray(self.fn(X), dtype=float).reshape(-1)
        _check_range(v, self.descriptor)
        return v


@dataclass
class QueryBudget:
    queries: int = 0
    min_tolerance: float = math.inf
    wall_ms: float = 0.0
    history: list = field(default_factory=list)
    _lock: object = field(default_factory=threading.Lock, repr=False, compare=False)

    def record(self, tau: float, descriptor: str, elapsed_ms: float = 0.0):
        with self._lock:
            self.queries += 1
            self.min_tolerance = min(self.min_tolerance, tau)
            self.wall_ms += elapsed_ms
            self.history.append((descriptor, tau))

    def merge(self, other: "QueryBudget") -> "QueryBudget":
        with self._lock:
            self.queries += other.queries
            self.min_tolerance = min(self.min_tolerance, other.min_tolerance)
            self.wall_ms += other.wall_ms
            self.history.extend(other.history)
        return self

    def snapshot(self) -> tuple:
        return self.queries, self.min_tolerance

    def report(self, backend: str, timing: bool = True) -> dict:
        out = {"queries": self.queries,
               "min_tolerance": None if math.isinf(self.min_tolerance) else self.min_tolerance,
               "backend": backend}
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


def _seed_entropy(seed):
    # negative ints (e.g. the validator index -1) get their own stream
    if seed is None or isinstance(seed, (np.random.SeedSequence, np.random.Generator)):
        return seed
    items = seed if isinstance(seed, (tuple, list)) else (seed,)
    if all(int(s) >= 0 for s in items):
        return seed
    return [abs(int(s)) for s in items] + [0x5EED]


class SqOracle:
    """STAT / CSTAT oracle over an explicit distribution.

    ``dist`` is kept public for debug hooks and verification code; learners
    only call :meth:`stat` / :meth:`cstat`.
    """

    def __init__(self, dist, backend: str = "exact", seed=0, delta_q: float = 1e-6,
                 budget: QueryBudget | None = None):
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        self.dist = dist
        self.n = dist.n
        self.backend = backend
        self.seed = seed
        self.delta_q = delta_q
        self.rng = np.random.default_rng(_seed_entropy(seed))
        self.budget = budget if budget is not None else QueryBudget()
        self._lock = threading.Lock()

    def samples_per_query(self, tau: float) -> int:
        return math.ceil(2.0 * math.log(2.0 / self.delta_q) / tau**2)

    def _answer(self, values: np.ndarray, tau: float) -> float:
        p = self.dist.weights
        exact = float(np.dot(p, values))
        if self.backend == "exact":
            return exact
        with self._lock:
            if self.backend == "adversarial":
                sign = 1.0 if self.rng.random() < 0.5 else -1.0
                return float(np.clip(exact + sign * 0.99 * tau, -1.0, 1.0))
            m = self.samples_per_query(tau)
            counts = self.rng.multinomial(m, p / p.sum())
        return float(np.dot(counts, values) / m)

    def stat(self, q: StatQuery, tau: float) -> float:
        if tau <= 0:
            raise ValueError("tolerance must be positive")
        t0 = time.perf_counter()
        v = self._answer(q(self.dist.X, self.dist.y), tau)
        self.budget.record(tau, q.descriptor, 1000 * (time.perf_counter() - t0))
        return v

    def cstat(self, q: CorrQuery, tau: float) -> float:
        if tau <= 0:
            raise ValueError("tolerance must be positive")
        t0 = time.perf_counter()
        vals = (2.0 * self.dist.y - 1.0) * q(self.dist.X)
        v = self._answer(vals, tau)
        self.budget.record(tau, q.descriptor, 1000 * (time.perf_counter() - t0))
        return v

    def clone(self, seed=None, share_budget: bool = False) -> "SqOracle":
        return SqOracle(self.dist, self.backend, self.seed if seed is None else seed,
                        self.delta_q, self.budget if share_budget else None)

    def csq_view(self) -> "CsqOracle":
        return CsqOracle(self)

    def report(self, timing: bool = True) -> dict:
        return self.budget.report(self.backend, timing)


class CsqOracle:
    """Restricted handle exposing only correlational queries."""

    __slots__ = ("_inner",)

    def __init__(self, inner: SqOracle):
        object.__setattr__(self, "_inner", inner)

    def cstat(self, q: CorrQuery, tau: float) -> float:
        return self._inner.cstat(q, tau)

    @property
    def n(self) -> int:
        return self._inner.n

    @property
    def budget(self) -> QueryBudget:
        return self._inner.budget

    def __setattr__(self, key, value):
        raise AttributeError("CsqOracle is read-only")


def ratio_estimate(p1_hat: float, p2_hat: float, tau: float, gamma: float) -> float:
    """P1/P2 from tau-accurate estimates; accurate to 2*tau/gamma when p2_hat - tau >= gamma > 0."""
    if gamma <= 0 or p2_hat - tau < gamma:
        raise RatioGuardError(f"guard violated: p2_hat - tau = {p2_hat - tau:.3g} < gamma = {gamma:.3g}")
    return p1_hat / p2_hat


# --------------------------------------------------------------------------- query builders


def region_query(region, descriptor="mass") -> StatQuery:
    return StatQuery(lambda X, y: region.contains(X).astype(float), descriptor)


def region_label_query(region, label: int, descriptor=None) -> StatQuery:
    return StatQuery(lambda X, y: (region.contains(X) & (y == label)).astype(float),
                     descriptor or f"mass&y={label}")


def region_coord_query(region, i: int) -> StatQuery:
    return StatQuery(lambda X, y: (region.contains(X) & (X[:, i] == 1)).astype(float), f"mass&x{i}")


def error_query(h, region=None, descriptor="error") -> StatQuery:
    """1(x in region and h(x) != y)."""
    def fn(X, y):
        wrong = h.predict(X) != y
        return (wrong & region.contains(X)).astype(float) if region is not None else wrong.astype(float)
    return StatQuery(fn, descriptor)


def agreement_query(h, region, descriptor="agreement") -> StatQuery:
    """1(x in B and h(x)=y) - 1(x in B and h(x)!=y)."""
    def fn(X, y):
        inside = region.contains(X)
        return np.where(inside, np.where(h.predict(X) == y, 1.0, -1.0), 0.0)
    return StatQuery(fn, descriptor)
