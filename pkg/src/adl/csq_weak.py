"""Correlational-query weak learner: parity correlations, a bounded low-degree LP, threshold rounding.

Inside this module features and labels use the +-1 encoding: a bit b becomes
2b - 1 and a label y becomes 2y - 1.  Hypotheses leaving the module are the
usual 0/1 predictors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .domain import ThresholdPoly, all_points, as_matrix
from .simplex import LpProblem, lp_solve
from .sqoracle import CorrQuery

ENUMERATE_MAX_N = 16


class CsqLearnerError(RuntimeError):
    pass


def to_pm(bits):
    return 2.0 * np.asarray(bits, dtype=float) - 1.0


def from_pm(values):
    return (np.asarray(values) > 0).astype(np.uint8)


class ParityBasis:
    """Parities g_S(x) = prod_{i in S} (2 x_i - 1) for all |S| <= d, ordered by size then lexicographically."""

    def __init__(self, n: int, d: int):
        if d < 0:
            raise ValueError("degree must be >= 0")
        self.n = n
        self.d = min(d, n)
        self.sets = [S for k in range(self.d + 1) for S in combinations(range(n), k)]

    def __len__(self):
        return len(self.sets)

    def evaluate(self, X) -> np.ndarray:
        """Matrix G with G[j, k] = g_{S_k}(x_j)."""
        Z = to_pm(as_matrix(X, self.n))
        G = np.ones((Z.shape[0], len(self.sets)))
        for k, S in enumerate(self.sets):
            if S:
                G[:, k] = np.prod(Z[:, list(S)], axis=1)
        return G

    def query(self, k: int) -> CorrQuery:
        S = list(self.sets[k])
        return CorrQuery(lambda X: np.prod(to_pm(X[:, S]), axis=1) if S else np.ones(len(X)),
                         f"parity{tuple(S)}")


@dataclass
class ParityPolynomial:
    """p(x) = sum_S coef_S g_S(x)."""

    basis: ParityBasis
    coefs: np.ndarray
    objective: float = 0.0

    @property
    def terms(self):
        return {S: float(c) for S, c in zip(self.basis.sets, self.coefs) if abs(c) > 1e-12}

    @property
    def degree(self):
        sizes = [len(S) for S, c in zip(self.basis.sets, self.coefs) if abs(c) > 1e-12]
        return max(sizes, default=0)

    def evaluate(self, X) -> np.ndarray:
        return self.basis.evaluate(X) @ self.coefs

    def __call__(self, X):
        return self.evaluate(X)


def parity_correlations(oracle, basis: ParityBasis, tau: float) -> np.ndarray:
    """One cstat call per parity: estimates of E[(2y - 1) g_S(x)]."""
    if tau <= 0:
        raise ValueError("tolerance must be positive")
    return np.array([oracle.cstat(basis.query(k), tau) for k in range(len(basis))])


def constraint_points(n: int, mode: str = "enumerate", extra=None, random_points: int = 2048, seed=0):
    if mode == "enumerate":
        if n > ENUMERATE_MAX_N:
            raise ValueError(f"enumeration constraints need n <= {ENUMERATE_MAX_N}")
        return all_points(n)
    if mode != "support+random":
        raise ValueError("constraint mode must be 'enumerate' or 'support+random'")
    rng = np.random.default_rng(seed)
    R = rng.integers(0, 2, size=(random_points, n), dtype=np.uint8)
    pts = R if extra is None else np.concatenate([as_matrix(extra, n), R])
    return np.unique(pts, axis=0)


def solve_parity_lp(estimates, basis: ParityBasis, points) -> ParityPolynomial:
    """max sum_S a_S p_S  s.t.  |sum_S a_S g_S(x)| <= 1 on every constraint point, |a_S| <= 1."""
    est = np.asarray(estimates, dtype=float)
    G = basis.evaluate(points)
    A = np.vstack([G, G])
    m = len(G)
    prob = LpProblem(est, A, ["<="] * m + [">="] * m, np.concatenate([np.ones(m), -np.ones(m)]),
                     bounds=[(-1.0, 1.0)] * len(basis), maximize=True)
    sol = lp_solve(prob)
    if sol.status != "optimal":
        raise CsqLearnerError(f"parity LP ended with status {sol.status}")
    return ParityPolynomial(basis, np.asarray(sol.x), float(sol.objective))


def threshold_grid(eps: float, c: float = 0.125) -> np.ndarray:
    """Thresholds -1, -1 + c*eps, ..., 1 for rounding a polynomial bounded by 1."""
    step = c * eps
    k = math.floor(1.0 / step + 1e-9)
    pos = np.arange(0, k + 1) * step
    return np.unique(np.concatenate([-pos[::-1], pos, [-1.0, 1.0]]))


def _sign_query(p: ParityPolynomial, t: float) -> CorrQuery:
    return CorrQuery(lambda X: np.where(p.evaluate(X) >= t, 1.0, -1.0), f"sign(p-{t:.4g})")


@dataclass
class CsqResult:
    hypothesis: ThresholdPoly
    estimate: float
    polynomial: ParityPolynomial
    correlations: np.ndarray
    threshold_errors: np.ndarray
    thresholds: np.ndarray


def csq_weak_learner_run(oracle, eps: float, d: int, tau: float | None = None, mode: str = "enumerate",
                         points=None, c: float = 0.125, kappa: float = 1 / 16, seed=0) -> CsqResult:
    """Weak learner that touches the distribution only through ``oracle.cstat``.

    Threshold t is scored by one correlational query of sign(p - t), using
    Pr[h != y] = (1 - E[y h]) / 2 in the +-1 encoding.
    """
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    n = oracle.n
    tau = tau if tau is not None else kappa * eps / 4
    basis = ParityBasis(n, d)
    corr = parity_correlations(oracle, basis, tau)
    if points is None:
        mode = mode if n <= ENUMERATE_MAX_N else "support+random"
        points = constraint_points(n, mode, seed=seed)
    p = solve_parity_lp(corr, basis, points)
    grid = threshold_grid(eps, c)
    errs = np.array([(1.0 - oracle.cstat(_sign_query(p, float(t)), tau)) / 2 for t in grid])
    best = int(np.argmin(errs))
    if errs[best] > 0.5 - kappa * eps:
        raise CsqLearnerError(f"no threshold reaches estimated error 1/2 - {kappa}*eps "
                              f"(best {errs[best]:.4f})")
    h = ThresholdPoly(p, float(grid[best]))
    return CsqResult(h, float(errs[best]), p, corr, errs, grid)


def csq_weak_learner(oracle, eps: float, d: int, **kw):
    return csq_weak_learner_run(oracle, eps, d, **kw).hypothesis


def csq_degree(n: int, eps: float, c: float = 2.0) -> int:
    """ceil(c * sqrt(n) * log2(1/eps))."""
    return max(1, math.ceil(c * math.sqrt(n) * math.log2(1 / eps)))
