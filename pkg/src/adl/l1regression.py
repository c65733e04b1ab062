"""Multilinear L1 polynomial regression and threshold rounding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .chebyshev import approx_degree
from .distributions import as_weighted
from .domain import ThresholdPoly, as_matrix
from .simplex import LpError, LpProblem, LpSolution, lp_solve  # noqa: F401  (re-exported)

FEATURE_CAP = 200_000


class FeatureCapError(ValueError):
    pass


@dataclass(eq=False)
class MultilinearPolynomial:
    """p(x) = sum_A coef(A) prod_{i in A} x_i over subsets A of ``ambient``."""

    terms: dict
    ambient: frozenset = frozenset()
    loss: float | None = None      # L1 loss of the fit that produced it, if any

    def __post_init__(self):
        self.terms = {frozenset(A): float(v) for A, v in self.terms.items() if v != 0.0}
        self.ambient = frozenset(self.ambient)
        for A in self.terms:
            if not A <= self.ambient:
                raise ValueError(f"term {sorted(A)} leaves the ambient set")

    @property
    def degree(self) -> int:
        return max((len(A) for A in self.terms), default=0)

    def _tables(self):
        if getattr(self, "_tab", None) is None:
            keys = list(self.terms)
            idx = sorted(set().union(*keys)) if keys else []
            pos = {i: k for k, i in enumerate(idx)}
            M = np.zeros((len(keys), len(idx)), dtype=np.int32)
            for row, A in enumerate(keys):
                M[row, [pos[i] for i in A]] = 1
            sizes = np.array([len(A) for A in keys], dtype=np.int32)
            coefs = np.array([self.terms[A] for A in keys])
            self._tab = (np.array(idx, dtype=np.int64), M.T.copy(), sizes, coefs)
        return self._tab

    def evaluate(self, X) -> np.ndarray:
        X = as_matrix(X)
        idx, MT, sizes, coefs = self._tables()
        if not len(coefs):
            return np.zeros(X.shape[0])
        hits = X[:, idx].astype(np.int32) @ MT if idx.size else np.zeros((X.shape[0], len(coefs)), np.int32)
        return (hits == sizes).astype(float) @ coefs

    def __call__(self, x):
        v = self.evaluate(as_matrix(x))
        return float(v[0]) if np.ndim(x) <= 1 else v


def monomial_features(I, d: int, cap: int = FEATURE_CAP) -> list:
    """All subsets of I with size <= d, ordered by size then lexicographically."""
    I = sorted(set(I))
    d = min(d, len(I))
    total = sum(math.comb(len(I), k) for k in range(d + 1))
    if total > cap:
        raise FeatureCapError(f"{total} features exceed the cap {cap}")
    out = []
    for k in range(d + 1):
        out.extend(frozenset(c) for c in combinations(I, k))
    return out


def _dedupe(X, y, w, I):
    """Collapse rows to distinct (x_I, y) pairs; returns points, labels, weights."""
    XI = X[:, I]
    keys = np.concatenate([XI, y[:, None]], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    ww = np.zeros(len(uniq))
    np.add.at(ww, inv.reshape(-1), w)
    keep = ww > 0
    return uniq[keep, :-1], uniq[keep, -1].astype(float), ww[keep]


class _Span:
    """Incremental orthonormal basis for greedy column selection."""

    def __init__(self, dim, tol=1e-7):
        self.Q = np.zeros((dim, 0))
        self.tol = tol

    def try_add(self, v) -> bool:
        nv = np.linalg.norm(v)
        if nv == 0:
            return False
        r = v - self.Q @ (self.Q.T @ v)
        r = r - self.Q @ (self.Q.T @ r)
        nr = np.linalg.norm(r)
        if nr <= self.tol * nv:
            return False
        self.Q = np.column_stack([self.Q, r / nr])
        return True

    @property
    def rank(self):
        return self.Q.shape[1]


def select_columns(P, d: int, cap: int = FEATURE_CAP):
    """Greedy maximal independent set of monomial columns on the point matrix ``P``.

    Only monomials contained in some row's support can be nonzero, so
    candidates are generated from row supports, level by level.  Local
    coordinates (column indices of ``P``) are returned.
    """
    m, k = P.shape
    target = np.unique(P, axis=0).shape[0]
    span = _Span(m)
    chosen = []
    seen = set()
    supports = [tuple(np.flatnonzero(row)) for row in P]
    processed = 0
    for size in range(min(d, k) + 1):
        for sup in supports:
            if len(sup) < size:
                continue
            for A in combinations(sup, size):
                if A in seen:
                    continue
                seen.add(A)
                processed += 1
                if processed > cap:
                    raise FeatureCapError(f"more than {cap} candidate monomials")
                col = P[:, list(A)].all(axis=1).astype(float) if A else np.ones(m)
                if span.try_add(col):
                    chosen.append(A)
                    if span.rank == target:
                        return chosen
    return chosen


def l1_fit(data, I, d: int, cap: int = FEATURE_CAP) -> MultilinearPolynomial:
    """Degree-<=d multilinear p over coordinates I minimising sum_j w_j |p(x_j) - y_j|.

    The returned polynomial carries the optimal loss in ``.loss``.
    """
    X, y, w = as_weighted(data)
    if X.shape[0] == 0:
        raise ValueError("empty data")
    I = sorted(set(I))
    d = min(d, len(I))
    P, yy, ww = _dedupe(X, y, w, I)
    cols = select_columns(P, d, cap)
    F = np.column_stack([P[:, list(A)].all(axis=1).astype(float) if A else np.ones(len(P))
                         for A in cols])
    m, k = F.shape
    # variables: coefficients (free), e+ (m), e- (m)
    A_eq = np.hstack([F, np.eye(m), -np.eye(m)])
    c = np.concatenate([np.zeros(k), ww, ww])
    bounds = [(None, None)] * k + [(0.0, None)] * (2 * m)
    sol = lp_solve(LpProblem(c, A_eq, ["="] * m, yy, bounds))
    if sol.status != "optimal":
        raise LpError(f"L1 regression LP returned {sol.status}")
    coef = sol.x[:k]
    terms = {frozenset(I[i] for i in A): v for A, v in zip(cols, coef)}
    total = w.sum()
    loss = float(np.dot(ww, np.abs(F @ coef - yy)) / total)
    return MultilinearPolynomial(terms, frozenset(I), loss=loss)


def l1_loss(p, data) -> float:
    X, y, w = as_weighted(data)
    return float(np.dot(w, np.abs(p.evaluate(X) - y)) / w.sum())


def default_grid(eps: float, c: float = 0.125, values=None) -> np.ndarray:
    """Arithmetic grid {0, c*eps, 2c*eps, ...} on [0,1], plus data midpoints and extremes."""
    step = c * eps
    grid = [np.arange(0.0, 1.0 + step / 2, step)]
    if values is not None and len(values):
        v = np.unique(values)
        grid.append((v[:-1] + v[1:]) / 2)
        grid.append([v[0] - 1.0, v[-1] + 1.0])
    return np.unique(np.concatenate(grid))


def threshold_errors(pv, y, w, grid) -> np.ndarray:
    pred = pv[None, :] >= np.asarray(grid)[:, None]
    return (pred != (y[None, :] > 0)).astype(float) @ w / w.sum()


def round_to_hypothesis(p, data, threshold_grid=None, eps: float = 0.05, c: float = 0.125) -> ThresholdPoly:
    """Threshold p at the grid value with least 0-1 error on ``data`` (ties: smallest t)."""
    X, y, w = as_weighted(data)
    pv = p.evaluate(X)
    grid = default_grid(eps, c, pv) if threshold_grid is None else np.asarray(threshold_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty threshold grid")
    errs = threshold_errors(pv, y, w, grid)
    i = int(np.argmin(errs))
    return ThresholdPoly(p, float(grid[i]))


def regression_degree(r: int, eps: float, n_coords: int) -> int:
    return min(approx_degree(max(1, r), eps), n_coords)


def l1_regress_learner(data, I, eps: float, c: float = 0.125) -> ThresholdPoly:
    """L1 regression at the approximator degree for eps/4, then threshold rounding."""
    X, _, _ = as_weighted(data)
    I = sorted(set(I))
    r = int(X[:, I].sum(axis=1).max()) if I else 0
    d = regression_degree(max(r, 1), eps / 4, len(I))
    p = l1_fit(data, I, d)
    return round_to_hypothesis(p, data, eps=eps, c=c)
