"""Dense two-phase tableau simplex.

Pricing is Dantzig's most-negative reduced cost.  A run of degenerate pivots
triggers a small random shift of the right-hand side; once the shifted problem
is optimal the shift is removed and the few rows it leaves infeasible are
repaired with dual simplex pivots.  If stalling persists the solver falls back
to Bland's smallest-index rule, which cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

INF = float("inf")


class LpError(RuntimeError):
    pass


class IterationCapError(LpError):
    pass


@dataclass
class LpProblem:
    """min (or max) c.x  s.t.  A x (senses) b,  lo <= x <= hi.

    ``senses`` holds '<=', '>=' or '='.  ``bounds`` is a list of (lo, hi) with
    None for an infinite side; the default is x >= 0.
    """

    c: np.ndarray
    A: np.ndarray
    senses: Sequence[str]
    b: np.ndarray
    bounds: list | None = None
    maximize: bool = False

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.c.size)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.senses = list(self.senses)
        if self.bounds is None:
            self.bounds = [(0.0, None)] * self.c.size
        if len(self.senses) != self.A.shape[0] or self.b.size != self.A.shape[0]:
            raise ValueError("constraint dimensions disagree")
        if len(self.bounds) != self.c.size:
            raise ValueError("one bound pair per variable required")
        for s in self.senses:
            if s not in ("<=", ">=", "="):
                raise ValueError(f"bad sense {s!r}")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise ValueError("coefficients must be finite")


@dataclass
class LpSolution:
    status: str                 # optimal | infeasible | unbounded
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    info: dict = field(default_factory=dict)


def _standardize(P: LpProblem):
    """Rewrite as min c'z, A'z (senses) b', z >= 0; returns the back-map."""
    n = P.c.size
    cols = []           # per original var: list of (std index, coef)
    offset = np.zeros(n)
    upper_rows = []     # (std index, bound)
    free = []           # std columns with no sign restriction
    k = 0
    for j, (lo, hi) in enumerate(P.bounds):
        lo = -INF if lo is None else float(lo)
        hi = INF if hi is None else float(hi)
        if lo > hi:
            raise ValueError(f"variable {j} has lo > hi")
        if lo > -INF:
            offset[j] = lo
            cols.append([(k, 1.0)])
            if hi < INF:
                upper_rows.append((k, hi - lo))
            k += 1
        elif hi < INF:
            offset[j] = hi
            cols.append([(k, -1.0)])
            k += 1
        else:
            cols.append([(k, 1.0)])
            free.append(k)
            k += 1
    M = np.zeros((n, k))
    for j, lst in enumerate(cols):
        for idx, coef in lst:
            M[j, idx] = coef
    A = P.A @ M
    b = P.b - P.A @ offset
    senses = list(P.senses)
    if upper_rows:
        extra = np.zeros((len(upper_rows), k))
        for r, (idx, ub) in enumerate(upper_rows):
            extra[r, idx] = 1.0
        A = np.vstack([A, extra])
        b = np.concatenate([b, [ub for _, ub in upper_rows]])
        senses += ["<="] * len(upper_rows)
    sign = -1.0 if P.maximize else 1.0
    c = sign * (P.c @ M)
    const = sign * float(P.c @ offset)
    return c, A, senses, b, M, offset, const, free


class _Tableau:
    def __init__(self, T, basis, tol, A0, b0, free):
        self.free = free    # bool per column; free variables never leave the basis
        self.sign = np.ones(T.shape[1] - 1)
        self.T = T
        self.basis = basis
        self.tol = tol
        self.iterations = 0
        self.A0 = A0        # original rows, one column per tableau column
        self.b0 = b0
        self.b_shift = np.zeros_like(b0)
        self.cost = None
        self.rng = np.random.default_rng(0)

    def refactor(self):
        """Rebuild the tableau from the original rows to shed accumulated rounding."""
        B = self.A0[:, self.basis]
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return
        T = self.T
        T[:-1, :-1] = Binv @ self.A0
        T[:-1, -1] = Binv @ (self.b0 + self.b_shift)
        T[:-1, :-1][np.abs(T[:-1, :-1]) < 1e-13] = 0.0
        for i, bi in enumerate(self.basis):
            T[:-1, bi] = 0.0
            T[i, bi] = 1.0
        if self.cost is not None:
            self.set_cost(self.cost)

    def set_cost(self, cost):
        T = self.T
        self.cost = cost
        T[-1, :] = 0.0
        T[-1, :-1] = cost
        for i, bi in enumerate(self.basis):
            if cost[bi] != 0.0:
                T[-1] -= cost[bi] * T[i]

    def flip(self, col):
        """Substitute x_col -> -x_col (used to let a free variable enter downward)."""
        self.T[:, col] *= -1
        self.A0[:, col] *= -1
        self.sign[col] *= -1
        if self.cost is not None:
            self.cost = self.cost.copy()
            self.cost[col] *= -1

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        colv = T[:, col].copy()
        colv[row] = 0.0
        T -= np.outer(colv, T[row])
        self.basis[row] = col

    def perturb(self):
        """Shift the rhs of every sign-restricted basic row up by a tiny random amount."""
        rows = ~self.free[self.basis]
        rhs = self.T[:-1, -1]
        delta = np.where(rows, self.rng.uniform(1e-7, 2e-7, rhs.size) * (1.0 + np.abs(rhs)), 0.0)
        rhs += delta
        self.b_shift += self.A0[:, self.basis] @ delta

    def unperturb(self):
        self.b_shift[:] = 0.0
        self.refactor()

    def dual_cleanup(self, allowed, max_iter):
        """Dual simplex pivots until the basis is primal feasible again."""
        tol = self.tol
        while True:
            T = self.T
            rhs = T[:-1, -1].copy()
            rhs[self.free[self.basis]] = 0.0
            r = int(np.argmin(rhs))
            if rhs[r] >= -tol:
                return "feasible"
            if self.iterations >= max_iter:
                raise IterationCapError(f"simplex exceeded {max_iter} iterations")
            row = T[r, :-1][allowed]
            fr = self.free[allowed]
            elig = np.where(fr, np.abs(row) > tol, row < -tol)
            elig &= ~np.isin(allowed, self.basis)
            idx = np.flatnonzero(elig)
            if idx.size == 0:
                return "infeasible"
            ratios = np.maximum(T[-1, :-1][allowed][idx], 0.0) / np.abs(row[idx])
            best = ratios.min()
            ties = idx[ratios <= best + 1e-12 * (1.0 + best)]
            i = int(ties[np.argmax(np.abs(row[ties]))])
            enter = allowed[i]
            if T[r, enter] > 0:
                self.flip(enter)
            self.pivot(r, int(enter))
            self.iterations += 1

    def run(self, allowed, max_iter, stall_after=50, refactor_every=50, max_perturb=3):
        tol = self.tol
        degenerate = 0
        bland = False
        perturbed = False
        shifts = 0
        while True:
            if self.iterations and self.iterations % refactor_every == 0:
                self.refactor()
            T = self.T
            if self.iterations >= max_iter:
                raise IterationCapError(f"simplex exceeded {max_iter} iterations")
            rc = T[-1, :-1][allowed]
            fr = self.free[allowed]
            score = np.where(fr, -np.abs(rc), rc)
            score[np.isin(allowed, self.basis)] = 0.0
            if bland:
                neg = np.flatnonzero(score < -tol)
                i = int(neg[0]) if neg.size else -1
            else:
                i = int(np.argmin(score))
                if score[i] >= -tol:
                    i = -1
            if i < 0:
                if not perturbed:
                    return "optimal"
                self.unperturb()
                perturbed = False
                if self.dual_cleanup(allowed, max_iter) == "infeasible":
                    return "infeasible"
                degenerate = 0
                continue
            enter = allowed[i]
            if rc[i] > 0:
                self.flip(enter)
            col = T[:-1, enter]
            pos = np.flatnonzero((col > tol) & ~self.free[self.basis])
            if pos.size == 0:
                if perturbed:
                    self.unperturb()
                return "unbounded"
            ratios = T[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + 1e-12 * (1.0 + abs(best))]
            if bland:
                leave = ties[np.argmin(np.asarray(self.basis)[ties])]
            else:
                leave = ties[np.argmax(col[ties])]
            if best <= tol:
                degenerate += 1
                if degenerate > stall_after:
                    if not perturbed and shifts < max_perturb:
                        self.perturb()
                        perturbed = True
                        shifts += 1
                        degenerate = 0
                        continue
                    bland = True
            else:
                degenerate = 0
                bland = False
            self.pivot(int(leave), int(enter))
            self.iterations += 1


def lp_solve(problem: LpProblem, max_iter: int = 10**6, tol: float = 1e-9,
             check_tol: float = 1e-7) -> LpSolution:
    """Solve ``problem``; optimal answers are re-verified against the original rows."""
    c, A, senses, b, M, offset, const, free_cols = _standardize(problem)
    m, k = A.shape
    # slack / surplus columns
    slack_cols = []
    for i, s in enumerate(senses):
        if s == "<=":
            slack_cols.append((i, 1.0))
        elif s == ">=":
            slack_cols.append((i, -1.0))
    S = np.zeros((m, len(slack_cols)))
    for j, (i, v) in enumerate(slack_cols):
        S[i, j] = v
    A = np.hstack([A, S])
    c = np.concatenate([c, np.zeros(len(slack_cols))])
    neg = b < 0
    A[neg] *= -1
    b = np.where(neg, -b, b)
    N = A.shape[1]

    # crash basis from unit columns
    basis = [-1] * m
    nnz = (np.abs(A) > 0).sum(axis=0)
    for j in np.flatnonzero(nnz == 1):
        i = int(np.flatnonzero(A[:, j])[0])
        if basis[i] < 0 and A[i, j] > 0:
            basis[i] = int(j)
    art_rows = [i for i in range(m) if basis[i] < 0]
    n_art = len(art_rows)
    T = np.zeros((m + 1, N + n_art + 1))
    T[:m, :N] = A
    T[:m, -1] = b
    for a, i in enumerate(art_rows):
        T[i, N + a] = 1.0
        basis[i] = N + a
    for i in range(m):
        if T[i, basis[i]] != 1.0:
            T[i] /= T[i, basis[i]]
    free = np.zeros(T.shape[1] - 1, dtype=bool)
    free[free_cols] = True
    tab = _Tableau(T, basis, tol, T[:m, :-1].copy(), T[:m, -1].copy(), free)

    if n_art:
        tab.set_cost(np.concatenate([np.zeros(N), np.ones(n_art)]))
        if tab.run(np.arange(N + n_art), max_iter) == "infeasible":
            return LpSolution("infeasible", iterations=tab.iterations)
        tab.refactor()
        T = tab.T
        if -T[-1, -1] > max(1e-7, 1e-9 * (1 + np.abs(b).sum())):
            return LpSolution("infeasible", iterations=tab.iterations)
        # drive remaining artificials out of the basis
        drop = []
        for i in range(m):
            if tab.basis[i] >= N:
                row = T[i, :N]
                cand = np.flatnonzero(np.abs(row) > 1e-9)
                if cand.size:
                    tab.pivot(i, int(cand[0]))
                else:
                    drop.append(i)
        keep = [i for i in range(m) if i not in drop]
        tab.T = T = np.hstack([T[keep + [m], :N], T[keep + [m], -1:]])
        tab.basis = [tab.basis[i] for i in keep]
        tab.A0 = tab.A0[keep, :N]
        tab.free = tab.free[:N]
        tab.sign = tab.sign[:N]
        tab.b0 = tab.b0[keep]
        tab.b_shift = tab.b_shift[keep]
        m = len(keep)
    tab.set_cost(c * tab.sign[:N])
    status = tab.run(np.arange(N), max_iter)
    if status != "optimal":
        return LpSolution(status, iterations=tab.iterations)
    tab.refactor()
    T = tab.T

    z = np.zeros(N)
    for i, bi in enumerate(tab.basis):
        z[bi] = T[i, -1]
    z *= tab.sign[:N]
    x = M @ z[:M.shape[1]] + offset
    obj = float(problem.c @ x)
    _verify(problem, x, check_tol)
    return LpSolution("optimal", x, obj, tab.iterations)


def _verify(P: LpProblem, x, tol):
    Ax = P.A @ x
    scale = 1.0 + np.abs(P.b)
    for i, s in enumerate(P.senses):
        viol = {"<=": Ax[i] - P.b[i], ">=": P.b[i] - Ax[i], "=": abs(Ax[i] - P.b[i])}[s]
        if viol > tol * scale[i]:
            raise LpError(f"post-solve check failed on row {i}: violation {viol:.3e}")
    for j, (lo, hi) in enumerate(P.bounds):
        if lo is not None and x[j] < lo - tol * (1 + abs(lo)):
            raise LpError(f"variable {j} below its lower bound")
        if hi is not None and x[j] > hi + tol * (1 + abs(hi)):
            raise LpError(f"variable {j} above its upper bound")
