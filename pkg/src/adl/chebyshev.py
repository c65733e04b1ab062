"""One-sided polynomial approximators of disjunctions built from Chebyshev polynomials.

A disjunction of weight-bounded inputs is a function of the Hamming weight
w = W_S(x) in {0, ..., r}: it is 0 at w = 0 and 1 elsewhere.  ``build_approx``
returns a univariate q that is eps-close to that step on the integers 0..r, and
``certify_approx`` checks the closeness exhaustively.

Polynomials are held in the Chebyshev basis of an affine argument (numpy's
``Chebyshev`` series with a domain/window map).  Expanding degree ~150 products
into monomials loses every significant digit, while the Chebyshev form keeps
evaluation accurate to ~1e-13 on the band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .domain import hamming_weight_on


def chebyshev_eval(d: int, t):
    """T_d(t) by the recurrence T_{k+1} = 2 t T_k - T_{k-1}. Accepts scalars or arrays."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    t = np.asarray(t, dtype=float)
    prev, cur = np.ones_like(t), t.copy()
    if d == 0:
        out = prev
    else:
        for _ in range(d - 1):
            prev, cur = cur, 2.0 * t * cur - prev
        out = cur
    return float(out) if out.ndim == 0 else out


class UnivariatePoly:
    """A real polynomial in one variable.

    ``series`` is a numpy Chebyshev object; its domain/window encode the affine
    change of variable.  Use :meth:`from_coefficients` for monomial input.
    """

    def __init__(self, series: Chebyshev):
        self.series = series.trim(tol=0) if len(series.coef) > 1 else series

    @classmethod
    def from_coefficients(cls, coeffs) -> "UnivariatePoly":
        return cls(Polynomial(coeffs).convert(kind=Chebyshev))

    @classmethod
    def constant(cls, c: float) -> "UnivariatePoly":
        return cls(Chebyshev([float(c)]))

    @property
    def degree(self) -> int:
        c = self.series.coef
        nz = np.flatnonzero(c)
        return int(nz[-1]) if nz.size else 0

    def coefficients(self) -> np.ndarray:
        """Monomial coefficients c_0..c_d (ill-conditioned for large degree)."""
        return self.series.convert(kind=Polynomial, domain=[-1, 1], window=[-1, 1]).coef

    def __call__(self, t):
        v = self.series(np.asarray(t, dtype=float))
        return float(v) if np.ndim(v) == 0 else v

    def __repr__(self):
        return f"UnivariatePoly(degree={self.degree})"


def _affine_cheb(d: int, r: int) -> Chebyshev:
    """T_d((r - t)/(r - 1)) as a series in t."""
    coef = np.zeros(d + 1)
    coef[d] = 1.0
    # t = 1 -> u = 1 and t = 2r - 1 -> u = -1
    return Chebyshev(coef, domain=[1.0, 2.0 * r - 1.0], window=[1.0, -1.0])


@dataclass(frozen=True)
class Approximator:
    """Result of build_approx: the polynomial plus bookkeeping."""

    poly: UnivariatePoly
    r: int
    eps: float
    degree: int
    regime: str      # "large-eps" | "small-eps" | "r=1"
    power: int = 1

    def __call__(self, t):
        return self.poly(t)


def approx_degree(r: int, eps: float) -> int:
    """Degree build_approx uses for (r, eps), without constructing the polynomial."""
    _check(r, eps)
    if r == 1:
        return 1
    if eps >= 0.25:
        return max(1, math.ceil(2 * math.sqrt(r) * math.sqrt(1 - 2 * eps)))
    return math.ceil(2 * math.sqrt(r)) * small_eps_power(eps)


def small_eps_power(eps: float) -> int:
    """Smallest k with 2^-k <= eps."""
    k = max(1, math.ceil(math.log2(1 / eps)))
    while 0.5**k > eps:
        k += 1
    while k > 1 and 0.5 ** (k - 1) <= eps:
        k -= 1
    return k


def _check(r, eps):
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if int(r) != r or r < 1:
        raise ValueError("r must be a positive integer")


def build_approx(r: int, eps: float) -> Approximator:
    """q with q(0) in [0, eps] and |q(w) - 1| <= eps for integers 1 <= w <= r."""
    _check(r, eps)
    r = int(r)
    if r == 1:
        q0 = eps if eps >= 0.25 else 0.0
        poly = UnivariatePoly.from_coefficients([q0, 1.0 - q0])
        return Approximator(poly, r, eps, 1, "r=1")
    if eps >= 0.25:
        d = approx_degree(r, eps)
        p1 = _affine_cheb(d, r)
        q = p1 * (-(1.0 - eps) / p1(0.0)) + 1.0
        return Approximator(UnivariatePoly(q), r, eps, d, "large-eps")
    d = math.ceil(2 * math.sqrt(r))
    k = small_eps_power(eps)
    p1 = _affine_cheb(d, r) * 0.5
    p2 = p1**k
    q = p2 * (-1.0 / p2(0.0)) + 1.0
    return Approximator(UnivariatePoly(q), r, eps, d * k, "small-eps", k)


@dataclass(frozen=True)
class CertReport:
    max_dev_at_zero: float
    max_dev_on_band: float
    passed: bool
    degree: int

    def as_dict(self):
        return {"max_dev_at_zero": self.max_dev_at_zero, "max_dev_on_band": self.max_dev_on_band,
                "pass": self.passed, "degree": self.degree}


def certify_approx(q, r: int, eps: float, target: str = "disjunction", slack: float = 1e-9) -> CertReport:
    """Check q against the disjunction step (or the constant 1) at every integer 0..r."""
    if target not in ("disjunction", "constant1"):
        raise ValueError("target must be 'disjunction' or 'constant1'")
    poly = q.poly if isinstance(q, Approximator) else q
    vals = np.array([poly(float(w)) for w in range(int(r) + 1)])
    want0 = 0.0 if target == "disjunction" else 1.0
    dev0 = abs(vals[0] - want0)
    band = float(np.max(np.abs(vals[1:] - 1.0))) if r >= 1 else 0.0
    ok = dev0 <= eps + slack and band <= eps + slack
    return CertReport(float(dev0), band, bool(ok), poly.degree)


@dataclass(frozen=True, eq=False)
class WeightPoly:
    """x -> base(W_S(x))."""

    base: object
    S: frozenset

    @property
    def degree(self) -> int:
        b = self.base.poly if isinstance(self.base, Approximator) else self.base
        return min(b.degree, len(self.S))

    def evaluate(self, X) -> np.ndarray:
        w = hamming_weight_on(np.asarray(X, dtype=np.uint8).reshape(-1, np.shape(X)[-1]), self.S)
        return np.asarray(self.base(w.astype(float)), dtype=float).reshape(-1)

    def __call__(self, x):
        from .domain import BitVector
        if isinstance(x, BitVector):
            return float(self.base(float(x.weight(self.S))))
        return self.evaluate(x)


def lift(q, S) -> WeightPoly:
    return WeightPoly(q, frozenset(S))
