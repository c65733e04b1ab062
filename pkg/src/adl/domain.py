"""Boolean-domain primitives: bit vectors, regions, hypotheses and error measurement.

Points of {0,1}^n are handled in two forms.  A single point is a packed
:class:`BitVector`; a batch of points is a ``(m, n)`` uint8 array, which is what
every ``predict``/``contains`` method consumes.  Coordinate ``i`` of a bit string
is its ``i``-th character from the left.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class BitVector:
    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative dimension")
        if self.bits < 0 or self.bits >> self.n:
            raise DimensionError(f"bits do not fit in dimension {self.n}")

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        s = s.strip()
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a bit string: {s!r}")
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
        return cls(bits, len(s))

    @classmethod
    def from_array(cls, arr: Iterable[int]) -> "BitVector":
        arr = list(arr)
        bits = 0
        for i, v in enumerate(arr):
            if v not in (0, 1):
                raise ValueError("entries must be 0 or 1")
            if v:
                bits |= 1 << i
        return cls(bits, len(arr))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.n

    def to_array(self) -> np.ndarray:
        return np.array([(self.bits >> i) & 1 for i in range(self.n)], dtype=np.uint8)

    def to_string(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))

    def weight(self, coords: Iterable[int] | None = None) -> int:
        if coords is None:
            return self.bits.bit_count()
        return (self.bits & mask_of(coords, self.n)).bit_count()

    def __str__(self) -> str:
        return self.to_string()


def mask_of(coords: Iterable[int], n: int) -> int:
    m = 0
    for i in coords:
        if not 0 <= i < n:
            raise IndexError(f"coordinate {i} out of range for n={n}")
        m |= 1 << i
    return m


def as_matrix(X, n: int | None = None) -> np.ndarray:
    """Coerce a BitVector, a bit string, a row or a batch of rows to a 2-d uint8 array."""
    if isinstance(X, BitVector):
        X = X.to_array()[None, :]
    elif isinstance(X, str):
        X = BitVector.from_string(X).to_array()[None, :]
    else:
        X = np.asarray(X, dtype=np.uint8)
        if X.ndim == 1:
            X = X[None, :]
    if n is not None and X.shape[1] != n:
        raise DimensionError(f"expected dimension {n}, got {X.shape[1]}")
    return X


def hamming_weight_on(x, coords: Iterable[int] | None = None):
    """W_I(x): number of ones of ``x`` among ``coords`` (all coordinates if None).

    Accepts a single BitVector (returns int) or a batch (returns an int array).
    """
    if isinstance(x, BitVector):
        return x.weight(coords)
    X = as_matrix(x)
    if coords is None:
        return X.sum(axis=1, dtype=np.int64)
    idx = _index_array(coords, X.shape[1])
    return X[:, idx].sum(axis=1, dtype=np.int64)


def _index_array(coords: Iterable[int], n: int) -> np.ndarray:
    idx = np.asarray(sorted(set(coords)), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= n):
        raise IndexError(f"coordinate out of range for n={n}")
    return idx


# --------------------------------------------------------------------------- regions


class Region:
    """A subset of {0,1}^n with a vectorised membership test."""

    def contains(self, X) -> np.ndarray:
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        return bool(self.contains(as_matrix(x))[0])


@dataclass(frozen=True)
class CoordinateOne(Region):
    i: int

    def contains(self, X):
        X = as_matrix(X)
        return X[:, self.i] == 1

    def __str__(self):
        return f"x{self.i}=1"


@dataclass(frozen=True)
class WeightAtMost(Region):
    coords: frozenset
    theta: int

    def __init__(self, coords, theta):
        object.__setattr__(self, "coords", frozenset(coords))
        object.__setattr__(self, "theta", theta)

    def contains(self, X):
        return hamming_weight_on(as_matrix(X), self.coords) <= self.theta

    def __str__(self):
        return f"W[{len(self.coords)} coords]<={self.theta}"


@dataclass(frozen=True)
class WeightMoreThan(Region):
    coords: frozenset
    theta: int

    def __init__(self, coords, theta):
        object.__setattr__(self, "coords", frozenset(coords))
        object.__setattr__(self, "theta", theta)

    def contains(self, X):
        return hamming_weight_on(as_matrix(X), self.coords) > self.theta

    def __str__(self):
        return f"W[{len(self.coords)} coords]>{self.theta}"


@dataclass(frozen=True)
class Intersection(Region):
    """Intersection of regions; the empty intersection is the whole cube."""

    parts: tuple = ()

    def __init__(self, parts=()):
        object.__setattr__(self, "parts", tuple(parts))

    def contains(self, X):
        X = as_matrix(X)
        out = np.ones(X.shape[0], dtype=bool)
        for p in self.parts:
            out &= p.contains(X)
        return out

    def __str__(self):
        if not self.parts:
            return "ALL"
        return " & ".join(f"({p})" for p in self.parts)


@dataclass(frozen=True)
class Complement(Region):
    inner: Region

    def contains(self, X):
        return ~self.inner.contains(X)

    def __str__(self):
        return f"not({self.inner})"


WHOLE_SPACE = Intersection(())


# --------------------------------------------------------------------------- concepts


@dataclass(frozen=True)
class MonotoneDisjunction:
    """f_S(x) = OR_{i in S} x_i; the empty support is the constant 0."""

    support: frozenset
    n: int | None = None

    def __init__(self, support=(), n=None):
        support = frozenset(int(i) for i in support)
        if n is not None and any(not 0 <= i < n for i in support):
            raise IndexError(f"support {sorted(support)} out of range for n={n}")
        if any(i < 0 for i in support):
            raise IndexError("negative coordinate")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "n", n)

    def __call__(self, X) -> np.ndarray:
        X = as_matrix(X)
        if self.n is not None and X.shape[1] != self.n:
            raise DimensionError(f"expected dimension {self.n}, got {X.shape[1]}")
        if not self.support:
            return np.zeros(X.shape[0], dtype=np.uint8)
        if max(self.support) >= X.shape[1]:
            raise DimensionError("support exceeds input dimension")
        idx = np.fromiter(sorted(self.support), dtype=np.int64)
        return (X[:, idx].max(axis=1) > 0).astype(np.uint8)

    def __str__(self):
        return "OR{" + ",".join(map(str, sorted(self.support))) + "}"


def eval_disjunction(f: MonotoneDisjunction, x) -> int:
    """Evaluate ``f`` at a single point."""
    if isinstance(x, BitVector):
        if f.n is not None and x.n != f.n:
            raise DimensionError(f"expected dimension {f.n}, got {x.n}")
        return int(any(x[i] for i in f.support))
    return int(f(as_matrix(x, f.n))[0])


# --------------------------------------------------------------------------- hypotheses


class Hypothesis:
    """A total classifier {0,1}^n -> {0,1}."""

    def predict(self, X) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x) -> int | np.ndarray:
        if isinstance(x, (BitVector, str)):
            return int(self.predict(as_matrix(x))[0])
        X = np.asarray(x)
        out = self.predict(as_matrix(X))
        return int(out[0]) if X.ndim == 1 else out

    def describe(self) -> dict:
        return {"type": type(self).__name__}


@dataclass(frozen=True)
class Constant(Hypothesis):
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("constant must be 0 or 1")

    def predict(self, X):
        X = as_matrix(X)
        return np.full(X.shape[0], self.value, dtype=np.uint8)

    def describe(self):
        return {"type": "Constant", "value": self.value}


@dataclass(frozen=True)
class Disjunction(Hypothesis):
    f: MonotoneDisjunction

    def predict(self, X):
        return self.f(X)

    def describe(self):
        return {"type": "Disjunction", "support": sorted(self.f.support)}


@dataclass(frozen=True, eq=False)
class ThresholdPoly(Hypothesis):
    """h(x) = 1 iff poly(x) >= threshold."""

    poly: object
    threshold: float

    def predict(self, X):
        return (self.poly.evaluate(as_matrix(X)) >= self.threshold).astype(np.uint8)

    def describe(self):
        return {"type": "ThresholdPoly", "threshold": self.threshold,
                "degree": self.poly.degree, "terms": len(self.poly.terms)}


@dataclass(frozen=True, eq=False)
class RegionSplit(Hypothesis):
    region: Region
    inside: Hypothesis
    outside: Hypothesis

    def predict(self, X):
        X = as_matrix(X)
        mask = self.region.contains(X)
        out = np.empty(X.shape[0], dtype=np.uint8)
        if mask.any():
            out[mask] = self.inside.predict(X[mask])
        if (~mask).any():
            out[~mask] = self.outside.predict(X[~mask])
        return out

    def describe(self):
        return {"type": "RegionSplit", "region": str(self.region),
                "inside": self.inside.describe(), "outside": self.outside.describe()}


@dataclass(frozen=True, eq=False)
class DecisionList(Hypothesis):
    """Fires the first entry whose region contains x, else the default."""

    entries: tuple
    default: Constant

    def __init__(self, entries, default):
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "default", default)

    def predict(self, X):
        X = as_matrix(X)
        out = self.default.predict(X)
        pending = np.ones(X.shape[0], dtype=bool)
        for region, h in self.entries:
            if not pending.any():
                break
            idx = np.flatnonzero(pending)
            hit = region.contains(X[idx])
            if hit.any():
                sel = idx[hit]
                out[sel] = h.predict(X[sel])
                pending[sel] = False
        return out

    def describe(self):
        return {"type": "DecisionList", "length": len(self.entries),
                "default": self.default.value,
                "entries": [{"region": str(r), "h": h.describe()} for r, h in self.entries]}


@dataclass(frozen=True, eq=False)
class WeightedMajority(Hypothesis):
    """Predicts 1 iff sum_k w_k * (2 h_k(x) - 1) > threshold."""

    terms: tuple
    threshold: float = 0.0

    def __init__(self, terms, threshold=0.0):
        object.__setattr__(self, "terms", tuple((float(w), h) for w, h in terms))
        object.__setattr__(self, "threshold", float(threshold))

    def score(self, X):
        X = as_matrix(X)
        s = np.zeros(X.shape[0])
        for w, h in self.terms:
            s += w * (2.0 * h.predict(X) - 1.0)
        return s

    def predict(self, X):
        return (self.score(X) > self.threshold).astype(np.uint8)

    def describe(self):
        return {"type": "WeightedMajority", "terms": len(self.terms),
                "weights": [round(w, 12) for w, _ in self.terms]}


# --------------------------------------------------------------------------- error


def hypothesis_error(h, data) -> float:
    """Probability-weighted 0-1 error of ``h`` on an explicit distribution or a sample.

    ``h`` may be a Hypothesis or a MonotoneDisjunction.
    """
    X, y, w = data.X, data.y, data.weights
    if X.shape[0] == 0:
        raise ValueError("empty data")
    pred = h.predict(X) if isinstance(h, Hypothesis) else h(X)
    return float(np.dot(w, pred != y))


# --------------------------------------------------------------------------- reduction


@dataclass(frozen=True)
class GeneralDisjunction:
    """OR of literals: ``positive`` variables and negated ``negative`` variables."""

    positive: frozenset = field(default_factory=frozenset)
    negative: frozenset = field(default_factory=frozenset)

    def __init__(self, positive=(), negative=()):
        object.__setattr__(self, "positive", frozenset(positive))
        object.__setattr__(self, "negative", frozenset(negative))

    def __call__(self, X) -> np.ndarray:
        X = as_matrix(X)
        out = np.zeros(X.shape[0], dtype=bool)
        for i in self.positive:
            out |= X[:, i] == 1
        for i in self.negative:
            out |= X[:, i] == 0
        return out.astype(np.uint8)

    def monotone_image(self, n: int) -> MonotoneDisjunction:
        """The monotone disjunction over (x, not x) computing the same function."""
        return MonotoneDisjunction(set(self.positive) | {n + i for i in self.negative}, 2 * n)

    @staticmethod
    def enumerate(n: int):
        """All 3^n literal patterns in lexicographic order of (0=absent, 1=x_i, 2=not x_i)."""
        for pattern in itertools.product((0, 1, 2), repeat=n):
            yield GeneralDisjunction(
                [i for i, v in enumerate(pattern) if v == 1],
                [i for i, v in enumerate(pattern) if v == 2],
            )


def monotonize_points(X) -> np.ndarray:
    X = as_matrix(X)
    return np.concatenate([X, 1 - X], axis=1).astype(np.uint8)


def monotonize_instance(data):
    """Map every x to (x, not x); labels and weights are unchanged."""
    if isinstance(data, BitVector):
        return BitVector.from_array(monotonize_points(data)[0])
    return data.with_points(monotonize_points(data.X))


def complement_predictions(pred: np.ndarray) -> np.ndarray:
    return (1 - np.asarray(pred)).astype(np.uint8)


def all_points(n: int) -> np.ndarray:
    """Every point of {0,1}^n, row k being the bits of k (coordinate 0 = least significant)."""
    if n > 24:
        raise ValueError("refusing to enumerate more than 2^24 points")
    k = np.arange(1 << n, dtype=np.int64)
    return ((k[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def pack_rows(X: np.ndarray) -> np.ndarray:
    """Pack each row into an int64 mask (n <= 62)."""
    X = as_matrix(X)
    if X.shape[1] > 62:
        raise ValueError("packing supports n <= 62")
    return (X.astype(np.int64) << np.arange(X.shape[1], dtype=np.int64)).sum(axis=1)


def subsets_sorted(coords: Sequence[int]):
    return tuple(sorted(coords))
