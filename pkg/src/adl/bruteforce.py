"""Exhaustive ground-truth oracles: OPT over disjunction classes and full-cube error."""

from __future__ import annotations

import numpy as np

from .domain import (
    Constant,
    GeneralDisjunction,
    MonotoneDisjunction,
    all_points,
    pack_rows,
)
from .distributions import as_weighted

ENUM_CAP = 10**7
CLASSES = ("monotone", "monotone+const1", "general-literals")
TIE = 1e-12


class EnumerationCapError(ValueError):
    pass


def _chunks(total, size):
    start = 0
    while start < total:
        yield start, min(total, start + size)
        start += size


def _chunk_size(support):
    return max(1, 4_000_000 // max(1, support))


def _monotone_errors(xs, y, w, n):
    """Error of every monotone disjunction, indexed by its bitmask."""
    total = 1 << n
    errs = np.empty(total)
    yb = y.astype(bool)
    base = float(np.dot(w, yb))  # error of the empty disjunction
    for lo, hi in _chunks(total, _chunk_size(len(xs))):
        masks = np.arange(lo, hi, dtype=np.int64)
        fires = (masks[:, None] & xs[None, :]) != 0
        # err = sum_j w_j [fires != y] = base + sum_{fires} w_j (1 - 2 y_j)
        errs[lo:hi] = base + fires.astype(float) @ (w * (1 - 2 * yb))
    return errs


def _lex_smallest(masks: np.ndarray) -> tuple:
    """Lexicographically smallest sorted index tuple among the given bitmasks."""
    out = []
    cand = masks.astype(np.int64)
    while True:
        if np.any(cand == 0):
            return tuple(out)
        low = cand & -cand
        best = low.min()
        out.append(int(best).bit_length() - 1)
        cand = cand[low == best] ^ best


def opt_enumerate(data, class_spec: str = "monotone"):
    """Exact OPT over a disjunction class and a lexicographically smallest minimiser.

    Returns ``(opt, argmin, count_enumerated)``.  The argmin is a
    MonotoneDisjunction, ``Constant(1)`` or a GeneralDisjunction.
    """
    if class_spec not in CLASSES:
        raise ValueError(f"unknown class {class_spec!r}; choose from {CLASSES}")
    X, y, w = as_weighted(data)
    n = X.shape[1]
    if class_spec == "general-literals":
        return _opt_general(X, y, w, n)
    if (1 << n) > ENUM_CAP:
        raise EnumerationCapError(f"2^{n} concepts exceed the enumeration cap {ENUM_CAP}")
    xs = pack_rows(X) if n else np.zeros(len(X), dtype=np.int64)
    errs = _monotone_errors(xs, y, w, n)
    best = float(errs.min())
    ties = np.flatnonzero(errs <= best + TIE)
    S = _lex_smallest(ties)
    concept = MonotoneDisjunction(S, n)
    best = float(np.dot(w, concept(X) != y))
    count = 1 << n
    if class_spec == "monotone+const1":
        count += 1
        e1 = float(np.dot(w, y == 0))
        if e1 < best - TIE:
            return e1, Constant(1), count
    return best, concept, count


def _opt_general(X, y, w, n):
    total = 3**n
    if total > ENUM_CAP:
        raise EnumerationCapError(f"3^{n} concepts exceed the enumeration cap {ENUM_CAP}")
    xs = pack_rows(X) if n else np.zeros(len(X), dtype=np.int64)
    nxs = ~xs & ((1 << n) - 1)
    yb = y.astype(bool)
    base = float(np.dot(w, yb))
    gain = w * (1 - 2 * yb)
    errs = np.empty(total)
    pow3 = 3 ** np.arange(n - 1, -1, -1, dtype=np.int64)  # coordinate 0 most significant
    for lo, hi in _chunks(total, _chunk_size(len(xs))):
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // pow3[None, :]) % 3
        bit = np.int64(1) << np.arange(n, dtype=np.int64)
        pos = ((digits == 1) * bit).sum(axis=1)
        neg = ((digits == 2) * bit).sum(axis=1)
        fires = ((pos[:, None] & xs[None, :]) != 0) | ((neg[:, None] & nxs[None, :]) != 0)
        errs[lo:hi] = base + fires.astype(float) @ gain
    k = int(np.argmax(errs <= errs.min() + TIE))
    digits = [(k // 3 ** (n - 1 - i)) % 3 for i in range(n)]
    g = GeneralDisjunction([i for i, v in enumerate(digits) if v == 1],
                           [i for i, v in enumerate(digits) if v == 2])
    return float(np.dot(w, g(X) != y)), g, total


def cube_tables(dist, n: int):
    """Dense per-point masses (label 0, label 1) indexed like ``all_points(n)``."""
    if n > 24:
        raise EnumerationCapError("full-cube summation supports n <= 24")
    X, y, w = as_weighted(dist)
    keys = pack_rows(X) if n else np.zeros(len(X), dtype=np.int64)
    m0 = np.zeros(1 << n)
    m1 = np.zeros(1 << n)
    np.add.at(m0, keys[y == 0], w[y == 0])
    np.add.at(m1, keys[y == 1], w[y == 1])
    return m0, m1


def exhaustive_hypothesis_error(h, dist) -> float:
    """Error of ``h`` by summing over every point of the hypercube."""
    n = dist.X.shape[1]
    m0, m1 = cube_tables(dist, n)
    pts = all_points(n)
    pred = h.predict(pts) if hasattr(h, "predict") else h(pts)
    pred = np.asarray(pred).astype(bool)
    return float(m0[pred].sum() + m1[~pred].sum())
