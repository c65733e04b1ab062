"""Finite-support distributions, empirical samples and synthetic instance generators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .domain import (
    BitVector,
    DimensionError,
    MonotoneDisjunction,
    Region,
    as_matrix,
)

PROB_SLACK = 1e-9


class ExplicitDistribution:
    """A distribution over {0,1}^n x {0,1} with finite support.

    Duplicate (x, y) pairs passed to the constructor are merged.  ``planted``
    optionally records the (support, eta) pair an instance was generated from.
    """

    def __init__(self, n: int, X, y, probs, planted=None, normalize: bool = False):
        X = np.asarray(X, dtype=np.uint8).reshape(-1, n) if n else np.zeros((len(y), 0), np.uint8)
        y = np.asarray(y, dtype=np.uint8).reshape(-1)
        p = np.asarray(probs, dtype=float).reshape(-1)
        if not (X.shape[0] == y.shape[0] == p.shape[0]):
            raise ValueError("X, y and probabilities must have equal length")
        if X.shape[0] == 0:
            raise ValueError("empty support")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if np.any((X != 0) & (X != 1)) or np.any((y != 0) & (y != 1)):
            raise ValueError("entries and labels must be 0/1")
        if normalize:
            p = p / p.sum()
        elif abs(p.sum() - 1.0) > PROB_SLACK:
            raise ValueError(f"probabilities sum to {p.sum():.12f}, not 1")
        self.n = n
        self.X, self.y, self.weights = _merge(X, y, p)
        self.planted = planted

    @property
    def probs(self) -> np.ndarray:
        return self.weights

    def __len__(self) -> int:
        return self.X.shape[0]

    def support(self):
        for x, y, p in zip(self.X, self.y, self.weights):
            yield BitVector.from_array(x), int(y), float(p)

    def with_points(self, X) -> "ExplicitDistribution":
        X = np.asarray(X, dtype=np.uint8)
        return ExplicitDistribution(X.shape[1], X, self.y, self.weights)

    def expectation(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def mass(self, region: Region) -> float:
        return float(self.weights[region.contains(self.X)].sum())

    def __repr__(self):
        return f"ExplicitDistribution(n={self.n}, support={len(self)})"


class EmpiricalSample:
    """A multiset of labeled examples, each carrying weight 1/m."""

    def __init__(self, n: int, X, y):
        X = np.asarray(X, dtype=np.uint8).reshape(-1, n) if n else np.zeros((len(y), 0), np.uint8)
        y = np.asarray(y, dtype=np.uint8).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y must have equal length")
        self.n = n
        self.X = X
        self.y = y

    @property
    def weights(self) -> np.ndarray:
        m = self.X.shape[0]
        return np.full(m, 1.0 / m) if m else np.zeros(0)

    def __len__(self) -> int:
        return self.X.shape[0]

    def with_points(self, X) -> "EmpiricalSample":
        X = np.asarray(X, dtype=np.uint8)
        return EmpiricalSample(X.shape[1], X, self.y)

    def subset(self, mask) -> "EmpiricalSample":
        return EmpiricalSample(self.n, self.X[mask], self.y[mask])

    def to_explicit(self) -> ExplicitDistribution:
        """The empirical distribution, with repeated examples merged."""
        if len(self) == 0:
            raise ValueError("empty sample")
        return ExplicitDistribution(self.n, self.X, self.y, self.weights, normalize=True)

    def __repr__(self):
        return f"EmpiricalSample(n={self.n}, m={len(self)})"


def _merge(X, y, p):
    keys = np.concatenate([X, y[:, None]], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    if uniq.shape[0] == keys.shape[0]:
        order = np.lexsort(keys.T[::-1])
        return X[order].copy(), y[order].copy(), p[order].copy()
    w = np.zeros(uniq.shape[0])
    np.add.at(w, inv, p)
    return uniq[:, :-1].copy(), uniq[:, -1].copy(), w


def reweighted(data, weights) -> ExplicitDistribution:
    """Same support as ``data`` with new (unnormalised) weights."""
    w = np.asarray(weights, dtype=float)
    keep = w > 0
    return ExplicitDistribution(data.X.shape[1], data.X[keep], data.y[keep], w[keep], normalize=True)


def as_weighted(data):
    """(X, y, w) triple with duplicates merged; used by fitting routines."""
    if isinstance(data, EmpiricalSample):
        data = data.to_explicit()
    return data.X, data.y, data.weights


# --------------------------------------------------------------------------- sampling


def draw(dist: ExplicitDistribution, count: int, rng_seed=None) -> EmpiricalSample:
    """``count`` i.i.d. draws from ``dist``; deterministic for a given seed."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    p = dist.weights / dist.weights.sum()
    idx = rng.choice(len(dist), size=count, p=p)
    return EmpiricalSample(dist.n, dist.X[idx], dist.y[idx])


def condition_on(dist: ExplicitDistribution, region: Region) -> ExplicitDistribution:
    mask = region.contains(dist.X)
    mass = float(dist.weights[mask].sum())
    if mass <= 0:
        raise ValueError("region has zero mass")
    return ExplicitDistribution(dist.n, dist.X[mask], dist.y[mask], dist.weights[mask] / mass)


def vc_sample_size(d: int, eps: float, c: float = 64) -> int:
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if d < 1:
        raise ValueError("d must be >= 1")
    return math.ceil(c * d / eps**2)


# --------------------------------------------------------------------------- generators


@dataclass(frozen=True)
class UniformList:
    points: tuple

    def __init__(self, points):
        pts = tuple(p if isinstance(p, BitVector) else BitVector.from_string(p) if isinstance(p, str)
                    else BitVector.from_array(p) for p in points)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class WeightBand:
    lo: int
    hi: int
    mode: str = "auto"          # auto | enumerate | sample
    support_size: int = 256


@dataclass(frozen=True)
class HeavyLightMixture:
    p_heavy: float
    r: int
    support_size: int = 64      # points per side


ENUMERATION_LIMIT = 10**6


def _random_points_of_weight(n, weights, rng):
    X = np.zeros((len(weights), n), dtype=np.uint8)
    for row, w in enumerate(weights):
        X[row, rng.choice(n, size=int(w), replace=False)] = 1
    return X


def _distinct_random_points(n, count, weight_range, rng, max_tries=50):
    lo, hi = weight_range
    seen = {}
    for _ in range(max_tries):
        need = count - len(seen)
        if need <= 0:
            break
        ws = rng.integers(lo, hi + 1, size=need)
        for row in _random_points_of_weight(n, ws, rng):
            seen.setdefault(row.tobytes(), row)
    return np.array(list(seen.values()), dtype=np.uint8).reshape(-1, n)


def _band_points(n, lo, hi):
    from itertools import combinations
    rows = []
    for w in range(lo, hi + 1):
        for c in combinations(range(n), w):
            row = np.zeros(n, dtype=np.uint8)
            row[list(c)] = 1
            rows.append(row)
    return np.array(rows, dtype=np.uint8).reshape(-1, n)


def marginal_points(n: int, spec, rng) -> tuple[np.ndarray, np.ndarray]:
    """Support points and their probabilities for a marginal spec."""
    if isinstance(spec, UniformList):
        if not spec.points:
            raise ValueError("empty marginal support")
        for p in spec.points:
            if p.n != n:
                raise DimensionError("support point has the wrong dimension")
        X = np.unique(np.array([p.to_array() for p in spec.points]), axis=0)
        return X, np.full(len(X), 1.0 / len(X))
    if isinstance(spec, WeightBand):
        lo, hi = max(0, spec.lo), min(n, spec.hi)
        if lo > hi:
            raise ValueError("empty marginal support")
        enumerate_ok = sum(math.comb(n, w) for w in range(lo, hi + 1)) <= ENUMERATION_LIMIT
        mode = spec.mode
        if mode == "auto":
            mode = "enumerate" if math.comb(n, hi) <= ENUMERATION_LIMIT and enumerate_ok else "sample"
        if mode == "enumerate":
            X = _band_points(n, lo, hi)
        else:
            X = _distinct_random_points(n, spec.support_size, (lo, hi), rng)
        return X, np.full(len(X), 1.0 / len(X))
    if isinstance(spec, HeavyLightMixture):
        if not 0 <= spec.p_heavy <= 1:
            raise ValueError("p_heavy must lie in [0, 1]")
        parts, probs = [], []
        if spec.p_heavy < 1:
            L = _distinct_random_points(n, spec.support_size, (0, min(spec.r, n)), rng)
            parts.append(L)
            probs.append(np.full(len(L), (1 - spec.p_heavy) / len(L)))
        if spec.p_heavy > 0:
            if spec.r >= n:
                raise ValueError("no heavy points exist when r >= n")
            H = _distinct_random_points(n, spec.support_size, (spec.r + 1, n), rng)
            parts.append(H)
            probs.append(np.full(len(H), spec.p_heavy / len(H)))
        return np.concatenate(parts), np.concatenate(probs)
    raise TypeError(f"unknown marginal spec {spec!r}")


def fold_labels(X, px, f: MonotoneDisjunction, eta: float, planted=None) -> ExplicitDistribution:
    """Labels f(x) flipped with probability eta, folded into explicit masses."""
    if not 0 <= eta < 0.5:
        raise ValueError("eta must lie in [0, 1/2)")
    fx = f(X)
    Xs = np.concatenate([X, X])
    ys = np.concatenate([fx, 1 - fx]).astype(np.uint8)
    ps = np.concatenate([px * (1 - eta), px * eta])
    keep = ps > 0
    return ExplicitDistribution(X.shape[1], Xs[keep], ys[keep], ps[keep], planted=planted)


def gen_planted(n: int, S, marginal_spec, eta: float, rng_seed=None) -> ExplicitDistribution:
    """Planted instance: labels f_S(x) with analytic flip rate eta.

    The planted disjunction has error exactly eta.
    """
    f = S if isinstance(S, MonotoneDisjunction) else MonotoneDisjunction(S, n)
    f = MonotoneDisjunction(f.support, n)
    rng = np.random.default_rng(rng_seed)
    X, px = marginal_points(n, marginal_spec, rng)
    if len(X) == 0:
        raise ValueError("empty marginal support")
    return fold_labels(X, px, f, eta, planted=(tuple(sorted(f.support)), eta))


def gen_random(n: int, support: int, rng_seed=None, max_weight: int | None = None) -> ExplicitDistribution:
    """Arbitrary labels and random masses on ``support`` random points (weight <= max_weight)."""
    rng = np.random.default_rng(rng_seed)
    hi = n if max_weight is None else min(n, max_weight)
    X = _distinct_random_points(n, support, (0, hi), rng)
    y = rng.integers(0, 2, size=len(X))
    p = rng.random(len(X)) + 0.05
    return ExplicitDistribution(n, X, y, p, normalize=True)


# --------------------------------------------------------------------------- file format


def write_examples(path, data) -> None:
    """Write the text format: ``n=<dim>`` header, then ``<bits> <label> [<prob>]`` lines."""
    lines = [f"n={data.n}"]
    planted = getattr(data, "planted", None)
    if planted is not None:
        S, eta = planted
        lines.append(f"# planted S={','.join(map(str, S))} eta={eta!r}")
    explicit = isinstance(data, ExplicitDistribution)
    for x, y, p in zip(data.X, data.y, data.weights):
        bits = "".join("1" if b else "0" for b in x)
        lines.append(f"{bits} {int(y)} {float(p)!r}" if explicit else f"{bits} {int(y)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_examples(path):
    """Parse the text format; three-column files become ExplicitDistributions."""
    text = Path(path).read_text().splitlines()
    n = None
    planted = None
    rows, labels, probs = [], [], []
    for lineno, raw in enumerate(text, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            planted = _parse_planted(line) or planted
            continue
        if n is None:
            if not line.startswith("n="):
                raise ValueError(f"line {lineno}: expected header n=<dim>")
            n = int(line[2:])
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected '<bits> <label> [<prob>]'")
        bits = parts[0]
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"line {lineno}: bad bit string for n={n}")
        if parts[1] not in ("0", "1"):
            raise ValueError(f"line {lineno}: label must be 0 or 1")
        rows.append([1 if c == "1" else 0 for c in bits])
        labels.append(int(parts[1]))
        probs.append(float(parts[2]) if len(parts) == 3 else None)
    if n is None:
        raise ValueError("missing header")
    if not rows:
        raise ValueError("no examples")
    X = np.array(rows, dtype=np.uint8).reshape(-1, n)
    if all(p is not None for p in probs):
        return ExplicitDistribution(n, X, labels, probs, planted=planted)
    if any(p is not None for p in probs):
        raise ValueError("mixed two- and three-column records")
    return EmpiricalSample(n, X, labels)


def _parse_planted(line: str):
    body = line.lstrip("#").split()
    if not body or body[0] != "planted":
        return None
    fields = dict(tok.split("=", 1) for tok in body[1:] if "=" in tok)
    S = tuple(int(s) for s in fields.get("S", "").split(",") if s)
    return S, float(fields.get("eta", "0"))


def marginal_from_args(kind: str, n: int, **kw):
    """Build a marginal spec from CLI-style keywords."""
    if kind == "uniform":
        from .domain import all_points
        return UniformList([BitVector.from_array(row) for row in all_points(n)])
    if kind == "weight-band":
        return WeightBand(kw.get("lo", 0), kw.get("hi", n), kw.get("mode", "auto"), kw.get("support_size", 256))
    if kind == "heavy-light":
        return HeavyLightMixture(kw["p_heavy"], kw["r"], kw.get("support_size", 64))
    raise ValueError(f"unknown marginal kind {kind!r}")


def gen_elimination(n: int, S, r: int, p_heavy: float, eta: float, support_size: int = 32,
                    rng_seed=None) -> ExplicitDistribution:
    """Planted instance whose heavy mass is split evenly between points hitting S and points missing it.

    Light points have weight <= r.  On the heavy side no constant beats 1/2, so a
    learner has to discard the coordinates of a heavy point that misses S.
    """
    f = MonotoneDisjunction(S, n)
    rng = np.random.default_rng(rng_seed)
    outside = np.array([i for i in range(n) if i not in f.support])
    if len(outside) <= r:
        raise ValueError("need more than r coordinates outside S")
    light = _distinct_random_points(n, support_size, (0, min(r, n)), rng)
    hit = _distinct_random_points(n, 4 * support_size, (r + 1, n), rng)
    hit = hit[f(hit) == 1][:support_size]
    sub = _distinct_random_points(len(outside), support_size, (r + 1, len(outside)), rng)
    miss = np.zeros((len(sub), n), dtype=np.uint8)
    miss[:, outside] = sub
    X = np.concatenate([light, hit, miss])
    px = np.concatenate([np.full(len(light), (1 - p_heavy) / len(light)),
                         np.full(len(hit), p_heavy / 2 / len(hit)),
                         np.full(len(miss), p_heavy / 2 / len(miss))])
    return fold_labels(X, px, f, eta, planted=(tuple(sorted(f.support)), eta))
