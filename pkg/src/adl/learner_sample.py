"""Sample-based weak agnostic learner for monotone disjunctions and its boosted strong learner."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .boosting import BoostConfig, WeakLearnerFailure, WeakLearnerHandle, aboost_run
from .chebyshev import approx_degree
from .distributions import EmpiricalSample, ExplicitDistribution, draw, vc_sample_size
from .domain import Constant, MonotoneDisjunction, RegionSplit, WeightAtMost, WeightMoreThan
from .l1regression import l1_fit, round_to_hypothesis


@dataclass
class Alg1Config:
    eps: float
    r: int | None = None
    T: int | None = None
    sample_size: int | None = None
    sample_cap: int = 20000
    repeats: int = 500
    seed: int = 0
    degree: int | None = None
    max_degree: int | None = None
    uniform_cprime: bool = False
    vc_constant: float = 64
    jobs: int = 1

    def resolve(self, n: int) -> "Alg1Config":
        if not 0 < self.eps < 0.5:
            raise ValueError("eps must lie in (0, 1/2)")
        r = self.r if self.r is not None else max(1, math.ceil(n ** (2 / 3)))
        T = self.T if self.T is not None else math.ceil(n / r) + 1
        if r < 1 or T < 1:
            raise ValueError("r and T must be >= 1")
        size = self.sample_size
        if size is None:
            size = min(vc_sample_size(max(n, 1), self.eps / 20, self.vc_constant), self.sample_cap)
        deg = self.degree if self.degree is not None else approx_degree(r, self.eps / 100)
        if self.max_degree is not None:
            deg = min(deg, self.max_degree)
        return replace(self, r=r, T=T, sample_size=size, degree=deg)


@dataclass
class Alg1Step:
    t: int
    coords: tuple
    n_light: int
    n_heavy: int
    err1: float
    err2: float
    guess: str | None = None
    removed: int = 0


@dataclass
class Alg1Trace:
    steps: list = field(default_factory=list)
    outcome: str = ""
    returned: int | None = None    # 1 or 2

    def coord_sets(self):
        return [set(s.coords) for s in self.steps]


class _FitCache:
    """Per-sample memo of (coordinate set, degree) -> fitted light-side hypothesis."""

    def __init__(self):
        self.store = {}

    def get(self, key, make):
        if key not in self.store:
            self.store[key] = make()
        return self.store[key]


def _error(h, X, y, w):
    return float(np.dot(w, h.predict(X) != y))


def _choose_cprime(make, X, y, w, rng, uniform):
    if uniform:
        return make(int(rng.integers(0, 2)))
    cands = [make(c) for c in (0, 1)]
    errs = [_error(h, X, y, w) for h in cands]
    return cands[int(np.argmin(errs))]


def forced_guess_hook(S):
    """Debug hook: guess only heavy points where the planted disjunction is 0."""
    f = MonotoneDisjunction(S)

    def hook(Xh, wh, rng):
        ok = np.flatnonzero(f(Xh) == 0)
        if ok.size == 0:
            return None
        p = wh[ok] / wh[ok].sum()
        return int(ok[rng.choice(ok.size, p=p)])
    return hook


def alg1_single_run(P, cfg: Alg1Config, rng=None, guess_hook=None, cache: _FitCache | None = None):
    """One run of the weak learner on the sample P; returns (hypothesis or None, trace)."""
    if len(P) == 0:
        raise ValueError("empty sample")
    data = P.to_explicit() if isinstance(P, EmpiricalSample) else P
    n = data.n
    cfg = cfg.resolve(n) if cfg.r is None or cfg.T is None or cfg.degree is None else cfg
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    cache = cache or _FitCache()
    X, y, w = data.X, data.y, data.weights
    I = tuple(range(n))
    trace = Alg1Trace()
    target = 0.5 - cfg.eps / 10
    for t in range(cfg.T + 1):
        Iset = frozenset(I)
        idx = np.array(I, dtype=np.int64)
        wt = X[:, idx].sum(axis=1) if idx.size else np.zeros(len(X), dtype=np.int64)
        light = wt <= cfg.r
        light_region = WeightAtMost(Iset, cfg.r)
        heavy_region = WeightMoreThan(Iset, cfg.r)
        deg = min(cfg.degree, len(I))

        def fit_light():
            if not light.any():
                return Constant(0)
            sub = ExplicitDistribution(n, X[light], y[light], w[light], normalize=True)
            p = l1_fit(sub, I, deg)
            return round_to_hypothesis(p, sub, eps=cfg.eps)

        h1p = cache.get((Iset, deg), fit_light)
        h1 = _choose_cprime(lambda c: RegionSplit(light_region, h1p, Constant(c)), X, y, w, rng,
                            cfg.uniform_cprime)
        h2 = _choose_cprime(lambda c: RegionSplit(heavy_region, Constant(1), Constant(c)), X, y, w, rng,
                            cfg.uniform_cprime)
        e1, e2 = _error(h1, X, y, w), _error(h2, X, y, w)
        step = Alg1Step(t, I, int(light.sum()), int((~light).sum()), e1, e2)
        trace.steps.append(step)
        for k, (h, e) in enumerate(((h1, e1), (h2, e2)), 1):
            if e <= target:
                trace.outcome = "returned"
                trace.returned = k
                return h, trace
        heavy = np.flatnonzero(~light)
        if heavy.size == 0:
            trace.outcome = "no heavy points"
            return None, trace
        if guess_hook is not None:
            j = guess_hook(X[heavy], w[heavy], rng)
            if j is None:
                trace.outcome = "no admissible guess"
                return None, trace
        else:
            j = int(rng.choice(heavy.size, p=w[heavy] / w[heavy].sum()))
        xg = X[heavy[j]]
        step.guess = "".join(map(str, xg))
        I_next = tuple(i for i in I if xg[i] == 0)
        step.removed = len(I) - len(I_next)
        I = I_next
    trace.outcome = "iterations exhausted"
    return None, trace


class NoHypothesisError(WeakLearnerFailure):
    pass


@dataclass
class WeakResult:
    hypothesis: object
    holdout_error: float
    trial: int
    successes: int
    trials: int
    traces: list = field(default_factory=list)


def _sample(source, m, seed):
    if isinstance(source, ExplicitDistribution):
        return draw(source, m, seed)
    return source(m, seed)


def alg1_weak_learner_run(source, cfg: Alg1Config, guess_hook=None, keep_traces=False) -> WeakResult:
    n = source.n
    cfg = cfg.resolve(n)
    ss = np.random.SeedSequence(cfg.seed)
    s_train, s_hold, s_runs = ss.spawn(3)
    P = _sample(source, cfg.sample_size, np.random.default_rng(s_train))
    H = _sample(source, cfg.sample_size, np.random.default_rng(s_hold))
    data = P.to_explicit()
    hold = H.to_explicit()
    cache = _FitCache()
    run_seeds = s_runs.spawn(cfg.repeats)

    def one(i):
        return alg1_single_run(data, cfg, np.random.default_rng(run_seeds[i]), guess_hook, cache)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(one, range(cfg.repeats)))
    else:
        results = [one(i) for i in range(cfg.repeats)]
    best = None
    successes = 0
    for i, (h, tr) in enumerate(results):
        if h is None:
            continue
        successes += 1
        e = _error(h, hold.X, hold.y, hold.weights)
        if best is None or e < best[0]:
            best = (e, i, h)
    traces = [tr for _, tr in results] if keep_traces else []
    if best is None or best[0] > 0.5 - cfg.eps / 100:
        raise NoHypothesisError(f"no qualifying hypothesis after {cfg.repeats} repetitions")
    return WeakResult(best[2], best[0], best[1], successes, cfg.repeats, traces)


def alg1_weak_learner(source, cfg: Alg1Config, guess_hook=None):
    """Best held-out hypothesis over ``cfg.repeats`` runs; raises if none beats 1/2 - eps/100."""
    return alg1_weak_learner_run(source, cfg, guess_hook).hypothesis


def strong_learner_sample(source: ExplicitDistribution, eps: float, cfg: Alg1Config | None = None,
                          boost_cfg: BoostConfig | None = None):
    """Boost the weak learner with (alpha, gamma) = (eps, eps/100); returns the BoostRun."""
    cfg = cfg or Alg1Config(eps=eps, repeats=50)
    weak_eps = cfg.eps

    def fn(view, seed):
        return alg1_weak_learner(view, replace(cfg, eps=weak_eps, seed=seed))

    handle = WeakLearnerHandle(fn, eps, eps / 100, "alg1")
    return aboost_run(handle, source, eps, eps / 100, boost_cfg or BoostConfig(seed=cfg.seed))
