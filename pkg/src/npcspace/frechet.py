"""Frechet means and variance in NPC orthant spaces.

The variance is the unnormalized ``S(X) = r * sum_l w_l d(X, T_l)^2``,
which is ``sum_l d(X, T_l)^2`` for uniform weights.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx
import numpy as np

from .core import Point, require_same_space, square, unsquare
from .errors import (
    InvalidSquaredCoordinate,
    MaxOuterIterationsExceeded,
    NotInteriorToMaximalOrthant,
    TimedOut,
    ZeroWeight,
)
from .geodesic import gtp_support

log = logging.getLogger(__name__)


class WeightedSample:
    """Points of one space with nonnegative weights summing to 1."""

    def __init__(self, points: Sequence[Point], weights: Sequence[float] | None = None):
        points = list(points)
        if not points:
            raise ValueError("empty sample")
        require_same_space(*points)
        if weights is None:
            w = np.full(len(points), 1.0 / len(points))
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (len(points),):
                raise ValueError("one weight per point is required")
            if (w < 0).any() or not np.isfinite(w).all():
                raise ValueError("weights must be finite and nonnegative")
            if w.sum() == 0:
                raise ZeroWeight("all weights are zero")
            if abs(w.sum() - 1) > 1e-12:
                raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        self.points = points
        self.weights = w

    @classmethod
    def normalized(cls, points, weights):
        w = np.asarray(weights, dtype=float)
        if w.sum() <= 0:
            raise ZeroWeight("all weights are zero")
        return cls(points, w / w.sum())

    @property
    def space(self):
        return self.points[0].space

    @property
    def r(self) -> int:
        return len(self.points)

    def factors(self) -> np.ndarray:
        """``r * w_l``; all ones for uniform weights."""
        return self.r * self.weights

    def axes(self) -> set:
        return set().union(*(p.support for p in self.points))

    def __len__(self):
        return self.r


def _as_sample(sample) -> WeightedSample:
    return sample if isinstance(sample, WeightedSample) else WeightedSample(sample)


# Variance and gradients

def variance(X: Point, sample) -> float:
    sample = _as_sample(sample)
    d2 = [gtp_support(X, T).distance ** 2 for T in sample.points]
    return math.fsum(f * d for f, d in zip(sample.factors(), d2))


def _check_interior_maximal(X: Point) -> None:
    if not X.space.is_maximal_face(X.support):
        raise NotInteriorToMaximalOrthant("point is not interior to a maximal orthant")


def _gradient(X: Point, sample: WeightedSample, squared: bool) -> dict:
    grad = {e: 0.0 for e in X.coords}
    for f, T in zip(sample.factors(), sample.points):
        g = gtp_support(X, T)
        for e, (x, t) in g.common.items():
            if e in grad:
                x = float(x)
                grad[e] += f * ((1 - float(t) / abs(x)) if squared else 2 * (x - float(t)))
        for (A, B), (na, nb) in zip(g.pairs, g.norms()):
            for e in A:
                x = float(X.coords[e])
                grad[e] += f * ((1 + nb / na) if squared else 2 * x * (1 + nb / na))
    return grad


def variance_gradient(X: Point, sample) -> dict:
    """Partial derivatives of S at X, which must be interior to a maximal orthant."""
    _check_interior_maximal(X)
    return _gradient(X, _as_sample(sample), squared=False)


def _check_squared(xi: Point) -> None:
    for a, v in xi.coords.items():
        if v < 0:
            raise InvalidSquaredCoordinate(f"negative squared coordinate {v} on {a!r}")


def squared_variance(xi: Point, sample) -> float:
    """``S^2(xi) = S(sqrt(xi))``."""
    _check_squared(xi)
    return variance(unsquare(xi), sample)


def squared_variance_gradient(xi: Point, sample) -> dict:
    _check_squared(xi)
    _check_interior_maximal(xi)
    return _gradient(unsquare(xi), _as_sample(sample), squared=True)


# Inductive and Sturm means

def inductive_mean(points: Sequence[Point]) -> Point:
    if not points:
        raise ValueError("empty point list")
    mu = points[0]
    for ell, p in enumerate(points[1:], start=2):
        mu = gtp_support(mu, p).point_at(1 / ell)
    return mu


@dataclass
class SturmParams:
    K: int = 100_000
    N: int = 10
    eps: float = 1e-4
    seed: int = 0
    max_iter: int = 10_000_000
    trace_every: int = 0  # record (k, point, variance) every this many steps; 0 disables

    def __post_init__(self):
        if self.K < 1 or self.N < 2 or not self.eps > 0:
            raise ValueError("need K >= 1, N >= 2 and eps > 0")
        if self.max_iter < self.K:
            raise ValueError("max_iter must be at least K")


@dataclass
class MeanResult:
    mean: Point
    variance: float
    iterations: int
    method: str
    seed: int | None = None
    trace: list = field(default_factory=list)


def sturm_iterates(sample, seed: int, batch: int = 4096):
    """Infinite generator of Sturm iterates ``(k, mu_k)`` starting at k = 1.

    Draws come from ``numpy.random.default_rng(seed)`` in batches, weighted
    by the sample weights.
    """
    sample = _as_sample(sample)
    rng = np.random.default_rng(seed)
    pts, p = sample.points, sample.weights

    def draws():
        while True:
            yield from rng.choice(len(pts), size=batch, p=p).tolist()

    it = draws()
    mu = pts[next(it)]
    k = 1
    yield k, mu
    for idx in it:
        mu = gtp_support(mu, pts[idx]).point_at(1 / (k + 1))
        k += 1
        yield k, mu


def sturm_mean(sample, params: SturmParams | None = None) -> MeanResult:
    """Sturm's algorithm: stop once k >= K and the last N iterates are within eps pairwise."""
    sample = _as_sample(sample)
    params = params or SturmParams()
    window: deque = deque(maxlen=params.N)
    dists: deque = deque(maxlen=params.N)  # dists[i][j]: distance from window[i] to an earlier iterate
    trace = []
    for k, mu in sturm_iterates(sample, params.seed):
        if params.trace_every and k % params.trace_every == 0:
            trace.append((k, mu, variance(mu, sample)))
        if k > params.K - params.N:
            row = [gtp_support(mu, q).distance for q in window]
            window.append(mu)
            dists.append(row)
            if k >= params.K and len(window) == params.N:
                # Row i compares window[i] with the i entries before it; drop stale ones.
                ok = all(d <= params.eps for i, r in enumerate(dists) for d in r[len(r) - i:])
                if ok:
                    return MeanResult(mu, variance(mu, sample), k, "sturm", params.seed, trace)
        if k >= params.max_iter:
            raise TimedOut(f"Sturm's algorithm did not meet its stopping rule in {params.max_iter} iterations")
    raise AssertionError("unreachable")


# Orthant descent

@dataclass
class DescentOptions:
    warm_iterations: int = 1000
    seed: int = 0
    max_outer: int = 50
    tol: float = 1e-8  # gradient-norm and improvement tolerance, relative to the problem scale
    mu0: float = 1.0
    mu_min: float = 1e-14
    mu_factor: float = 0.05
    max_inner: int = 200
    snap: float = 1e-12  # squared coordinates below snap * scale are set to zero


def _sq_value_grad(space, axes: tuple, v: np.ndarray, sample: WeightedSample):
    """``S^2`` and its gradient on the orthant spanned by ``axes``, from one GTP call per sample."""
    X = Point(space, {a: math.sqrt(c) for a, c in zip(axes, v) if c > 0}, validate=False)
    idx = {a: i for i, a in enumerate(axes)}
    grad = np.zeros(len(axes))
    terms = []
    for f, T in zip(sample.factors(), sample.points):
        g = gtp_support(X, T)
        norms = g.norms()
        terms.append(f * math.fsum([(na + nb) ** 2 for na, nb in norms]
                                   + [(float(t) - float(x)) ** 2 for x, t in g.common.values()]))
        for e, (x, t) in g.common.items():
            if e in idx and x != 0:
                grad[idx[e]] += f * (1 - float(t) / abs(float(x)))
            elif e in idx:
                grad[idx[e]] += f  # zero coordinate: one-sided derivative of the n_x term
        for (A, B), (na, nb) in zip(g.pairs, norms):
            for e in A:
                grad[idx[e]] += f * (1 + nb / na)
    return math.fsum(terms), grad


def _candidate_orthants(sample: WeightedSample, support: frozenset) -> list[tuple]:
    space = sample.space
    axes = sorted(sample.axes() | set(support), key=str)
    g = nx.Graph()
    g.add_nodes_from(axes)
    g.add_edges_from((a, b) for a, b in itertools.combinations(axes, 2) if space.compatible(a, b))
    out = []
    for c in nx.find_cliques(g):
        if support <= set(c):
            out.append(tuple(sorted(c, key=str)))
    return sorted(out, key=lambda c: [str(a) for a in c])


def _orthant_minimize(space, axes: tuple, start: dict, sample: WeightedSample, opts: DescentOptions, scale: float):
    """Log-barrier method for S^2 on the closed orthant spanned by ``axes``.

    Each barrier level takes Newton-type steps with the exact barrier Hessian
    ``mu / xi^2`` plus a BFGS model of S^2 (negative-curvature updates are
    skipped), a fraction-to-boundary rule and Armijo backtracking.
    """
    n = len(axes)
    x = np.array([start.get(a, 0.0) for a in axes], dtype=float)
    x = np.maximum(x, 1e-3 * scale / max(n, 1))
    fx, gx = _sq_value_grad(space, axes, x, sample)
    H = np.diag(sample.r / (2 * x))
    mu = opts.mu0 * scale
    while mu >= opts.mu_min * scale:
        for _ in range(opts.max_inner):
            g = gx - mu / x
            if np.abs(x * g).max() <= opts.tol * scale:
                break
            M = H + np.diag(mu / x ** 2)
            try:
                d = -np.linalg.solve(M, g)
            except np.linalg.LinAlgError:
                d = -x * x * g / mu
            if g @ d >= 0:
                d = -x * x * g / mu
            gd = g @ d
            neg = d < 0
            a = min(1.0, 0.99 * np.min(-x[neg] / d[neg])) if neg.any() else 1.0
            phi = fx - mu * np.log(x).sum()
            for _bt in range(60):
                y = x + a * d
                fy, gy = _sq_value_grad(space, axes, y, sample)
                if fy - mu * np.log(y).sum() <= phi + 1e-4 * a * gd:
                    break
                a *= 0.5
            else:
                break
            sv, yv = y - x, gy - gx
            sy = sv @ yv
            if sy > 1e-12 * np.linalg.norm(sv) * np.linalg.norm(yv):
                Hs = H @ sv
                H = H - np.outer(Hs, Hs) / (sv @ Hs) + np.outer(yv, yv) / sy
            x, fx, gx = y, fy, gy
        mu *= opts.mu_factor
    snapped = np.where(x < opts.snap * scale, 0.0, x)
    fs, _ = _sq_value_grad(space, axes, snapped, sample)
    if fs <= fx:
        return snapped, fs
    return x, fx


def _polish(space, xi: dict, cur: float, sample: WeightedSample):
    """Zero the smallest coordinates one at a time while the variance does not increase.

    The barrier iterates approach orthant faces only asymptotically, which
    matters when the variance is flat towards a face.
    """
    for a in sorted(xi, key=xi.get):
        trial = {b: v for b, v in xi.items() if b != a}
        f = variance(unsquare(Point(space, trial, validate=False)), sample)
        if f > cur:
            break
        xi, cur = trial, f
    return xi, cur


def descent_mean(sample, options: DescentOptions | None = None) -> MeanResult:
    """Orthant descent in squared coordinates, warm-started by Sturm's algorithm."""
    sample = _as_sample(sample)
    opts = options or DescentOptions()
    space = sample.space
    mu0 = None
    for k, mu in sturm_iterates(sample, opts.seed):
        mu0 = mu
        if k >= opts.warm_iterations:
            break
    xi = {a: float(v) ** 2 for a, v in mu0.coords.items()}
    cur = variance(mu0, sample)
    scale = max(float(np.mean([sum(float(v) ** 2 for v in p.coords.values()) for p in sample.points])), 1e-300)
    trace = [(0, unsquare(Point(space, xi, validate=False)), cur)]
    for outer in range(1, opts.max_outer + 1):
        support = frozenset(a for a, v in xi.items() if v > 0)
        best = None
        for orth in _candidate_orthants(sample, support):
            v, fv = _orthant_minimize(space, orth, xi, sample, opts, scale)
            if best is None or fv < best[1]:
                best = (dict((a, float(c)) for a, c in zip(orth, v) if c > 0), fv)
        if best is None or best[1] >= cur - opts.tol * max(cur, scale):
            xi, cur = _polish(space, xi, cur, sample)
            mean = unsquare(Point(space, xi, validate=False))
            return MeanResult(mean, variance(mean, sample), outer, "descent", opts.seed, trace)
        xi, cur = best
        trace.append((outer, unsquare(Point(space, xi, validate=False)), cur))
        log.debug("descent step %d: S = %.12g", outer, cur)
    raise MaxOuterIterationsExceeded(f"no convergence in {opts.max_outer} outer iterations")


# Consensus comparators

def mrc_tree(sample) -> Point:
    """Axes present in a strict majority of the points, each with its mean length over those points."""
    sample = _as_sample(sample)
    counts: dict = {}
    sums: dict = {}
    for p in sample.points:
        for a, v in p.coords.items():
            counts[a] = counts.get(a, 0) + 1
            sums[a] = sums.get(a, 0.0) + float(v)
    r = sample.r
    return Point(sample.space, {a: sums[a] / c for a, c in counts.items() if 2 * c > r})


def _diameter(points) -> float:
    return max((gtp_support(p, q).distance for p, q in itertools.combinations(points, 2)), default=0.0)


def bhv_centroid(sample, tol: float = 1e-6, max_rounds: int = 10_000) -> Point:
    """Centroid by iterated centroids of (r-1)-subsets; returns a member of the final r-set."""
    pts = list(_as_sample(sample).points)
    return _centroid(pts, tol, max_rounds)


def _centroid(pts: list, tol: float, max_rounds: int) -> Point:
    r = len(pts)
    if r == 1:
        return pts[0]
    if r == 2:
        return gtp_support(pts[0], pts[1]).point_at(0.5)
    cur = pts
    for _ in range(max_rounds):
        if _diameter(cur) < tol:
            return cur[0]
        cur = [_centroid(cur[:i] + cur[i + 1:], tol, max_rounds) for i in range(r)]
    raise TimedOut(f"centroid iteration did not reach diameter {tol} in {max_rounds} rounds")


@dataclass
class EdgeReport:
    foreign: list  # mean axes absent from every sample point
    missing: list  # axes in every sample point but absent from the mean

    @property
    def ok(self) -> bool:
        return not self.foreign and not self.missing


def mean_edge_report(mean: Point, sample, tol: float = 1e-6) -> EdgeReport:
    sample = _as_sample(sample)
    seen = sample.axes()
    everywhere = set.intersection(*(set(p.support) for p in sample.points))
    foreign = sorted((a for a, v in mean.coords.items() if abs(float(v)) > tol and a not in seen), key=str)
    missing = sorted((a for a in everywhere if abs(float(mean[a])) <= tol), key=str)
    return EdgeReport(foreign, missing)
