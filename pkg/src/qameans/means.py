"""Quasi-arithmetic means and closed-form reference means.

The mean of a weighted sample (a, w) under a generator f is
f^{-1}(sum w_i f(a_i)); the result is clamped into [min a, max a] because
floating-point summation can step just outside the range at repeated-point
samples, and internality is a hard invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, RangeError
from .generators import Generator, batch_inverse, inverse

WEIGHT_SUM_TOL = 1e-6


@dataclass(frozen=True)
class WeightedSample:
    """Points with positive weights; weights are renormalized to sum to 1.

    Weight sums within 1e-6 of 1 are treated as input noise and divided
    through; anything farther off is rejected as a real error.
    """

    points: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        pts = np.atleast_1d(np.array(self.points, dtype=float))
        if pts.ndim != 1 or pts.size < 1:
            raise ArgumentError("sample needs a 1-D vector of at least one point")
        if not np.all(np.isfinite(pts)):
            raise ArgumentError("sample points must be finite")
        if self.weights is None:
            w = np.full(pts.size, 1.0 / pts.size)
        else:
            w = np.atleast_1d(np.array(self.weights, dtype=float))
            if w.shape != pts.shape:
                raise ArgumentError(
                    f"got {pts.size} points but {w.size} weights"
                )
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ArgumentError("every weight must be positive and finite")
            total = float(w.sum())
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                raise ArgumentError(f"weights sum to {total}, expected 1")
            w = w / total
        pts.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.size


def parse_sample(text: str) -> WeightedSample:
    """Parse 'a=1,3,5 w=0.2,0.3,0.5'; omitting w gives uniform weights."""
    pts = None
    wts = None
    for tok in text.split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ArgumentError(f"cannot parse sample token {tok!r}")
        vec = parse_vector(val)
        if key == "a":
            pts = vec
        elif key == "w":
            wts = vec
        else:
            raise ArgumentError(f"unknown sample key {key!r}")
    if pts is None:
        raise ArgumentError(f"sample spec {text!r} has no points")
    return WeightedSample(pts, wts)


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",") if t != ""], dtype=float)
    except ValueError as e:
        raise ArgumentError(f"cannot parse number list {text!r}: {e}") from e


def qa_mean(gen: Generator, sample: WeightedSample) -> float:
    """Quasi-arithmetic mean f^{-1}(sum w_i f(a_i)), clamped to [min a, max a]."""
    pts = sample.points
    if not gen.domain.contains(pts):
        raise RangeError(
            f"sample points outside the domain [{gen.domain.lo}, {gen.domain.hi}]"
        )
    s = float(np.dot(sample.weights, gen._eval_raw(pts)))
    m = inverse(gen, s)
    return float(min(max(m, pts.min()), pts.max()))


def qa_mean_batch(gen: Generator, points: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Row-wise quasi-arithmetic means for a (k, n) batch of samples.

    Rows of `weights` must already be normalized; points must lie in the
    generator's domain.  Used by the worst-case search hot path.
    """
    s = np.einsum("ij,ij->i", weights, gen._eval_raw(points))
    m = batch_inverse(gen, s)
    return np.clip(m, points.min(axis=1), points.max(axis=1))


def power_mean(p: float, sample: WeightedSample) -> float:
    """Reference mean (sum w_i a_i^p)^(1/p); p = 0 is the geometric mean."""
    pts = sample.points
    if np.any(pts <= 0):
        raise RangeError("power means need strictly positive points")
    w = sample.weights
    if p == 0:
        return float(np.exp(np.dot(w, np.log(pts))))
    return float(np.dot(w, np.power(pts, p)) ** (1.0 / p))
