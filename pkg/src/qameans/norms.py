"""Norm-like quantities consumed by the distance bounds.

Four estimators, all reported as a value plus a grid-refinement error:

* l1_norm       -- integral of |h| by composite Simpson on doubling grids
* sup_norm      -- max |h| on doubling grids + golden-section polish
* inf_abs_deriv -- min |f'| with the same machinery
* osc_norm      -- sup over subintervals [a,b] of |integral_a^b h|, computed
                   as (max - min) of the cumulative antiderivative, which is
                   an exact reformulation one dimension cheaper than a 2-D
                   search over (a, b)
* sup_b_diff    -- sup of |B_f - B_g| over the triples with |x - z| >= alpha,
                   by a doubling 3-D grid plus coordinate-wise refinement

Grid sups are lower estimates of the true sup; consumers must treat the
refinement error as the visible part of that gap (the bounds module inflates
it before trusting a comparison).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import ArgumentError, EvaluationError
from .generators import Generator, Interval

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# doubling-grid policy knobs
_QUAD_START = 32          # Simpson intervals at the first level
_QUAD_MIN = 512           # no convergence verdict below this many intervals
_QUAD_CAP = 2 ** 19       # interval cap (points stay just above a million)
_QUAD_RTOL = 1e-8
_OSC_RTOL = 2e-10
_OSC_CAP = 2 ** 20
_EXT_START = 129
_EXT_CAP = 2 ** 17 + 1
_EXT_RTOL = 1e-7
_BDIFF_START = 33
_BDIFF_CAP = 257
_BDIFF_RTOL = 1e-3


@dataclass(frozen=True)
class NormEstimate:
    """A nonnegative norm value with its last grid-refinement change."""

    value: float
    refinement_error: float
    grid_size: int
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "refinement_error", float(self.refinement_error))

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "refinement_error": self.refinement_error,
            "grid_size": self.grid_size,
            "kind": self.kind,
        }


def _eval_checked(h: Callable, x: np.ndarray) -> np.ndarray:
    out = np.asarray(h(x), dtype=float)
    if not np.all(np.isfinite(out)):
        raise EvaluationError("function evaluated to a non-finite value on the grid")
    return out


def _scalar_fn(h: Callable) -> Callable:
    return lambda t: float(np.asarray(h(np.asarray(t, dtype=float))))


def _simpson(h: Callable, interval: Interval, n: int) -> float:
    y = _eval_checked(h, interval.grid(n + 1))
    dx = interval.length() / n
    return (dx / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def l1_norm(h: Callable, interval: Interval) -> NormEstimate:
    """Integral of |h| over the interval.

    Composite Simpson, grid doubled until successive values agree to 1e-8
    relative.  Simpson rather than Gauss because integrands like |f''/f'|
    have kink points; the doubling makes the error estimate free.
    """
    habs = lambda x: np.abs(np.asarray(h(x), dtype=float))
    n = _QUAD_START
    prev = _simpson(habs, interval, n)
    err = math.inf
    while n < _QUAD_CAP:
        n *= 2
        cur = _simpson(habs, interval, n)
        err = abs(cur - prev)
        prev = cur
        if n >= _QUAD_MIN and err <= _QUAD_RTOL * (abs(cur) + 1e-16):
            break
    return NormEstimate(max(prev, 0.0), err, n + 1, "L1")


def osc_norm(h: Callable, interval: Interval) -> NormEstimate:
    """sup over a,b of |integral_a^b h| = range of the antiderivative of h.

    The cumulative antiderivative H is built with per-interval Simpson
    (midpoint included); the value is max H - min H over the grid, refined by
    doubling until the range stabilizes.
    """
    lo = interval.lo
    length = interval.length()
    n = _QUAD_START
    last = None
    err = math.inf
    while True:
        xs = np.linspace(lo, interval.hi, n + 1)
        mids = 0.5 * (xs[:-1] + xs[1:])
        y = _eval_checked(h, xs)
        ym = _eval_checked(h, mids)
        dx = length / n
        increments = (dx / 6.0) * (y[:-1] + 4.0 * ym + y[1:])
        hvals = np.concatenate(([0.0], np.cumsum(increments)))
        rng = float(hvals.max() - hvals.min())
        if last is not None:
            err = abs(rng - last)
            if (n >= _QUAD_MIN and err <= _OSC_RTOL * (1.0 + rng)) or n >= _OSC_CAP:
                last = rng
                break
        last = rng
        n *= 2
    return NormEstimate(max(last, 0.0), err, n + 1, "OSC")


def _golden_extremum(fn: Callable, a: float, b: float, maximize: bool,
                     iters: int = 90) -> float:
    sign = 1.0 if maximize else -1.0
    g = lambda t: sign * fn(t)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = g(x1), g(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = g(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = g(x1)
        if b - a <= 1e-15 * max(1.0, abs(a), abs(b)):
            break
    return sign * max(f1, f2)


def _grid_extremum(h: Callable, interval: Interval, maximize: bool,
                   kind: str) -> NormEstimate:
    n = _EXT_START
    xs = interval.grid(n)
    ys = _eval_checked(h, xs)
    pick = np.argmax if maximize else np.argmin
    idx = int(pick(ys))
    best = float(ys[idx])
    err = math.inf
    while n < _EXT_CAP:
        n = 2 * n - 1  # nested: previous grid points are kept
        xs = interval.grid(n)
        ys = _eval_checked(h, xs)
        idx = int(pick(ys))
        cur = float(ys[idx])
        err = abs(cur - best)
        best = cur
        if n >= 513 and err <= _EXT_RTOL * (1.0 + abs(cur)):
            break
    a = float(xs[max(idx - 1, 0)])
    b = float(xs[min(idx + 1, n - 1)])
    polished = _golden_extremum(_scalar_fn(h), a, b, maximize)
    value = max(best, polished) if maximize else min(best, polished)
    return NormEstimate(value, err, n, kind)


def sup_norm(h: Callable, interval: Interval) -> NormEstimate:
    """max |h| over the interval (doubling grid + golden-section polish)."""
    habs = lambda x: np.abs(np.asarray(h(x), dtype=float))
    return _grid_extremum(habs, interval, maximize=True, kind="SUP")


def inf_abs_deriv(gen: Generator, interval: Interval) -> NormEstimate:
    """min |f'| over the interval (doubling grid + golden-section polish)."""
    if not gen.domain.contains_interval(interval):
        raise ArgumentError("interval is not contained in the generator's domain")
    dabs = lambda x: np.abs(np.asarray(gen.deriv(x, 1, check=False), dtype=float))
    est = _grid_extremum(dabs, interval, maximize=False, kind="INF_DERIV")
    return NormEstimate(max(est.value, 0.0), est.refinement_error, est.grid_size, est.kind)


# -- sup of |B_f - B_g| over separated triples -------------------------------


def b_diff_grid_max(f: Generator, g: Generator, alpha: float,
                    interval: Interval, n: int) -> Tuple[float, Tuple[float, float, float]]:
    """Max of |B_f - B_g| over an n^3 grid restricted to |x - z| >= alpha.

    Returns (value, (x, y, z) witness).  A single fixed level; the doubling
    estimator sup_b_diff builds on this.
    """
    xs = interval.grid(n)
    fv = np.asarray(f(xs, check=False), dtype=float)
    gv = np.asarray(g(xs, check=False), dtype=float)
    if not (np.all(np.isfinite(fv)) and np.all(np.isfinite(gv))):
        raise EvaluationError("generator evaluated to a non-finite value on the grid")
    best = -1.0
    arg = (xs[0], xs[0], xs[-1])
    for i in range(n):
        zmask = np.abs(xs[i] - xs) >= alpha
        if not zmask.any():
            continue
        dfz = fv[i] - fv[zmask]
        dgz = gv[i] - gv[zmask]
        bf = (fv[i] - fv)[:, None] / dfz[None, :]
        bg = (gv[i] - gv)[:, None] / dgz[None, :]
        d = np.abs(bf - bg)
        k = int(np.argmax(d))
        v = float(d.flat[k])
        if v > best:
            iy, iz = divmod(k, dfz.size)
            best = v
            arg = (float(xs[i]), float(xs[iy]), float(xs[zmask][iz]))
    return max(best, 0.0), arg


def _b_diff_at(f: Generator, g: Generator, x: float, y: float, z: float) -> float:
    fx, fy, fz = f(x, check=False), f(y, check=False), f(z, check=False)
    gx, gy, gz = g(x, check=False), g(y, check=False), g(z, check=False)
    return abs((fx - fy) / (fx - fz) - (gx - gy) / (gx - gz))


def _refine_b_diff(f: Generator, g: Generator, alpha: float, interval: Interval,
                   start: Tuple[float, float, float], step: float,
                   rounds: int = 6) -> float:
    lo, hi = interval.lo, interval.hi
    x, y, z = start
    best = _b_diff_at(f, g, x, y, z)
    for _ in range(rounds):
        for _sweep in range(8):
            improved = False
            for axis in (0, 1, 2):
                for s in (step, -step, 0.5 * step, -0.5 * step):
                    cx, cy, cz = x, y, z
                    if axis == 0:
                        cx = min(max(x + s, lo), hi)
                    elif axis == 1:
                        cy = min(max(y + s, lo), hi)
                    else:
                        cz = min(max(z + s, lo), hi)
                    if abs(cx - cz) < alpha:
                        continue
                    v = _b_diff_at(f, g, cx, cy, cz)
                    if v > best:
                        best, x, y, z = v, cx, cy, cz
                        improved = True
            if not improved:
                break
        step *= 0.5
    return best


def sup_b_diff(f: Generator, g: Generator, alpha: float,
               interval: Interval) -> NormEstimate:
    """Estimate sup |B_f - B_g| over {(x,y,z) in U^3 : |x-z| >= alpha}.

    Doubling grid (33 to 257 points per axis, stop at 1e-3 relative change)
    followed by coordinate-wise local refinement at the incumbent.  The grid
    value is a lower estimate of the true sup; refinement_error records the
    last doubling change so callers can inflate accordingly.
    """
    if not (alpha > 0):
        raise ArgumentError(f"alpha must be positive, got {alpha}")
    if alpha > interval.length() * (1.0 + 1e-12):
        raise ArgumentError(
            f"alpha = {alpha} exceeds the interval length {interval.length()}; "
            "the restricted region is empty"
        )
    for gen in (f, g):
        if not gen.domain.contains_interval(interval):
            raise ArgumentError("interval is not contained in a generator's domain")
    n = _BDIFF_START
    best, arg = b_diff_grid_max(f, g, alpha, interval, n)
    err = math.inf
    while n < _BDIFF_CAP:
        n = 2 * n - 1
        cur, cur_arg = b_diff_grid_max(f, g, alpha, interval, n)
        err = abs(cur - best)
        if cur >= best:
            best, arg = cur, cur_arg
        if err <= _BDIFF_RTOL * max(abs(cur), 1e-12):
            break
    step = interval.length() / (n - 1)
    refined = _refine_b_diff(f, g, alpha, interval, arg, step)
    if math.isinf(err):
        err = 0.0
    return NormEstimate(max(best, refined), err, n, "SUP_B_DIFF")
