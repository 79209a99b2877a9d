"""Catalog of monotone generator functions and their numeric inverses.

A generator is a continuous, strictly monotone function f on a closed bounded
interval, with closed-form first and second derivatives for every catalog
member.  Generators define quasi-arithmetic means through
f^{-1}(sum w_i f(a_i)).  The catalog is closed (identity, power, log, exp,
sine-perturbed, plus affine wrapping) so that property tests can enumerate it.

All evaluation methods accept floats or numpy arrays and are pure; instances
are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import ArgumentError, RangeError

ArrayLike = Union[float, np.ndarray]

DOMAIN_SLACK = 1e-12
RANGE_SLACK = 1e-10
_MONOTONE_GRID = 513
_MAX_BISECT = 200


@dataclass(frozen=True)
class Interval:
    """Closed bounded interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ArgumentError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ArgumentError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: ArrayLike, slack: float = DOMAIN_SLACK) -> bool:
        arr = np.asarray(x, dtype=float)
        return bool(np.all((arr >= self.lo - slack) & (arr <= self.hi + slack)))

    def contains_interval(self, other: "Interval", slack: float = DOMAIN_SLACK) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def clamp(self, x: ArrayLike) -> ArrayLike:
        out = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        return float(out) if np.ndim(x) == 0 else out

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, n)


def _scalarize(x, out):
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class Generator:
    """A strictly monotone catalog function on a closed bounded interval.

    kind is one of 'identity', 'power', 'log', 'exp', 'sine', 'affine';
    params carries the catalog parameters ((p,) for power, (c,) for exp,
    (n,) for sine, (c, d) for affine).  Construction validates strict
    monotonicity on a dense grid, so invalid parameter/domain combinations
    fail fast.
    """

    kind: str
    params: tuple
    domain: Interval
    inner: Optional["Generator"] = None

    def __post_init__(self):
        self._validate_params()
        self._validate_monotone()

    # -- construction-time validation ------------------------------------

    def _validate_params(self):
        k = self.kind
        if k == "identity":
            if self.params:
                raise ArgumentError("identity takes no parameters")
        elif k == "power":
            (p,) = self.params
            if p == 0:
                raise ArgumentError("power exponent must be nonzero")
            if (p < 1 or not float(p).is_integer()) and self.domain.lo <= 0:
                raise ArgumentError(
                    f"power:{p} needs a domain with lo > 0, got lo={self.domain.lo}"
                )
        elif k == "log":
            if self.params:
                raise ArgumentError("log takes no parameters")
            if self.domain.lo <= 0:
                raise ArgumentError(f"log needs a domain with lo > 0, got lo={self.domain.lo}")
        elif k == "exp":
            (c,) = self.params
            if c == 0:
                raise ArgumentError("exp rate must be nonzero")
        elif k == "sine":
            (n,) = self.params
            if n < 2:
                raise ArgumentError(f"sine-perturbed generator needs n >= 2, got {n}")
        elif k == "affine":
            c, _d = self.params
            if c == 0:
                raise ArgumentError("affine scale must be nonzero")
            if self.inner is None:
                raise ArgumentError("affine wrap needs an inner generator")
            if self.inner.domain != self.domain:
                raise ArgumentError("affine wrap must keep the inner generator's domain")
        else:
            raise ArgumentError(f"unknown generator kind {k!r}")
        if k != "affine" and self.inner is not None:
            raise ArgumentError(f"{k} takes no inner generator")

    def _validate_monotone(self):
        xs = np.linspace(self.domain.lo, self.domain.hi, _MONOTONE_GRID)
        vals = self._eval_raw(xs)
        if not np.all(np.isfinite(vals)):
            raise ArgumentError(f"{self.spec_string()} is non-finite on its domain")
        d = np.diff(vals)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ArgumentError(f"{self.spec_string()} is not strictly monotone on its domain")
        # isolated zeros of f' (e.g. x^3 at 0) are fine; sign changes are not
        d1 = self._deriv_raw(xs[1:-1], 1)
        if np.any(d1 > 0) and np.any(d1 < 0):
            raise ArgumentError(f"{self.spec_string()} has a sign-changing first derivative")

    # -- evaluation -------------------------------------------------------

    def _eval_raw(self, x: ArrayLike) -> np.ndarray:
        k = self.kind
        xa = np.asarray(x, dtype=float)
        if k == "identity":
            return xa + 0.0
        if k == "power":
            return np.power(xa, self.params[0])
        if k == "log":
            return np.log(xa)
        if k == "exp":
            return np.exp(self.params[0] * xa)
        if k == "sine":
            n = self.params[0]
            return xa + np.sin(n * xa) / (n * n)
        # affine
        c, d = self.params
        return c * self.inner._eval_raw(xa) + d

    def __call__(self, x: ArrayLike, check: bool = True) -> ArrayLike:
        if check and not self.domain.contains(x):
            raise RangeError(f"point outside domain [{self.domain.lo}, {self.domain.hi}]")
        return _scalarize(x, self._eval_raw(x))

    def _deriv_raw(self, x: ArrayLike, order: int) -> np.ndarray:
        k = self.kind
        xa = np.asarray(x, dtype=float)
        if k == "identity":
            return np.ones_like(xa) if order == 1 else np.zeros_like(xa)
        if k == "power":
            p = self.params[0]
            if order == 1:
                return p * np.power(xa, p - 1)
            return p * (p - 1) * np.power(xa, p - 2)
        if k == "log":
            return 1.0 / xa if order == 1 else -1.0 / (xa * xa)
        if k == "exp":
            c = self.params[0]
            return (c if order == 1 else c * c) * np.exp(c * xa)
        if k == "sine":
            n = self.params[0]
            if order == 1:
                return 1.0 + np.cos(n * xa) / n
            return -np.sin(n * xa)
        if k == "affine":
            return self.params[0] * self.inner._deriv_raw(xa, order)
        # unreachable for the closed catalog; kept as a finite-difference net
        fd = np.vectorize(lambda t: finite_difference(self._eval_raw, t, order, self.domain))
        return fd(xa)

    def deriv(self, x: ArrayLike, order: int = 1, check: bool = True) -> ArrayLike:
        """First or second derivative, closed form for the whole catalog."""
        if order not in (1, 2):
            raise ArgumentError(f"derivative order must be 1 or 2, got {order}")
        if check and not self.domain.contains(x):
            raise RangeError(f"point outside domain [{self.domain.lo}, {self.domain.hi}]")
        return _scalarize(x, self._deriv_raw(x, order))

    def arrow_pratt(self, x: ArrayLike, check: bool = True) -> ArrayLike:
        """The ratio f''/f', in closed form per catalog kind.

        identity -> 0, power(p) -> (p-1)/x, log -> -1/x, exp(c) -> c,
        sine(n) -> -n sin(nx)/(n + cos(nx)); affine wrapping leaves it
        unchanged.
        """
        if check and not self.domain.contains(x):
            raise RangeError(f"point outside domain [{self.domain.lo}, {self.domain.hi}]")
        k = self.kind
        xa = np.asarray(x, dtype=float)
        if k == "identity":
            out = np.zeros_like(xa)
        elif k == "power":
            out = (self.params[0] - 1.0) / xa
        elif k == "log":
            out = -1.0 / xa
        elif k == "exp":
            out = np.full_like(xa, self.params[0])
        elif k == "sine":
            n = self.params[0]
            out = -n * np.sin(n * xa) / (n + np.cos(n * xa))
        else:  # affine: f''/f' = (c g'')/(c g')
            return self.inner.arrow_pratt(x, check=False)
        return _scalarize(x, out)

    def range_endpoints(self) -> tuple:
        f_lo = float(self._eval_raw(self.domain.lo))
        f_hi = float(self._eval_raw(self.domain.hi))
        return f_lo, f_hi

    def is_increasing(self) -> bool:
        f_lo, f_hi = self.range_endpoints()
        return f_hi > f_lo

    def spec_string(self) -> str:
        """Compact text form, reparseable by parse_generator."""
        k = self.kind
        if k == "identity":
            return "identity"
        if k == "log":
            return "log"
        if k == "affine":
            c, d = self.params
            return f"affine:{c!r},{d!r}:{self.inner.spec_string()}"
        return f"{k}:{self.params[0]!r}"


# -- catalog constructors --------------------------------------------------


def identity(domain: Interval) -> Generator:
    return Generator("identity", (), domain)


def power(p: float, domain: Interval) -> Generator:
    return Generator("power", (float(p),), domain)


def log(domain: Interval) -> Generator:
    return Generator("log", (), domain)


def exp(c: float, domain: Interval) -> Generator:
    return Generator("exp", (float(c),), domain)


def sine_perturbed(n: float, domain: Interval) -> Generator:
    """f(x) = x + sin(n x) / n^2; strictly increasing for n >= 2."""
    return Generator("sine", (float(n),), domain)


def affine(c: float, d: float, inner: Generator) -> Generator:
    """c*inner(x) + d with c != 0; defines the same quasi-arithmetic mean."""
    return Generator("affine", (float(c), float(d)), inner.domain, inner=inner)


def parse_generator(text: str, domain: Interval) -> Generator:
    """Parse the compact spec form: identity | power:P | log | exp:C | sine:N
    | affine:C,D:INNER (INNER is itself a spec, recursively)."""
    s = text.strip()
    if s in ("identity", "id"):
        return identity(domain)
    if s == "log":
        return log(domain)
    head, sep, rest = s.partition(":")
    if not sep or not rest:
        raise ArgumentError(f"cannot parse generator spec {text!r}")
    try:
        if head == "power":
            return power(float(rest), domain)
        if head == "exp":
            return exp(float(rest), domain)
        if head == "sine":
            return sine_perturbed(float(rest), domain)
        if head == "affine":
            params, sep2, inner_text = rest.partition(":")
            if not sep2 or not inner_text:
                raise ArgumentError(f"affine spec needs an inner generator: {text!r}")
            c_str, sep3, d_str = params.partition(",")
            if not sep3:
                raise ArgumentError(f"affine spec needs two parameters: {text!r}")
            return affine(float(c_str), float(d_str), parse_generator(inner_text, domain))
    except ArgumentError:
        raise
    except ValueError as e:
        raise ArgumentError(f"cannot parse generator spec {text!r}: {e}") from e
    raise ArgumentError(f"unknown generator {head!r} in spec {text!r}")


# -- inversion --------------------------------------------------------------


def _range_check_and_clip(gen: Generator, y: np.ndarray) -> np.ndarray:
    f_lo, f_hi = gen.range_endpoints()
    r_lo, r_hi = min(f_lo, f_hi), max(f_lo, f_hi)
    slack = RANGE_SLACK * (1.0 + max(abs(r_lo), abs(r_hi)))
    if np.any(y < r_lo - slack) or np.any(y > r_hi + slack):
        raise RangeError(
            f"value outside the range [{r_lo}, {r_hi}] of {gen.spec_string()}"
        )
    return np.clip(y, r_lo, r_hi)


def batch_inverse(gen: Generator, y: np.ndarray) -> np.ndarray:
    """Vectorized bisection solving f(x) = y_i on the generator's domain.

    Each y_i must lie in the range (small slack tolerated, then clamped).
    Brackets halve until they reach floating-point resolution, so the
    residual |f(x)-y| is limited only by the conditioning of f.
    """
    ya = _range_check_and_clip(gen, np.asarray(y, dtype=float))
    lo = np.full_like(ya, gen.domain.lo)
    hi = np.full_like(ya, gen.domain.hi)
    ascending = gen.is_increasing()
    scale = max(1.0, abs(gen.domain.lo), abs(gen.domain.hi))
    tol = 4.0 * np.finfo(float).eps * scale
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        fm = gen._eval_raw(mid)
        go_right = (fm < ya) if ascending else (fm > ya)
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
        if np.max(hi - lo) <= tol:
            break
    out = gen.domain.clamp(0.5 * (lo + hi))
    # exact endpoint snap so clamped-range queries round-trip exactly
    f_lo, f_hi = gen.range_endpoints()
    out = np.where(ya == f_lo, gen.domain.lo, out)
    out = np.where(ya == f_hi, gen.domain.hi, out)
    return out


def inverse(gen: Generator, y: float) -> float:
    """Solve f(x) = y by bracketed bisection; result clamped to the domain."""
    return float(batch_inverse(gen, np.asarray(float(y))))


# -- finite differences ------------------------------------------------------


def finite_difference(fn: Callable, x: float, order: int = 1,
                      interval: Optional[Interval] = None,
                      h: Optional[float] = None) -> float:
    """Finite-difference derivative, default step h = max(1e-6, 1e-6*|x|).

    Central stencils in the interior, second-order one-sided stencils when
    the central stencil would leave the interval.  Second differences at the
    default step carry rounding noise ~eps/h^2; pass a larger h when that
    matters.
    """
    if order not in (1, 2):
        raise ArgumentError(f"derivative order must be 1 or 2, got {order}")
    if h is None:
        h = max(1e-6, 1e-6 * abs(x))
    lo = interval.lo if interval is not None else -math.inf
    hi = interval.hi if interval is not None else math.inf
    f = lambda t: float(fn(t))
    if x - h >= lo and x + h <= hi:
        if order == 1:
            return (f(x + h) - f(x - h)) / (2 * h)
        return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)
    if x - h < lo:  # forward
        if order == 1:
            return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h)
        return (2 * f(x) - 5 * f(x + h) + 4 * f(x + 2 * h) - f(x + 3 * h)) / (h * h)
    # backward
    if order == 1:
        return (3 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (2 * h)
    return (2 * f(x) - 5 * f(x - h) + 4 * f(x - 2 * h) - f(x - 3 * h)) / (h * h)
