"""Three-point difference-ratio operator and the f''/f' operator.

For a generator f, the difference ratio
    B_f(x, y, z) = (f(x) - f(y)) / (f(x) - f(z))
is defined whenever x != z (strict monotonicity keeps the denominator
nonzero).  It satisfies two structural identities used throughout the
bounds machinery:

    B_f(x, y, z) + B_f(z, y, x) = 1
    sum_i w_i B_f(M, a_i, z) = 0   with M the quasi-arithmetic mean of (a, w)

The second operator, A_f = f''/f' (the Arrow-Pratt index in economics),
is affine-invariant and evaluated from closed forms for the whole catalog.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegeneratePointError, RangeError, VanishingDerivativeError
from .generators import Generator
from .means import WeightedSample, qa_mean

SEPARATION = 1e-12
DERIV_FLOOR = 1e-12


@dataclass(frozen=True)
class DeltaPoint:
    """A triple (x, y, z) with x and z separated by at least 1e-12."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(self.x - self.z) < SEPARATION:
            raise DegeneratePointError(
                f"x and z must be separated, got |x-z| = {abs(self.x - self.z):.3e}"
            )

    def in_delta_alpha(self, alpha: float) -> bool:
        return abs(self.x - self.z) >= alpha


def pales_b(gen: Generator, p: DeltaPoint) -> float:
    """Difference ratio (f(x)-f(y))/(f(x)-f(z)) at a separated triple."""
    if not (gen.domain.contains(p.x) and gen.domain.contains(p.y) and gen.domain.contains(p.z)):
        raise RangeError(f"triple outside domain [{gen.domain.lo}, {gen.domain.hi}]")
    fx = gen(p.x, check=False)
    return (fx - gen(p.y, check=False)) / (fx - gen(p.z, check=False))


def arrow_pratt(gen: Generator, x: float) -> float:
    """f''(x)/f'(x), from the catalog closed forms."""
    if not gen.domain.contains(x):
        raise RangeError(f"point outside domain [{gen.domain.lo}, {gen.domain.hi}]")
    d1 = gen.deriv(x, 1, check=False)
    if abs(d1) < DERIV_FLOOR:
        raise VanishingDerivativeError(f"|f'({x})| = {abs(d1):.3e} is below {DERIV_FLOOR}")
    return gen.arrow_pratt(x, check=False)


def weighted_b_sum(gen: Generator, sample: WeightedSample, z: float) -> float:
    """sum_i w_i B_f(M, a_i, z) with M = qa_mean(gen, sample); contract: ~ 0.

    z must be in the domain and separated from the mean; the deviation from
    zero is bounded by the mean-inversion residual over |f(M) - f(z)|.
    """
    if not gen.domain.contains(z):
        raise RangeError(f"z outside domain [{gen.domain.lo}, {gen.domain.hi}]")
    m = qa_mean(gen, sample)
    if abs(z - m) < SEPARATION:
        raise DegeneratePointError(f"z = {z} coincides with the mean {m}")
    fm = gen(m, check=False)
    num = fm - gen._eval_raw(sample.points)
    den = fm - gen(z, check=False)
    return float((sample.weights * num).sum() / den)
