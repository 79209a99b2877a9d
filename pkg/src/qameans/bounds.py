"""Upper bounds on the worst-case distance between two quasi-arithmetic means.

Four bounds on rho(M_f, M_g) = sup_{a,w} |M_f(a,w) - M_g(a,w)|:

* CARGO_SHISHA: 2 ||f - g||_inf / inf |f'|
* L1_SINH:      |U| exp(2 ||A_f||_1) sinh(2 ||A_g - A_f||_1)
* OSC:          |U| exp(||A_f||_osc) (exp(||A_f - A_g||_osc) - 1)
* PALES_ALPHA:  the smallest alpha with sup_{|x-z|>=alpha} |B_f - B_g| <= 1,
                which bounds rho from above

The first three formulas are asymmetric in (f, g); by default each is
evaluated in both orders and the minimum taken.  Every reported value is
capped at |U| (both means lie in U, so rho <= |U| trivially); the raw
formula value is kept alongside because the cap erases the rate information
the bounds carry.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Union

import numpy as np

from .errors import ArgumentError
from .generators import Generator, Interval
from .norms import NormEstimate, inf_abs_deriv, l1_norm, osc_norm, sup_b_diff, sup_norm

DERIV_HYPOTHESIS_FLOOR = 1e-10
SUP_INFLATION = 3.0          # grid sups underestimate; inflate by this many refinement errors
PALES_ALPHA_RTOL = 1e-4      # bisection tolerance, relative to |U|

CSV_HEADER = "bound_name,value,uncapped,hypotheses_ok,symmetrized"


@dataclass(frozen=True)
class BoundReport:
    """One named upper bound on rho, with hypothesis status and inputs."""

    bound_name: str
    value: float
    hypotheses_ok: bool
    symmetrized: bool
    uncapped: float
    details: Dict[str, Union[NormEstimate, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        det = {
            k: (v.to_dict() if isinstance(v, NormEstimate) else v)
            for k, v in sorted(self.details.items())
        }
        return {
            "bound_name": self.bound_name,
            "value": self.value,
            "uncapped": self.uncapped,
            "hypotheses_ok": self.hypotheses_ok,
            "symmetrized": self.symmetrized,
            "details": det,
        }

    def to_csv_row(self) -> str:
        return (
            f"{self.bound_name},{self.value!r},{self.uncapped!r},"
            f"{self.hypotheses_ok},{self.symmetrized}"
        )


def _check_domains(f: Generator, g: Generator, interval: Interval):
    for gen in (f, g):
        if not gen.domain.contains_interval(interval):
            raise ArgumentError("interval is not contained in a generator's domain")


def _finish(name: str, raws: List[float], hyp_ok: bool, symmetrized: bool,
            interval: Interval, details: dict) -> BoundReport:
    cap = interval.length()
    valid = [r for r in raws if math.isfinite(r)]
    if hyp_ok and valid:
        uncapped = min(valid)
        value = min(uncapped, cap)
    else:
        uncapped = math.inf
        value = cap
        hyp_ok = False
    return BoundReport(name, value, hyp_ok, symmetrized, uncapped, details)


def bound_cargo_shisha(f: Generator, g: Generator, interval: Interval,
                       symmetrize: bool = True) -> BoundReport:
    """2 ||f - g||_inf / inf |f'|, optionally minimized over both orderings."""
    _check_domains(f, g, interval)
    sup_fg = sup_norm(lambda x: f(x, check=False) - g(x, check=False), interval)
    inf_f = inf_abs_deriv(f, interval)
    details: dict = {"sup_diff": sup_fg, "inf_deriv_f": inf_f}
    raws = []
    ok = False
    if inf_f.value > DERIV_HYPOTHESIS_FLOOR:
        raws.append(2.0 * sup_fg.value / inf_f.value)
        ok = True
    details["raw_fg"] = raws[0] if raws else math.inf
    if symmetrize:
        inf_g = inf_abs_deriv(g, interval)
        details["inf_deriv_g"] = inf_g
        if inf_g.value > DERIV_HYPOTHESIS_FLOOR:
            raw_gf = 2.0 * sup_fg.value / inf_g.value
            raws.append(raw_gf)
            details["raw_gf"] = raw_gf
            ok = True
        else:
            details["raw_gf"] = math.inf
    return _finish("CARGO_SHISHA", raws, ok, symmetrize, interval, details)


def _sinh_term(u: float, diff: float, scale: float) -> float:
    # scale * exp(2u) * sinh(2*diff), guarded against overflow
    try:
        return scale * math.exp(2.0 * u) * math.sinh(2.0 * diff)
    except OverflowError:
        return math.inf


def bound_l1(f: Generator, g: Generator, interval: Interval,
             symmetrize: bool = True) -> BoundReport:
    """|U| exp(2 ||A_f||_1) sinh(2 ||A_g - A_f||_1), min over orderings."""
    _check_domains(f, g, interval)
    inf_f = inf_abs_deriv(f, interval)
    inf_g = inf_abs_deriv(g, interval)
    ok = min(inf_f.value, inf_g.value) > DERIV_HYPOTHESIS_FLOOR
    details: dict = {"inf_deriv_f": inf_f, "inf_deriv_g": inf_g}
    raws: List[float] = []
    if ok:
        af = lambda x: f.arrow_pratt(x, check=False)
        ag = lambda x: g.arrow_pratt(x, check=False)
        l1_f = l1_norm(af, interval)
        l1_diff = l1_norm(lambda x: af(x) - ag(x), interval)
        raw_fg = _sinh_term(l1_f.value, l1_diff.value, interval.length())
        details.update({"l1_a_f": l1_f, "l1_a_diff": l1_diff, "raw_fg": raw_fg})
        raws.append(raw_fg)
        if symmetrize:
            l1_g = l1_norm(ag, interval)
            raw_gf = _sinh_term(l1_g.value, l1_diff.value, interval.length())
            details.update({"l1_a_g": l1_g, "raw_gf": raw_gf})
            raws.append(raw_gf)
    return _finish("L1_SINH", raws, ok, symmetrize, interval, details)


def _osc_term(u: float, diff: float, scale: float) -> float:
    try:
        return scale * math.exp(u) * math.expm1(diff)
    except OverflowError:
        return math.inf


def bound_osc(f: Generator, g: Generator, interval: Interval,
              symmetrize: bool = True) -> BoundReport:
    """|U| exp(||A_f||_osc) (exp(||A_f - A_g||_osc) - 1), min over orderings."""
    _check_domains(f, g, interval)
    inf_f = inf_abs_deriv(f, interval)
    inf_g = inf_abs_deriv(g, interval)
    ok = min(inf_f.value, inf_g.value) > DERIV_HYPOTHESIS_FLOOR
    details: dict = {"inf_deriv_f": inf_f, "inf_deriv_g": inf_g}
    raws: List[float] = []
    if ok:
        af = lambda x: f.arrow_pratt(x, check=False)
        ag = lambda x: g.arrow_pratt(x, check=False)
        osc_f = osc_norm(af, interval)
        osc_diff = osc_norm(lambda x: af(x) - ag(x), interval)
        raw_fg = _osc_term(osc_f.value, osc_diff.value, interval.length())
        details.update({"osc_a_f": osc_f, "osc_a_diff": osc_diff, "raw_fg": raw_fg})
        raws.append(raw_fg)
        if symmetrize:
            osc_g = osc_norm(ag, interval)
            raw_gf = _osc_term(osc_g.value, osc_diff.value, interval.length())
            details.update({"osc_a_g": osc_g, "raw_gf": raw_gf})
            raws.append(raw_gf)
    return _finish("OSC", raws, ok, symmetrize, interval, details)


def inflated_sup_b_diff(f: Generator, g: Generator, alpha: float,
                        interval: Interval) -> float:
    """Grid sup of |B_f - B_g| plus a 3x refinement-error safety margin.

    The margin compensates for grid sups being lower estimates: the strict
    comparison against 1 must hold for the true sup before anything can be
    concluded about rho.
    """
    est = sup_b_diff(f, g, alpha, interval)
    return est.value + SUP_INFLATION * est.refinement_error


def bound_pales(f: Generator, g: Generator, interval: Interval) -> BoundReport:
    """Smallest alpha with (inflated) sup of |B_f - B_g| over |x-z| >= alpha <= 1.

    Found by bisection on alpha, using that the restricted sup is
    non-increasing in alpha; returns the trivial |U| cap when even the
    loosest restriction keeps the sup above 1.
    """
    _check_domains(f, g, interval)
    length = interval.length()
    tol = PALES_ALPHA_RTOL * length
    details: dict = {"alpha_tolerance": tol, "sup_inflation": SUP_INFLATION}

    s_top = inflated_sup_b_diff(f, g, length, interval)
    details["inflated_sup_at_full_width"] = s_top
    if s_top > 1.0:
        return BoundReport("PALES_ALPHA", length, True, True, length, details)
    lo, hi = 0.0, length
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if inflated_sup_b_diff(f, g, mid, interval) <= 1.0:
            hi = mid
        else:
            lo = mid
    details["alpha_star"] = hi
    return BoundReport("PALES_ALPHA", hi, True, True, hi, details)


def _max_workers() -> int:
    env = os.environ.get("QAM_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def best_bound(f: Generator, g: Generator, interval: Interval,
               symmetrize: bool = True) -> List[BoundReport]:
    """All four bounds, sorted by capped value (ties by name).

    Never raises for hypothesis failures: those reports carry the trivial
    |U| cap and hypotheses_ok = False.  The four computations are
    independent; QAM_THREADS caps how many run concurrently.
    """
    tasks = [
        lambda: bound_cargo_shisha(f, g, interval, symmetrize),
        lambda: bound_l1(f, g, interval, symmetrize),
        lambda: bound_osc(f, g, interval, symmetrize),
        lambda: bound_pales(f, g, interval),
    ]
    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda t: t(), tasks))
    else:
        reports = [t() for t in tasks]
    return sorted(reports, key=lambda r: (r.value, r.bound_name))
