"""Shared test fixtures: the enumerable generator catalog and small utilities."""

import numpy as np

import qameans as qm


def catalog(interval: qm.Interval, include_affine: bool = True):
    """Eleven catalog generators on one positive interval, name -> Generator."""
    gens = {
        "identity": qm.identity(interval),
        "power:0.5": qm.power(0.5, interval),
        "power:2": qm.power(2, interval),
        "power:3": qm.power(3, interval),
        "power:-1": qm.power(-1, interval),
        "log": qm.log(interval),
        "exp:1": qm.exp(1, interval),
        "exp:-0.5": qm.exp(-0.5, interval),
        "sine:2": qm.sine_perturbed(2, interval),
        "sine:5": qm.sine_perturbed(5, interval),
    }
    if include_affine:
        gens["affine:2,-1:log"] = qm.affine(2, -1, qm.log(interval))
    return gens


def separated_triples(rng, interval: qm.Interval, count: int, min_sep_frac: float = 1e-2):
    """Random (x, y, z) with |x-z| >= min_sep_frac * |U|, z kept in U."""
    lo, hi = interval.lo, interval.hi
    length = interval.length()
    sep = min_sep_frac * length
    x = rng.uniform(lo, hi, count)
    y = rng.uniform(lo, hi, count)
    z = rng.uniform(lo, hi, count)
    mid = 0.5 * (lo + hi)
    bad = np.abs(x - z) < sep
    z = np.where(bad, np.where(x < mid, hi - 0.25 * length, lo + 0.25 * length), z)
    return x, y, z


def random_weights(rng, n: int) -> np.ndarray:
    w = rng.dirichlet(np.ones(n))
    w = np.clip(w, 1e-9, None)
    return w / w.sum()
