"""Command-line surface: means, operators, norms, bounds, rho searches, and
reproduction of the two reference generator families.

Exit codes: 0 success (all internal assertions passing), 1 usage/parse error,
2 soundness violation.  Reports are deterministic: identical invocations with
the same seed produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Tuple

from . import bounds as bounds_mod
from . import generators as gen_mod
from . import means as means_mod
from . import norms as norms_mod
from . import search as search_mod
from .errors import QamError, ArgumentError

CSV_VERSION = "# qam-csv v1"

_EXAMPLE_CSV_COLUMNS = [
    "n", "sup_diff", "cs_bound", "l1_a", "osc_a",
    "osc_bound", "l1_bound", "rho_lb",
]


def parse_real(token: str) -> float:
    """Parse a real number; accepts pi multiples like '2pi', 'pi', '-0.5pi'
    so period endpoints survive without precision loss."""
    t = token.strip()
    if t.endswith("pi"):
        coef = t[:-2]
        if coef in ("", "+"):
            return math.pi
        if coef == "-":
            return -math.pi
        try:
            return float(coef) * math.pi
        except ValueError as e:
            raise ArgumentError(f"cannot parse number {token!r}") from e
    try:
        return float(t)
    except ValueError as e:
        raise ArgumentError(f"cannot parse number {token!r}") from e


def parse_reals(text: str) -> List[float]:
    return [parse_real(t) for t in text.split(",") if t.strip() != ""]


def parse_interval(text: str) -> gen_mod.Interval:
    vals = parse_reals(text)
    if len(vals) != 2:
        raise ArgumentError(f"interval must be 'lo,hi', got {text!r}")
    return gen_mod.Interval(vals[0], vals[1])


def parse_n_range(text: str) -> range:
    lo_s, sep, hi_s = text.partition("..")
    if not sep:
        raise ArgumentError(f"range must be 'a..b', got {text!r}")
    try:
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as e:
        raise ArgumentError(f"range must be 'a..b' with integers, got {text!r}") from e
    if lo > hi:
        raise ArgumentError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _sample_from_args(args) -> means_mod.WeightedSample:
    if args.a is None:
        raise ArgumentError("--a is required")
    pts = parse_reals(args.a)
    wts = parse_reals(args.w) if args.w else None
    return means_mod.WeightedSample(pts, wts)


# -- commands ----------------------------------------------------------------


def cmd_mean(args) -> Tuple[int, dict]:
    interval = parse_interval(args.interval)
    gen = gen_mod.parse_generator(args.gen, interval)
    sample = _sample_from_args(args)
    value = means_mod.qa_mean(gen, sample)
    return 0, {
        "command": "mean",
        "generator": gen.spec_string(),
        "interval": [interval.lo, interval.hi],
        "points": [float(v) for v in sample.points],
        "weights": [float(v) for v in sample.weights],
        "mean": value,
    }


def cmd_op(args) -> Tuple[int, dict]:
    from . import operators as op_mod

    interval = parse_interval(args.interval)
    gen = gen_mod.parse_generator(args.gen, interval)
    if args.point is None and args.at is None:
        raise ArgumentError("op needs --point x,y,z and/or --at x")
    out = {
        "command": "op",
        "generator": gen.spec_string(),
        "interval": [interval.lo, interval.hi],
    }
    if args.point is not None:
        coords = parse_reals(args.point)
        if len(coords) != 3:
            raise ArgumentError(f"--point must be 'x,y,z', got {args.point!r}")
        p = op_mod.DeltaPoint(*coords)
        out["b"] = {"point": coords, "value": op_mod.pales_b(gen, p)}
    if args.at is not None:
        x = parse_real(args.at)
        out["arrow_pratt"] = {"x": x, "value": op_mod.arrow_pratt(gen, x)}
    return 0, out


_NORM_KINDS = ("L1", "SUP", "OSC", "INF_DERIV", "SUP_B_DIFF")


def cmd_norm(args) -> Tuple[int, dict]:
    interval = parse_interval(args.interval)
    kind = args.kind.upper()
    if kind not in _NORM_KINDS:
        raise ArgumentError(f"--kind must be one of {_NORM_KINDS}")
    f = gen_mod.parse_generator(args.gen, interval)
    g = gen_mod.parse_generator(args.gen2, interval) if args.gen2 else None
    if kind == "SUP_B_DIFF":
        if g is None or args.alpha is None:
            raise ArgumentError("SUP_B_DIFF needs --gen2 and --alpha")
        est = norms_mod.sup_b_diff(f, g, parse_real(args.alpha), interval)
    elif kind == "INF_DERIV":
        est = norms_mod.inf_abs_deriv(f, interval)
    elif kind == "SUP":
        if g is None:
            raise ArgumentError("SUP compares two generators; pass --gen2")
        est = norms_mod.sup_norm(
            lambda x: f(x, check=False) - g(x, check=False), interval)
    else:  # L1 / OSC act on f''/f' (or the difference of the two ratios)
        if g is None:
            h = lambda x: f.arrow_pratt(x, check=False)
        else:
            h = lambda x: f.arrow_pratt(x, check=False) - g.arrow_pratt(x, check=False)
        est = (norms_mod.l1_norm if kind == "L1" else norms_mod.osc_norm)(h, interval)
    return 0, {
        "command": "norm",
        "kind": kind,
        "generator": f.spec_string(),
        "generator2": g.spec_string() if g else None,
        "interval": [interval.lo, interval.hi],
        "estimate": est.to_dict(),
    }


SOUNDNESS_TOL = 1e-6


def cmd_bounds(args) -> Tuple[int, dict]:
    interval = parse_interval(args.interval)
    f = gen_mod.parse_generator(args.gen, interval)
    if not args.gen2:
        raise ArgumentError("bounds needs --gen2")
    g = gen_mod.parse_generator(args.gen2, interval)
    reports = bounds_mod.best_bound(f, g, interval, symmetrize=not args.no_symmetrize)
    cfg = search_mod.SearchConfig(seed=args.seed)
    rho = search_mod.rho_lower_bound(f, g, interval, cfg)
    tightest = min(r.value for r in reports)
    sound = rho.value <= tightest + SOUNDNESS_TOL
    payload = {
        "command": "bounds",
        "generator_f": f.spec_string(),
        "generator_g": g.spec_string(),
        "interval": [interval.lo, interval.hi],
        "bounds": [r.to_dict() for r in reports],
        "rho_lower_bound": rho.to_dict(),
        "sound": sound,
    }
    return (0 if sound else 2), payload


def cmd_rho(args) -> Tuple[int, dict]:
    interval = parse_interval(args.interval)
    f = gen_mod.parse_generator(args.gen, interval)
    if not args.gen2:
        raise ArgumentError("rho needs --gen2")
    g = gen_mod.parse_generator(args.gen2, interval)
    n_points = tuple(int(v) for v in parse_reals(args.n_points)) if args.n_points else (2, 3)
    cfg = search_mod.SearchConfig(
        n_points=n_points,
        grid_per_axis=args.grid,
        refine_rounds=args.rounds,
        seed=args.seed,
    )
    rho = search_mod.rho_lower_bound(f, g, interval, cfg)
    return 0, {
        "command": "rho",
        "generator_f": f.spec_string(),
        "generator_g": g.spec_string(),
        "interval": [interval.lo, interval.hi],
        "config": {
            "n_points": list(cfg.n_points),
            "grid_per_axis": cfg.grid_per_axis,
            "refine_rounds": cfg.refine_rounds,
            "seed": cfg.seed,
        },
        "rho_lower_bound": rho.to_dict(),
    }


def _example_row(n: int, interval: gen_mod.Interval, seed: int) -> dict:
    f = gen_mod.identity(interval)
    g = gen_mod.sine_perturbed(n, interval)
    sup_diff = norms_mod.sup_norm(
        lambda x: g(x, check=False) - f(x, check=False), interval)
    cs = bounds_mod.bound_cargo_shisha(f, g, interval)
    l1b = bounds_mod.bound_l1(f, g, interval)
    oscb = bounds_mod.bound_osc(f, g, interval)
    l1_a = norms_mod.l1_norm(lambda x: g.arrow_pratt(x, check=False), interval)
    osc_a = norms_mod.osc_norm(lambda x: g.arrow_pratt(x, check=False), interval)
    cfg = search_mod.SearchConfig(n_points=(2,), grid_per_axis=17,
                                  refine_rounds=2, seed=seed)
    rho = search_mod.rho_lower_bound(f, g, interval, cfg)
    return {
        "n": n,
        "sup_diff": sup_diff.value,
        "cs_bound": cs.value,
        "l1_a": l1_a.value,
        "osc_a": osc_a.value,
        "osc_bound": oscb.uncapped,
        "osc_bound_capped": oscb.value,
        "l1_bound": l1b.uncapped,
        "l1_bound_capped": l1b.value,
        "rho_lb": rho.value,
    }


def _check_example_rows(which: int, rows: List[dict]) -> List[str]:
    violations = []
    for row in rows:
        n = row["n"]
        if which == 1:
            checks = [
                ("sup_diff == 1/n^2 to 1e-10",
                 abs(row["sup_diff"] - n ** -2) <= 1e-10),
                ("cs_bound == 2/n^2 to 1e-9",
                 abs(row["cs_bound"] - 2.0 * n ** -2) <= 1e-9),
                ("l1_a == 2n ln((n+1)/(n-1)) to 1e-6 rel",
                 abs(row["l1_a"] - 2 * n * math.log((n + 1) / (n - 1)))
                 <= 1e-6 * (2 * n * math.log((n + 1) / (n - 1)))),
                ("rho_lb <= 2/n^2 + 1e-9",
                 row["rho_lb"] <= 2.0 * n ** -2 + 1e-9),
            ]
        else:
            osc_expect = math.log((n + 1) / (n - 1))
            bound_expect = 4 * math.pi / (n - 1)
            checks = [
                ("osc_a == ln((n+1)/(n-1)) to 1e-8",
                 abs(row["osc_a"] - osc_expect) <= 1e-8),
                ("osc_bound == 4pi/(n-1) to 1e-6 rel",
                 abs(row["osc_bound"] - bound_expect) <= 1e-6 * bound_expect),
                ("cs_bound < osc_bound < l1_bound",
                 row["cs_bound"] < row["osc_bound"] < row["l1_bound"]),
            ]
        for name, ok in checks:
            if not ok:
                violations.append(f"n={n}: {name}")
    return violations


def cmd_example(args) -> Tuple[int, dict]:
    which = args.which
    n_range = parse_n_range(args.n_range)
    if n_range.start < 2 or n_range.stop - 1 > 64:
        raise ArgumentError("n range must stay within 2..64")
    interval = gen_mod.Interval(0.0, 2.0 * math.pi)
    rows = [_example_row(n, interval, args.seed) for n in n_range]
    violations = _check_example_rows(which, rows)
    payload = {
        "command": "example",
        "which": which,
        "interval": [interval.lo, interval.hi],
        "rows": rows,
        "violations": violations,
    }
    return (0 if not violations else 2), payload


def cmd_converge(args) -> Tuple[int, dict]:
    interval = parse_interval(args.interval)
    f = gen_mod.parse_generator(args.gen, interval)
    if "{n}" not in args.seq_gen:
        raise ArgumentError("--seq-gen must contain the placeholder {n}, e.g. 'sine:{n}'")
    n_range = parse_n_range(args.n_range)
    seq = [gen_mod.parse_generator(args.seq_gen.replace("{n}", str(n)), interval)
           for n in n_range]
    rows = search_mod.convergence_diagnostic(seq, f, interval, grid=args.grid)
    return 0, {
        "command": "converge",
        "generator": f.spec_string(),
        "interval": [interval.lo, interval.hi],
        "grid": args.grid,
        "rows": [
            {"n": n, **row.to_dict()} for n, row in zip(n_range, rows)
        ],
    }


# -- output ------------------------------------------------------------------


def _to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_escape(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return '"' + ";".join(repr(float(x)) for x in v) + '"'
    return str(v)


def _to_csv(payload: dict) -> str:
    lines = [CSV_VERSION]
    cmd = payload["command"]
    if cmd == "bounds":
        lines.append(bounds_mod.CSV_HEADER)
        for r in payload["bounds"]:
            lines.append(
                f"{r['bound_name']},{r['value']!r},{r['uncapped']!r},"
                f"{r['hypotheses_ok']},{r['symmetrized']}"
            )
        rho = payload["rho_lower_bound"]
        lines.append(
            f"RHO_LOWER_BOUND,{rho['value']!r},{rho['value']!r},True,True"
        )
    elif cmd == "example":
        lines.append(",".join(_EXAMPLE_CSV_COLUMNS))
        for row in payload["rows"]:
            lines.append(",".join(_csv_escape(row[c]) for c in _EXAMPLE_CSV_COLUMNS))
    elif cmd == "converge":
        lines.append("n,generator,b_deviation,rho_lower_bound")
        for row in payload["rows"]:
            lines.append(
                f"{row['n']},{row['generator']},{row['b_deviation']!r},"
                f"{row['rho_lower_bound']['value']!r}"
            )
    elif cmd == "norm":
        lines.append("kind,value,refinement_error,grid_size")
        e = payload["estimate"]
        lines.append(
            f"{payload['kind']},{e['value']!r},{e['refinement_error']!r},{e['grid_size']}"
        )
    elif cmd == "rho":
        lines.append("value,evaluations,witness_points,witness_weights")
        rho = payload["rho_lower_bound"]
        lines.append(
            f"{rho['value']!r},{rho['evaluations']},"
            f"{_csv_escape(rho['witness_points'])},{_csv_escape(rho['witness_weights'])}"
        )
    elif cmd == "mean":
        lines.append("generator,interval_lo,interval_hi,mean")
        lines.append(
            f"{payload['generator']},{payload['interval'][0]!r},"
            f"{payload['interval'][1]!r},{payload['mean']!r}"
        )
    else:  # op and anything row-less: quantity,value pairs
        lines.append("quantity,value")
        if "b" in payload:
            lines.append(f"pales_b,{payload['b']['value']!r}")
        if "arrow_pratt" in payload:
            lines.append(f"arrow_pratt,{payload['arrow_pratt']['value']!r}")
    return "\n".join(lines) + "\n"


def _plain_lines(payload: dict, indent: str = "") -> List[str]:
    lines = []
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_plain_lines(val, indent + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for i, item in enumerate(val):
                lines.append(f"{indent}{key}[{i}]:")
                lines.extend(_plain_lines(item, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {val}")
    return lines


def _to_plain(payload: dict) -> str:
    return "\n".join(_plain_lines(payload)) + "\n"


def _emit(payload: dict, fmt: str, out: Optional[str]):
    if fmt == "json":
        text = _to_json(payload)
    elif fmt == "csv":
        text = _to_csv(payload)
    else:
        text = _to_plain(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p: argparse.ArgumentParser, interval_required: bool = True):
    p.add_argument("--interval", required=interval_required,
                   help="working interval 'lo,hi'; accepts pi tokens like 0,2pi")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qam", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mean", parents=[], help="quasi-arithmetic mean of a sample")
    p.add_argument("--gen", required=True)
    p.add_argument("--a", required=True, help="points '1,3,5'")
    p.add_argument("--w", default=None, help="weights; uniform when omitted")
    _add_common(p)
    p.set_defaults(fn=cmd_mean)

    p = sub.add_parser("op", help="evaluate the difference-ratio and f''/f' operators")
    p.add_argument("--gen", required=True)
    p.add_argument("--point", default=None, help="triple 'x,y,z' for the difference ratio")
    p.add_argument("--at", default=None, help="point for f''/f'")
    _add_common(p)
    p.set_defaults(fn=cmd_op)

    p = sub.add_parser("norm", help="compute one of the norm estimates")
    p.add_argument("--kind", required=True, help="|".join(_NORM_KINDS))
    p.add_argument("--gen", required=True)
    p.add_argument("--gen2", default=None)
    p.add_argument("--alpha", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("bounds", help="all four distance bounds plus the searched lower bound")
    p.add_argument("--gen", required=True)
    p.add_argument("--gen2", required=True)
    p.add_argument("--no-symmetrize", action="store_true",
                   help="evaluate asymmetric formulas in the given order only")
    _add_common(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("rho", help="worst-case search for the mean distance")
    p.add_argument("--gen", required=True)
    p.add_argument("--gen2", required=True)
    p.add_argument("--grid", type=int, default=33)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--n-points", default=None, help="sample sizes, e.g. '2,3'")
    _add_common(p)
    p.set_defaults(fn=cmd_rho)

    p = sub.add_parser("example", help="reproduce the sine-perturbed family reports")
    p.add_argument("which", type=int, choices=(1, 2))
    p.add_argument("--n-range", default="2..16")
    _add_common(p, interval_required=False)
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("converge", help="sampled convergence diagnostic for a generator family")
    p.add_argument("--gen", required=True)
    p.add_argument("--seq-gen", required=True, help="templated spec, e.g. 'sine:{n}'")
    p.add_argument("--n-range", required=True)
    p.add_argument("--grid", type=int, default=33)
    _add_common(p)
    p.set_defaults(fn=cmd_converge)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        code, payload = args.fn(args)
    except QamError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    _emit(payload, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
