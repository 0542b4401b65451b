"""Command line front end: ``ab-expand <subcommand> --a A --b B ...``.

Reports are JSON by default. Exact rationals are always written as "p/q"
strings. Exit codes: 0 success (a negative verdict is still a success),
1 resource cap hit, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from typing import Any, Callable, Optional

from . import __version__
from .core import (
    CapExceeded,
    EventuallyPeriodicWord,
    as_rational,
    cylinder,
    default_cap,
    pi_prefix,
    shift_values,
    validate_params,
)
from .dimension import (
    DEFAULT_SCALES,
    DigitSet,
    box_count_dimension,
    default_depth,
    detect_exact_overlaps,
    hausdorff_formula,
    is_commensurable,
    similarity_dimension,
)
from .dynamics import DEFAULT_DENOM, greedy_expand, invariant_density_histogram, overlap_hit_stats
from .multiplicity import (
    GoodRegion,
    check_unique,
    enumerate_prefixes,
    search_unique_periodic,
    verify_language_bounds,
)

MAX_LISTED_FAILURES = 50


def rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _word_str(w) -> str:
    return ",".join(map(str, w))


class Report:
    def __init__(self, inputs: dict, result: dict, rows: Optional[tuple[list, list]] = None):
        self.inputs = inputs
        self.result = result
        self.rows = rows  # (header, rows) for --format csv


# Subcommands ----------------------------------------------------------------

def cmd_expand(p, args) -> Report:
    x = as_rational(args.x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0,1]")
    digits = greedy_expand(p, x, args.depth)
    cyl = cylinder(p, digits)
    result = {
        "digits": list(digits),
        "cylinder": [rat(cyl.lo), rat(cyl.hi)],
        "width": rat(cyl.width),
        "pi_prefix": rat(pi_prefix(p, digits)),
    }
    rows = (["index", "digit"], [[i + 1, d] for i, d in enumerate(digits)])
    return Report({"x": rat(x), "depth": args.depth}, result, rows)


def cmd_count(p, args) -> Report:
    x = as_rational(args.x)
    pc = enumerate_prefixes(p, x, args.depth, cap=args.cap, keep_words=args.words)
    result: dict[str, Any] = {"counts": list(pc.counts)}
    if pc.words is not None:
        result["words"] = [list(w) for w in pc.words]
    rows = (["depth", "count"], [[n, c] for n, c in enumerate(pc.counts)])
    return Report({"x": rat(x), "depth": args.depth, "words": args.words}, result, rows)


def cmd_unique(p, args) -> Report:
    w = EventuallyPeriodicWord.parse(args.word)
    v = check_unique(p, w)
    vals = shift_values(p, w)
    good = GoodRegion(p)
    result = {
        "unique": v.unique,
        "value": rat(v.value),
        "witness_shift": v.witness_shift,
        "witness_value": None if v.witness_value is None else rat(v.witness_value),
        "shift_values": [rat(y) for y in vals],
    }
    rows = (["shift", "value", "in_good_region"], [[k, rat(y), y in good] for k, y in enumerate(vals)])
    return Report({"word": str(w)}, result, rows)


def cmd_search_unique(p, args) -> Report:
    found = search_unique_periodic(p, args.max_period, cap=args.cap)
    items = [{"word": str(w), "value": rat(x)} for w, x in found]
    rows = (["word", "value"], [[d["word"], d["value"]] for d in items])
    return Report({"max_period": args.max_period}, {"count": len(items), "words": items}, rows)


def cmd_language(p, args) -> Report:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = verify_language_bounds(p, args.depth, cap=args.cap)
    info = rep.info
    fails = [
        {"word": str(w), "witness_shift": v.witness_shift, "witness_value": rat(v.witness_value)}
        for w, v in rep.failures
    ]
    result = {
        "l": info.l,
        "r": info.r,
        "countable_condition": info.countable_condition,
        "uncountable_condition": info.uncountable_condition,
        "max_start_zero": rat(rep.max_start_zero),
        "min_start_l": rat(rep.min_start_l),
        "max_below_inv_b": rep.max_below_inv_b,
        "min_above_inv_a": rep.min_above_inv_a,
        "checked": rep.checked,
        "failure_count": len(fails),
        "failures": fails[:MAX_LISTED_FAILURES],
        "all_unique": rep.all_unique,
        "warnings": [str(w.message) for w in caught],
    }
    rows = (["word", "witness_shift", "witness_value"],
            [[f["word"], f["witness_shift"], f["witness_value"]] for f in fails])
    return Report({"depth": args.depth}, result, rows)


def _scales(text: Optional[str]) -> tuple[int, ...]:
    if not text:
        return DEFAULT_SCALES
    if ":" in text:
        lo, hi = (int(t) for t in text.split(":"))
        return tuple(range(lo, hi + 1))
    return tuple(int(t) for t in text.split(","))


def _regression(reg) -> Optional[dict]:
    if reg is None:
        return None
    return {"slope": reg.slope, "intercept": reg.intercept, "r2": reg.r2,
            "points": [list(pt) for pt in reg.points]}


def cmd_dimension(p, args) -> Report:
    D = DigitSet.of(p, _digits(args.digits))
    scales = _scales(args.scales)
    depth = args.depth if args.depth is not None else default_depth(p, scales)
    if args.method == "formula":
        r = hausdorff_formula(p, D, tol=args.tol, depth=depth, scales=scales)
    elif args.method == "similarity":
        s = similarity_dimension(p, D, tol=args.tol)
        ratios = [1 / p.a if j == 0 else 1 / p.b for j in D]
        r = {"case": "similarity", "s": s, "value": min(s, 1.0),
             "residual": sum(t**s for t in ratios) - 1.0}
    else:
        r = box_count_dimension(p, D, depth, scales, cap=args.cap)
    if isinstance(r, dict):
        result = r
    else:
        result = {"case": r.case, "value": r.value, "s": r.s, "residual": r.residual,
                  "estimate": r.is_estimate, "regression": _regression(r.regression)}
    pts = result.get("regression") or {}
    rows = (["scale_exponent", "boxes_occupied"], pts.get("points", []))
    inputs = {"digits": list(D), "method": args.method, "tol": args.tol}
    if args.method != "similarity":
        inputs.update(depth=depth, scales=list(scales))
    return Report(inputs, result, rows)


def cmd_overlaps(p, args) -> Report:
    D = DigitSet.of(p, _digits(args.digits))
    pairs = detect_exact_overlaps(p, D, args.depth, cap=args.cap)
    comm = is_commensurable(p.a, p.b)
    result = {
        "commensurable": None if comm is None else list(comm),
        "pairs": [{"left": list(q.left), "right": list(q.right)} for q in pairs],
    }
    rows = (["left", "right"], [[_word_str(q.left), _word_str(q.right)] for q in pairs])
    return Report({"digits": list(D), "depth": args.depth}, result, rows)


def cmd_orbit_stats(p, args) -> Report:
    st = overlap_hit_stats(p, args.samples, args.steps, args.seed, args.denom)
    result = {
        "samples": st.samples,
        "steps": st.steps,
        "hits": st.hits,
        "hit_fraction": rat(st.hit_fraction),
        "first_hit_histogram": {str(k): v for k, v in sorted(st.first_hit_histogram.items())},
    }
    rows = (["step", "count"], [[k, v] for k, v in sorted(st.first_hit_histogram.items())])
    inputs = {"samples": args.samples, "steps": args.steps, "denom": args.denom}
    return Report(inputs, result, rows)


def cmd_density(p, args) -> Report:
    h = invariant_density_histogram(p, args.bins, args.samples, args.steps, args.seed,
                                    args.denom, args.burn_in)
    masses = h.masses
    result = {"bins": h.bins, "counts": list(h.counts), "masses": [rat(m) for m in masses]}
    rows = (["bin", "lo", "hi", "count", "mass"],
            [[i, rat(lo), rat(hi), c, rat(m)]
             for i, ((lo, hi), c, m) in enumerate(zip(h.edges(), h.counts, masses))])
    inputs = {"bins": args.bins, "samples": args.samples, "steps": args.steps,
              "denom": args.denom, "burn_in": args.burn_in}
    return Report(inputs, result, rows)


# Parsing --------------------------------------------------------------------

def _digits(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ValueError(f"bad digit list {text!r}") from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ab-expand",
        description="Expansions of numbers in [0,1] with respect to two integer bases 1 < a < b.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=int, required=True, help="blow-up base a (> 1)")
    common.add_argument("--b", type=int, required=True, help="main base b (> a)")
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json",
                        help="output format")
    common.add_argument("--seed", type=int, default=0, help="random seed (sampling commands)")
    common.add_argument("--cap", type=_positive, default=None,
                        help="node/word cap; defaults to $AB_EXPAND_MAX_NODES or 1000000")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_,
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    sp = add("expand", cmd_expand, "greedy digits, cylinder and partial value of x")
    sp.add_argument("--x", required=True, help="rational p/q in [0,1]")
    sp.add_argument("--depth", type=_positive, default=10, help="number of digits")

    sp = add("count", cmd_count, "count expansion prefixes of x at every depth")
    sp.add_argument("--x", required=True, help="rational p/q in [0,1]")
    sp.add_argument("--depth", type=int, default=20, help="maximum prefix length")
    sp.add_argument("--words", action="store_true", help="also list the words at the final depth")

    sp = add("unique", cmd_unique, "decide uniqueness of an eventually periodic expansion")
    sp.add_argument("--word", required=True, help='"pre|per" comma digit lists, e.g. "|0,1,2"')

    sp = add("search-unique", cmd_search_unique, "list purely periodic unique expansions")
    sp.add_argument("--max-period", type=_positive, default=4, help="largest period length")

    sp = add("language", cmd_language, "check the {0l, l0} block language bounds")
    sp.add_argument("--depth", type=int, default=20, help="max preperiod+period digits")

    sp = add("dimension", cmd_dimension, "dimension of the restricted-digit set")
    sp.add_argument("--digits", required=True, help="comma list of digits, e.g. 0,1")
    sp.add_argument("--method", choices=("formula", "similarity", "boxcount"), default="formula",
                    help="case split, similarity equation, or box counting")
    sp.add_argument("--depth", type=int, default=None,
                    help="cylinder depth for box counting (default: finer than the finest box)")
    sp.add_argument("--scales", default=None,
                    help="box exponents e (boxes 2^-e), 'lo:hi' or comma list; default 6:12")
    sp.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")

    sp = add("overlaps", cmd_overlaps, "exact overlaps and commensurability of a, b")
    sp.add_argument("--digits", required=True, help="comma list of digits")
    sp.add_argument("--depth", type=_positive, default=6, help="maximum word length")

    sp = add("orbit-stats", cmd_orbit_stats, "how often sampled G-orbits enter (1/b, 1/a)")
    sp.add_argument("--samples", type=_positive, default=10_000, help="sampled points")
    sp.add_argument("--steps", type=_positive, default=100, help="iterations of G per point")
    sp.add_argument("--denom", type=int, default=DEFAULT_DENOM, help="sample denominator")

    sp = add("density", cmd_density, "histogram of sampled G-orbits")
    sp.add_argument("--bins", type=int, default=10, help="equal cells of [0,1]")
    sp.add_argument("--samples", type=_positive, default=1000, help="sampled points")
    sp.add_argument("--steps", type=_positive, default=500, help="iterations of G per point")
    sp.add_argument("--denom", type=int, default=DEFAULT_DENOM, help="sample denominator")
    sp.add_argument("--burn-in", type=float, default=0.1, help="fraction of steps discarded")
    return parser


def _emit(report: Report, args, p, out) -> None:
    if args.format == "json":
        doc = {
            "params": {"a": p.a, "b": p.b},
            "inputs": report.inputs,
            "result": report.result,
            "provenance": {"version": __version__, "seed": args.seed},
        }
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.format == "csv":
        header, rows = report.rows or ([], [])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(f"{args.command} a={p.a} b={p.b}\n")
        for k, v in report.result.items():
            out.write(f"  {k}: {v}\n")


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is None:
        args.cap = default_cap()
    try:
        p = validate_params(args.a, args.b)
        report = args.func(p, args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.partial is not None and isinstance(exc.partial, tuple):
            print(f"partial counts: {list(exc.partial)}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args, p, out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
