"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 excluded case (ell outside
[1, dim W - 1]), 4 regularity bound rejected, 5 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path
from typing import Sequence

from weylith import __version__, cache
from weylith.algebra.sheaves import parse_sheaf
from weylith.errors import (
    CorruptedSegmentError,
    ExcludedCaseError,
    InvalidInputError,
    InvariantViolation,
    RegularityError,
    WeylithError,
    WindowTooNarrowError,
)
from weylith.kernel.field import field_from_name, scalar_to_str
from weylith.kernel.wedge import ext_str

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_EXCLUDED = 3
EXIT_REGULARITY = 4
EXIT_INVARIANT = 5

OUTPUT_FORMAT = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must be 'lo,hi', got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _coeffs(text: str) -> list[str]:
    parts = [x.strip() for x in text.split(",")]
    if not all(parts):
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default="QQ", help="QQ (default) or GF(p) / a prime p")
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-readable text instead of JSON")
    common.add_argument("--cache-dir", help=f"segment cache directory (env {cache.ENV_VAR}, default {cache.DEFAULT_DIR})")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the segment cache")
    common.add_argument("--seed", type=int, default=0, help="root seed for randomized probes")

    sheaf = _Parser(add_help=False)
    sheaf.add_argument("--sheaf", required=True,
                       help="twist:D, omega:A, veronese:D[,E], quotient:F1;F2, or a JSON object")
    sheaf.add_argument("--dimW", type=int, help="dimension of W (not needed for veronese)")
    sheaf.add_argument("--regularity", type=int, help="regularity bound r (required for quotient/presentation)")
    sheaf.add_argument("--dsupp", type=int, help="override the support dimension")

    parser = _Parser(prog="weylith", description="Tate resolutions, Weyman complexes and resultants.")
    parser.add_argument("--version", action="version", version=f"weylith {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("cohomology", "cohomology table h^i(F(k))"), ("tate", "window of the Tate resolution")):
        p = sub.add_parser(name, parents=[common, sheaf], help=helptext)
        p.add_argument("--window", type=_window, help="Tate positions 'p_lo,p_hi' (default -dimW,dimW)")
    for name, helptext in (("weyman", "the ell-th Weyman complex"), ("verify", "verification report of the Weyman complex")):
        p = sub.add_parser(name, parents=[common, sheaf], help=helptext)
        p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("resultant", parents=[common], help="resultant of two binary forms via the Veronese complex")
    p.add_argument("--veronese", type=int, required=True, metavar="D", help="degree of the binary forms")
    p.add_argument("--f", type=_coeffs, help="coefficients of f, low to high in x")
    p.add_argument("--g", type=_coeffs, help="coefficients of g, low to high in x")
    p.add_argument("--probe", type=int, metavar="TRIALS", help="run the vanishing probe instead")

    p = sub.add_parser("cache-gc", help="trim the segment cache to a size cap")
    p.add_argument("--cache-dir")
    p.add_argument("--max-bytes", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--pretty", action="store_true")
    return parser


def _spec(args):
    dimW = args.dimW
    spec = parse_sheaf(args.sheaf, dimW, args.regularity)
    if args.dsupp is not None:
        spec = type(spec).from_dict({**spec.to_dict(), "dsupp": args.dsupp})
    return spec


def _cache_dir(args) -> Path | None:
    if getattr(args, "no_cache", False):
        return None
    return cache.resolve_cache_dir(args.cache_dir)


# -- commands ----------------------------------------------------------------


def cmd_tate(args, table_only: bool):
    from weylith.tate import cohomology_table, segment_to_json, tate_segment

    spec = _spec(args)
    field = field_from_name(args.field)
    lo, hi = args.window or (-spec.dimW, spec.dimW)
    seg = tate_segment(spec, lo, hi, field, cache_dir=_cache_dir(args))
    if table_only:
        table = cohomology_table(seg)
        doc = {"command": "cohomology", "spec": spec.to_dict(), "table": table.to_json()}
        return doc, lambda: _pretty_table(table)
    doc = {"command": "tate", "segment": segment_to_json(seg)}
    return doc, lambda: _pretty_segment(seg)


def cmd_weyman(args, report_only: bool):
    from weylith.weyman import check_ell, verify_complex, weyman_complex

    spec = _spec(args)
    check_ell(args.ell, spec.dimW)
    field = field_from_name(args.field)
    wc = weyman_complex(spec, args.ell, field, cache_dir=_cache_dir(args))
    rep = verify_complex(wc)
    if report_only:
        doc = {"command": "verify", "ell": args.ell, "spec": spec.to_dict(), "report": rep.to_dict()}
        if not rep.ok:
            raise _Emit(doc, EXIT_INVARIANT)
        return doc, lambda: _pretty_report(rep)
    if not rep.ok:
        raise InvariantViolation("complex failed verification: " + "; ".join(rep.failures))
    doc = {"command": "weyman", "complex": wc.to_json()}
    return doc, lambda: _pretty_complex(wc)


def cmd_resultant(args):
    from weylith.resultant import resultant_pipeline, resultant_vanishing_probe, sylvester_resultant

    d = args.veronese
    field = field_from_name(args.field)
    if d < 2:
        raise ExcludedCaseError(f"degree {d} gives dim W = {d + 1}; ell = 2 needs dim W >= 3")
    if args.probe is not None:
        rep = resultant_vanishing_probe(d, args.probe, field, args.seed)
        doc = {"command": "resultant-probe", "report": rep.to_dict()}
        if not rep.passed:
            raise _Emit(doc, EXIT_INVARIANT)
        return doc, lambda: f"d={d} over {field.name}: {rep.trials} trials, {rep.singular} singular, 0 disagreements"
    if args.f is None or args.g is None:
        raise InvalidInputError("resultant needs --f and --g (or --probe)")
    if len(args.f) != d + 1 or len(args.g) != d + 1:
        raise InvalidInputError(f"binary forms of degree {d} need {d + 1} coefficients each")
    try:
        f = [field(x) for x in args.f]
        g = [field(x) for x in args.g]
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad coefficient: {exc}") from exc
    pipe = resultant_pipeline(d)
    value = pipe.value(f, g, field)
    oracle = sylvester_resultant(f, g, field)
    if value != oracle:
        raise InvariantViolation(f"complex gives {value}, Sylvester oracle gives {oracle}")
    doc = {
        "command": "resultant",
        "d": d,
        "field": field.name,
        "f": [scalar_to_str(x) for x in f],
        "g": [scalar_to_str(x) for x in g],
        "resultant": scalar_to_str(value),
        "sylvester": scalar_to_str(oracle),
        "determinant_of_complex": scalar_to_str(pipe.det.evaluate([f, g], field)),
        "unit": str(pipe.unit),
    }
    return doc, lambda: f"Res = {scalar_to_str(value)}  (Sylvester {scalar_to_str(oracle)}, unit {pipe.unit})"


def cmd_cache_gc(args):
    rep = cache.cache_gc(cache.resolve_cache_dir(args.cache_dir), args.max_bytes)
    doc = {"command": "cache-gc", "report": rep.to_dict()}
    return doc, lambda: f"removed {len(rep.removed)} entries, freed {rep.freed_bytes} bytes"


# -- pretty printers -----------------------------------------------------------


def _pretty_table(table) -> str:
    ks = sorted({k for i in range(table.dimW) for k in table.twists(i)})
    lines = ["i\\k " + " ".join(f"{k:>5}" for k in ks)]
    for i in reversed(range(table.dimW)):
        cells = []
        for k in ks:
            cells.append(f"{table.h(i, k):>5}" if table.p_lo <= i + k <= table.p_hi else f"{'.':>5}")
        lines.append(f"{i:>3} " + " ".join(cells))
    return "\n".join(lines)


def _pretty_segment(seg) -> str:
    lines = []
    for p in range(seg.p_lo, seg.p_hi + 1):
        terms = " + ".join(f"Ê({j})^{m}" for j, m in seg.summands(p)) or "0"
        lines.append(f"T^{p} = {terms}")
        if p in seg.maps:
            for a, b, mat in seg.maps[p].blocks():
                if any(e for row in mat for e in row):
                    lines.append(f"  d^{p} block Ê({a}) -> Ê({b}):")
                    for row in mat:
                        lines.append("    [" + ", ".join(ext_str(e) for e in row) + "]")
    return "\n".join(lines)


def _pretty_complex(wc) -> str:
    lines = [f"ell = {wc.ell}, support dimension {wc.dsupp}"]
    for p in sorted(wc.terms):
        t = wc.terms[p]
        if t.rank:
            parts = [(f"A(-{j})" if j else "A") + f"^{comb(wc.ell, j) * m}" for j, m in t.summands()]
            lines.append(f"W^{p} = " + " + ".join(parts))
    for p in sorted(wc.maps):
        m = wc.maps[p]
        if m.source.rank and m.target.rank:
            lines.append(f"d^{p}:")
            for row in m.rows:
                lines.append("  [" + ", ".join(str(x) for x in row) + "]")
    return "\n".join(lines)


def _pretty_report(rep) -> str:
    lines = [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in sorted(rep.checks.items())]
    return "\n".join(lines + rep.failures)


# -- entry point ---------------------------------------------------------------


class _Emit(Exception):
    """Write a document and exit with a nonzero code."""

    def __init__(self, doc: dict, code: int):
        super().__init__(code)
        self.doc = doc
        self.code = code


def _write(doc: dict, args, pretty_fn=None) -> None:
    doc = {"format": OUTPUT_FORMAT, **doc}
    if getattr(args, "pretty", False) and pretty_fn is not None:
        text = pretty_fn() + "\n"
    else:
        text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("cohomology", "tate"):
            doc, pretty = cmd_tate(args, args.command == "cohomology")
        elif args.command in ("weyman", "verify"):
            doc, pretty = cmd_weyman(args, args.command == "verify")
        elif args.command == "resultant":
            doc, pretty = cmd_resultant(args)
        else:
            doc, pretty = cmd_cache_gc(args)
    except _Emit as emit:
        _write(emit.doc, args)
        return emit.code
    except ExcludedCaseError as exc:
        return _fail(EXIT_EXCLUDED, f"excluded case: {exc}")
    except RegularityError as exc:
        return _fail(EXIT_REGULARITY, f"regularity check failed at p={exc.degree}: {exc}")
    except (InvariantViolation, CorruptedSegmentError) as exc:
        return _fail(EXIT_INVARIANT, f"invariant violation: {exc}")
    except (InvalidInputError, WindowTooNarrowError) as exc:
        return _fail(EXIT_PARSE, f"invalid input: {exc}")
    except (FileNotFoundError, PermissionError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    except WeylithError as exc:
        return _fail(EXIT_INVARIANT, f"internal error: {exc}")
    _write(doc, args, pretty)
    return EXIT_OK


def _fail(code: int, message: str) -> int:
    sys.stderr.write(f"weylith: {message}\n")
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
