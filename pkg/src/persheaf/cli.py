"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 engine
mismatch (the cross-checking modes treat any disagreement between two
routes to the same barcode as a hard failure).
"""

from __future__ import annotations

import argparse
import sys

from .bipersistence import check_commutative, grid
from .cohomology import cohomology_basis, persistent_cohomology
from .complexes import vietoris_rips
from .formats import (
    BarcodeReport,
    parse_complex,
    parse_diagram,
    parse_points,
    parse_sheaf,
    render_reports,
    serialize_json,
)
from .graded import NotFreeError, diagram_graded_barcode
from .labeled import LabeledFiltration, mixed_feature_barcodes, unicolored_pipeline
from .linalg import Field
from .persistence import barcodes_equal
from .sheaves import validate_diagram, validate_sheaf
from .typet import type_t_direct, type_t_graded

__all__ = ["main", "entry"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _create_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=int, default=None)
    common.add_argument(
        "--format", choices=("text", "json", "svg"), default="text"
    )
    common.add_argument("--closed-end", action="store_true")

    parser = _Parser(prog="persheaf")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common])
    p.add_argument("sheaf")

    p = sub.add_parser("cohomology", parents=[common])
    p.add_argument("complex")
    p.add_argument("sheaf")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("persist-a", parents=[common])
    p.add_argument("diagram")
    p.add_argument("--k", type=int, default=None)
    p.add_argument(
        "--engine", choices=("graded", "pointwise", "both"), default="both"
    )

    p = sub.add_parser("persist-t", parents=[common])
    p.add_argument("complex")
    p.add_argument("sheaf")
    p.add_argument("--k", type=int, default=None)
    p.add_argument(
        "--engine", choices=("direct", "graded", "both"), default="both"
    )

    p = sub.add_parser("bipersist", parents=[common])
    p.add_argument("complex")
    p.add_argument("diagram")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("labeled", parents=[common])
    p.add_argument("points")
    p.add_argument("--thresholds", required=True)
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--hom-n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("unicolored", parents=[common])
    p.add_argument("points")
    p.add_argument("--thresholds", required=True)
    p.add_argument("--k", type=int, default=None)

    return parser


def _check_field(args, complex_) -> list:
    if args.field is not None and args.field != complex_.field.p:
        return [
            f"--field {args.field} disagrees with the file's field "
            f"{complex_.field.p}"
        ]
    return []


def _no_svg(args):
    if args.format == "svg":
        raise _UsageError("svg output is not available for this command")


def _degrees(args, top: int) -> list:
    if args.k is not None:
        return [args.k]
    return list(range(top + 1))


def _finish_barcode(barcode, closed_end: bool, m: int):
    return barcode.closed(m) if closed_end else barcode


def _emit(reports, args) -> int:
    sys.stdout.write(render_reports(reports, args.format, single=args.k is not None))
    return 0


def _cmd_validate(args) -> int:
    _no_svg(args)
    sheaf = parse_sheaf(args.sheaf)
    problems = (
        _check_field(args, sheaf.complex)
        + sheaf.complex.validate()
        + validate_sheaf(sheaf)
    )
    if args.format == "json":
        sys.stdout.write(
            serialize_json({"ok": not problems, "problems": problems})
        )
    elif problems:
        sys.stdout.write("\n".join(problems) + "\n")
    else:
        sys.stdout.write("ok\n")
    return 2 if problems else 0


def _cmd_cohomology(args) -> int:
    _no_svg(args)
    complex_ = parse_complex(args.complex)
    sheaf = parse_sheaf(args.sheaf, complex_)
    problems = _check_field(args, complex_) + complex_.validate() + validate_sheaf(sheaf)
    if problems:
        sys.stderr.write("\n".join(problems) + "\n")
        return 2
    dims = [
        [k, cohomology_basis(sheaf, k).dim]
        for k in _degrees(args, complex_.dim)
    ]
    if args.format == "json":
        sys.stdout.write(
            serialize_json({"dims": dims, "field": complex_.field.p})
        )
    else:
        sys.stdout.write("".join(f"H^{k}: {d}\n" for k, d in dims))
    return 0


def _cmd_persist_a(args) -> int:
    diagram = parse_diagram(args.diagram)
    complex_ = diagram.complex
    problems = _check_field(args, complex_) + complex_.validate() + validate_diagram(diagram)
    if problems:
        sys.stderr.write("\n".join(problems) + "\n")
        return 2
    m = len(diagram.snapshots)
    reports = []
    for k in _degrees(args, complex_.dim):
        pointwise = graded = None
        if args.engine in ("pointwise", "both"):
            _, pointwise = persistent_cohomology(diagram, k)
        if args.engine in ("graded", "both"):
            try:
                graded = diagram_graded_barcode(diagram, k)
            except NotFreeError as exc:
                if args.engine == "graded":
                    sys.stderr.write(f"{exc}\n")
                    return 2
                sys.stderr.write(
                    f"note: {exc}; falling back to the pointwise engine\n"
                )
        if pointwise is not None and graded is not None:
            if not barcodes_equal(pointwise, graded):
                sys.stderr.write(
                    f"engine mismatch at degree {k}: "
                    f"pointwise {pointwise!r} != graded {graded!r}\n"
                )
                return 3
        barcode = graded if graded is not None else pointwise
        engine = "graded" if graded is not None else "pointwise"
        reports.append(
            BarcodeReport.of(
                k,
                _finish_barcode(barcode, args.closed_end, m),
                engine,
                complex_.field.p,
            )
        )
    return _emit(reports, args)


def _cmd_persist_t(args) -> int:
    complex_ = parse_complex(args.complex)
    sheaf = parse_sheaf(args.sheaf, complex_)
    problems = _check_field(args, complex_) + complex_.validate() + validate_sheaf(sheaf)
    if problems:
        sys.stderr.write("\n".join(problems) + "\n")
        return 2
    m = complex_.steps
    reports = []
    for k in _degrees(args, complex_.dim):
        direct = graded = None
        if args.engine in ("direct", "both"):
            _, direct = type_t_direct(sheaf, k)
        if args.engine in ("graded", "both"):
            graded = type_t_graded(sheaf, k)
        if direct is not None and graded is not None:
            if not barcodes_equal(direct, graded):
                sys.stderr.write(
                    f"engine mismatch at degree {k}: "
                    f"direct {direct!r} != graded {graded!r}\n"
                )
                return 3
        barcode = graded if graded is not None else direct
        engine = "graded" if graded is not None else "pointwise"
        reports.append(
            BarcodeReport.of(
                k,
                _finish_barcode(barcode, args.closed_end, m),
                engine,
                complex_.field.p,
            )
        )
    return _emit(reports, args)


def _cmd_bipersist(args) -> int:
    _no_svg(args)
    complex_ = parse_complex(args.complex)
    diagram = parse_diagram(args.diagram, complex_)
    problems = _check_field(args, complex_) + complex_.validate() + validate_diagram(diagram)
    if problems:
        sys.stderr.write("\n".join(problems) + "\n")
        return 2
    results = []
    for k in _degrees(args, complex_.dim):
        g = grid(diagram, k)
        bad = check_commutative(g)
        if bad is not None:
            sys.stderr.write(
                f"grid at degree {k} fails to commute at square {bad}\n"
            )
            return 3
        results.append((k, g.dims))
    if args.format == "json":
        data = [
            {"degree": k, "dims": dims, "field": complex_.field.p}
            for k, dims in results
        ]
        if args.k is not None:
            data = data[0]
        sys.stdout.write(serialize_json(data))
    else:
        lines = []
        for k, dims in results:
            lines.append(f"k={k}")
            lines.extend(" ".join(str(d) for d in row) for row in dims)
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _labeled_input(args):
    points, labels = parse_points(args.points)
    thresholds = [float(t) for t in args.thresholds.split(",") if t.strip()]
    if not thresholds:
        raise _UsageError("--thresholds needs at least one value")
    p = args.field if args.field is not None else 2
    max_dim = getattr(args, "max_dim", 1)
    x = vietoris_rips(Field(p), points, thresholds, max_dim)
    return LabeledFiltration(x, dict(enumerate(labels)))


def _cmd_labeled(args) -> int:
    lf = _labeled_input(args)
    m = lf.filtration.steps
    reports = [
        BarcodeReport.of(
            k,
            _finish_barcode(
                mixed_feature_barcodes(lf, args.hom_n, k), args.closed_end, m
            ),
            "pointwise",
            lf.filtration.field.p,
        )
        for k in _degrees(args, lf.label_complex.dim)
    ]
    return _emit(reports, args)


def _cmd_unicolored(args) -> int:
    lf = _labeled_input(args)
    m = lf.filtration.steps
    reports = [
        BarcodeReport.of(
            k,
            _finish_barcode(unicolored_pipeline(lf, k), args.closed_end, m),
            "pointwise",
            lf.filtration.field.p,
        )
        for k in _degrees(args, max(lf.filtration.dim, 0))
    ]
    return _emit(reports, args)


_COMMANDS = {
    "validate": _cmd_validate,
    "cohomology": _cmd_cohomology,
    "persist-a": _cmd_persist_a,
    "persist-t": _cmd_persist_t,
    "bipersist": _cmd_bipersist,
    "labeled": _cmd_labeled,
    "unicolored": _cmd_unicolored,
}


def main(argv=None) -> int:
    parser = _create_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def entry():
    sys.exit(main())
