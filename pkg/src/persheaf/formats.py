"""File formats and barcode rendering.

Complexes, sheaves and diagrams travel as JSON with per-simplex ids so
the data stays human-auditable; labeled point clouds travel as CSV
with the label in the trailing column.  Serialization is deterministic:
identical objects produce identical bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .complexes import FilteredComplex, Simplex
from .linalg import Field, matrix
from .persistence import Barcode
from .sheaves import (
    CellularSheaf,
    SheafDiagram,
    SheafMorphism,
    _codim1_pairs,
)

__all__ = [
    "complex_to_data",
    "complex_from_data",
    "sheaf_to_data",
    "sheaf_from_data",
    "diagram_to_data",
    "diagram_from_data",
    "barcode_to_data",
    "barcode_from_data",
    "parse_complex",
    "parse_sheaf",
    "parse_diagram",
    "parse_points",
    "serialize_json",
    "BarcodeReport",
    "render_barcode",
    "render_reports",
]


def complex_to_data(x: FilteredComplex) -> dict:
    return {
        "field": x.field.p,
        "steps": x.steps,
        "simplices": [
            {"id": s.id, "vertices": list(s.vertices), "entry": s.entry}
            for s in x.simplices
        ],
    }


def complex_from_data(data: dict) -> FilteredComplex:
    simplices = [
        Simplex(s["id"], tuple(s["vertices"]), s["entry"])
        for s in data["simplices"]
    ]
    return FilteredComplex(Field(data["field"]), simplices, steps=data["steps"])


def _matrix_to_lists(m) -> list:
    return [[int(v) for v in row] for row in m]


def sheaf_to_data(sheaf: CellularSheaf, embed_complex: bool = True) -> dict:
    data: dict = {}
    if embed_complex:
        data["complex"] = complex_to_data(sheaf.complex)
    data["stalks"] = {s.id: sheaf.stalk(s.id) for s in sheaf.complex.simplices}
    restrictions = []
    for f, t in _codim1_pairs(sheaf.complex):
        if sheaf.stalk(f.id) == 0 or sheaf.stalk(t.id) == 0:
            continue
        restrictions.append(
            {
                "face": f.id,
                "coface": t.id,
                "matrix": _matrix_to_lists(sheaf.restriction(f.id, t.id)),
            }
        )
    data["restrictions"] = restrictions
    return data


def sheaf_from_data(data: dict, complex_: FilteredComplex | None = None) -> CellularSheaf:
    embedded = data.get("complex")
    if embedded is not None:
        built = complex_from_data(embedded)
        if complex_ is None:
            complex_ = built
        elif not complex_.same_data(built):
            raise ValueError("embedded complex disagrees with the provided one")
    if complex_ is None:
        raise ValueError("sheaf data has no complex and none was provided")
    p = complex_.field.p
    stalks = {sid: int(d) for sid, d in data["stalks"].items()}
    restrictions = {}
    for entry in data["restrictions"]:
        restrictions[(entry["face"], entry["coface"])] = matrix(entry["matrix"], p)
    return CellularSheaf(complex_, stalks, restrictions)


def diagram_to_data(diagram: SheafDiagram, embed_complex: bool = True) -> dict:
    data: dict = {}
    if embed_complex:
        data["complex"] = complex_to_data(diagram.complex)
    data["snapshots"] = [
        sheaf_to_data(s, embed_complex=False) for s in diagram.snapshots
    ]
    steps = []
    for phi in diagram.steps:
        comp = {}
        for s in diagram.complex.simplices:
            if phi.source.stalk(s.id) and phi.target.stalk(s.id):
                comp[s.id] = _matrix_to_lists(phi.component(s.id))
        steps.append(comp)
    data["steps"] = steps
    return data


def diagram_from_data(data: dict, complex_: FilteredComplex | None = None) -> SheafDiagram:
    embedded = data.get("complex")
    if embedded is not None:
        built = complex_from_data(embedded)
        if complex_ is None:
            complex_ = built
        elif not complex_.same_data(built):
            raise ValueError("embedded complex disagrees with the provided one")
    if complex_ is None:
        raise ValueError("diagram data has no complex and none was provided")
    p = complex_.field.p
    snapshots = [sheaf_from_data(s, complex_) for s in data["snapshots"]]
    steps = []
    for i, comp_data in enumerate(data["steps"]):
        comp = {sid: matrix(m, p) for sid, m in comp_data.items()}
        steps.append(SheafMorphism(snapshots[i], snapshots[i + 1], comp))
    return SheafDiagram(snapshots, steps)


def barcode_to_data(barcode: Barcode) -> list:
    return [[a, b] for a, b in barcode]


def barcode_from_data(data) -> Barcode:
    return Barcode((a, b) for a, b in data)


def parse_complex(path: str) -> FilteredComplex:
    with open(path, encoding="utf-8") as fh:
        return complex_from_data(json.load(fh))


def parse_sheaf(path: str, complex_: FilteredComplex | None = None) -> CellularSheaf:
    with open(path, encoding="utf-8") as fh:
        return sheaf_from_data(json.load(fh), complex_)


def parse_diagram(path: str, complex_: FilteredComplex | None = None) -> SheafDiagram:
    with open(path, encoding="utf-8") as fh:
        return diagram_from_data(json.load(fh), complex_)


def parse_points(path: str):
    """Labeled point cloud: each CSV row is coordinates plus a label."""
    points, labels = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            row = [cell.strip() for cell in row if cell.strip() != ""]
            if not row:
                continue
            if len(row) < 2:
                raise ValueError("each row needs coordinates and a label")
            points.append(tuple(float(c) for c in row[:-1]))
            labels.append(row[-1])
    return points, labels


def serialize_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


@dataclass(frozen=True)
class BarcodeReport:
    """One barcode with the context needed to print it."""

    degree: int
    bars: tuple
    engine: str
    field: int

    @classmethod
    def of(cls, degree: int, barcode: Barcode, engine: str, field: int):
        return cls(degree, tuple(barcode), engine, field)

    def to_data(self) -> dict:
        return {
            "degree": self.degree,
            "bars": [[a, b] for a, b in self.bars],
            "engine": self.engine,
            "field": self.field,
        }


def _bar_text(degree: int, a: int, b) -> str:
    end = "inf)" if b is None else f"{b}]"
    return f"H^{degree}: [{a}, {end}"


def _render_text(reports) -> str:
    lines = []
    for rep in reports:
        if not rep.bars:
            lines.append(f"H^{rep.degree}: (empty)")
            continue
        for a, b in rep.bars:
            lines.append(_bar_text(rep.degree, a, b))
    return "\n".join(lines) + "\n"


def _render_json(reports, single: bool) -> str:
    if single:
        return json.dumps(reports[0].to_data(), indent=2, sort_keys=True) + "\n"
    data = [rep.to_data() for rep in reports]
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


_ROW = 18
_SCALE = 40
_LEFT = 70
_TOP = 30


def _render_svg(reports) -> str:
    """Horizontal bars over an integer axis, one row per bar.

    Unbounded bars run to the axis end and get an arrowhead; the axis
    extends one unit past the largest endpoint so they stay readable.
    """
    ends = [0]
    for rep in reports:
        for a, b in rep.bars:
            ends.append(a)
            if b is not None:
                ends.append(b)
    axis_end = max(ends) + 1
    nrows = sum(max(len(rep.bars), 1) for rep in reports)
    width = _LEFT + axis_end * _SCALE + 60
    height = _TOP + nrows * _ROW + 40
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    axis_y = _TOP + nrows * _ROW + 10
    x0 = _LEFT
    x1 = _LEFT + axis_end * _SCALE
    out.append(
        f'<line x1="{x0}" y1="{axis_y}" x2="{x1}" y2="{axis_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    for t in range(axis_end + 1):
        x = _LEFT + t * _SCALE
        out.append(
            f'<line x1="{x}" y1="{axis_y - 3}" x2="{x}" y2="{axis_y + 3}" '
            'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x}" y="{axis_y + 16}" font-size="11" '
            f'text-anchor="middle" font-family="monospace">{t}</text>'
        )
    row = 0
    for rep in reports:
        label_rows = max(len(rep.bars), 1)
        label_y = _TOP + row * _ROW + (label_rows * _ROW) // 2 + 4
        out.append(
            f'<text x="10" y="{label_y}" font-size="12" '
            f'font-family="monospace">H^{rep.degree}</text>'
        )
        if not rep.bars:
            row += 1
            continue
        for a, b in rep.bars:
            y = _TOP + row * _ROW + _ROW // 2
            xa = _LEFT + a * _SCALE
            if b is None:
                xb = x1
                out.append(
                    f'<line x1="{xa}" y1="{y}" x2="{xb}" y2="{y}" '
                    'stroke="steelblue" stroke-width="6"/>'
                )
                out.append(
                    f'<polygon points="{xb},{y - 6} {xb + 10},{y} {xb},{y + 6}" '
                    'fill="steelblue"/>'
                )
            else:
                xb = _LEFT + (b + 1) * _SCALE
                out.append(
                    f'<line x1="{xa}" y1="{y}" x2="{xb}" y2="{y}" '
                    'stroke="steelblue" stroke-width="6"/>'
                )
            row += 1
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_reports(reports, fmt: str, single: bool = False) -> str:
    if fmt == "text":
        return _render_text(reports)
    if fmt == "json":
        return _render_json(reports, single)
    if fmt == "svg":
        return _render_svg(reports)
    raise ValueError(f"unknown format {fmt!r}")


def render_barcode(report: BarcodeReport, fmt: str) -> str:
    return render_reports([report], fmt, single=True)
