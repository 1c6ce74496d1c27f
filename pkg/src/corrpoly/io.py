"""Polyhedra file formats (.ext/.ine) plus CSV and SVG report emission.

The .ext/.ine layouts follow the cdd ecosystem: a kind header, ``begin``,
a ``rows columns numbertype`` size line, whitespace-separated data rows and
``end``.  Comment lines starting with ``*`` are ignored on input; trailing
option lines are carried through verbatim.  Output is byte-stable: LF line
endings, canonical number rendering.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    Configuration,
    NumberLike,
    ParseError,
    event_count,
    format_number,
    parse_number,
)
from .inequalities import to_text
from .polyhedra import HRepresentation
from .quantum import CurveSamples, GridSamples, ViolationReport
from .vertices import VRepresentation

_NUMBER_TYPES = ("integer", "rational", "real")
_KONFIG_RE = re.compile(r"^Konfiguration\s+(\d+)\s+(\d+)\s*$")


@dataclass(frozen=True)
class PolyhedraFile:
    """Raw parsed .ext/.ine contents, before interpretation."""

    kind: str  # "V" or "H"
    rows: tuple[tuple[NumberLike, ...], ...]
    numbertype: str
    linearity: tuple[int, ...] = ()  # 0-based row indices
    options: tuple[str, ...] = ()
    columns: int | None = None  # only needed when rows is empty

    @property
    def n_columns(self) -> int:
        if self.rows:
            return len(self.rows[0])
        return self.columns or 0


def _render_rows(rows: Iterable[Sequence[NumberLike]]) -> list[str]:
    return [" ".join(format_number(x) for x in row) for row in rows]


def _numbertype_for(rows: Iterable[Sequence[NumberLike]]) -> str:
    for row in rows:
        for x in row:
            if getattr(x, "denominator", 1) != 1:
                return "rational"
    return "integer"


def format_polyhedra_file(pf: PolyhedraFile) -> str:
    lines = [f"{pf.kind}-representation"]
    if pf.linearity:
        indices = " ".join(str(i + 1) for i in sorted(pf.linearity))
        lines.append(f"linearity {len(pf.linearity)} {indices}")
    lines.append("begin")
    lines.append(f"{len(pf.rows)} {pf.n_columns} {pf.numbertype}")
    lines.extend(_render_rows(pf.rows))
    lines.append("end")
    lines.extend(pf.options)
    return "\n".join(lines) + "\n"


def parse_polyhedra_file(text: str, source: str = "<string>") -> PolyhedraFile:
    lines = [ln.strip() for ln in text.splitlines()]
    pos = 0

    def next_line() -> str:
        nonlocal pos
        while pos < len(lines):
            ln = lines[pos]
            pos += 1
            if ln and not ln.startswith("*"):
                return ln
        raise ParseError(f"{source}: unexpected end of file")

    header = next_line()
    if header == "V-representation":
        kind = "V"
    elif header == "H-representation":
        kind = "H"
    else:
        raise ParseError(f"{source}: malformed header {header!r}")

    linearity: tuple[int, ...] = ()
    line = next_line()
    if line.startswith("linearity"):
        tokens = line.split()
        try:
            count = int(tokens[1])
            indices = [int(t) for t in tokens[2:]]
        except (IndexError, ValueError):
            raise ParseError(f"{source}: malformed linearity line {line!r}")
        if len(indices) != count or any(i < 1 for i in indices):
            raise ParseError(f"{source}: malformed linearity line {line!r}")
        linearity = tuple(i - 1 for i in indices)
        line = next_line()
    if line != "begin":
        raise ParseError(f"{source}: expected 'begin', found {line!r}")

    size = next_line().split()
    if len(size) != 3 or size[2] not in _NUMBER_TYPES:
        raise ParseError(f"{source}: malformed size line {' '.join(size)!r}")
    try:
        m, n = int(size[0]), int(size[1])
    except ValueError:
        raise ParseError(f"{source}: malformed size line {' '.join(size)!r}")

    rows = []
    for _ in range(m):
        tokens = next_line().split()
        if tokens == ["end"]:
            raise ParseError(f"{source}: expected {m} data rows")
        if len(tokens) != n:
            raise ParseError(
                f"{source}: row has {len(tokens)} entries, expected {n}"
            )
        rows.append(tuple(parse_number(t) for t in tokens))
    if next_line() != "end":
        raise ParseError(f"{source}: expected 'end' after {m} data rows")

    options = tuple(
        ln for ln in lines[pos:] if ln and not ln.startswith("*")
    )
    for i in linearity:
        if i >= m:
            raise ParseError(f"{source}: linearity index {i + 1} out of range")
    return PolyhedraFile(
        kind=kind, rows=tuple(rows), numbertype=size[2],
        linearity=linearity, options=options, columns=n,
    )


def _config_option(options: Sequence[str]) -> Configuration | None:
    for line in options:
        m = _KONFIG_RE.match(line)
        if m:
            return Configuration.uniform(int(m.group(1)), int(m.group(2)))
    return None


def _with_config_option(options: Sequence[str], config: Configuration | None) -> tuple[str, ...]:
    options = tuple(options)
    if config is None or any(_KONFIG_RE.match(ln) for ln in options):
        return options
    settings = set(config.settings)
    if len(settings) != 1:
        return options  # only uniform layouts have the two-number form
    return options + (f"Konfiguration {config.particles} {config.settings[0]}",)


def _ensure_suffix(path, suffix: str) -> Path:
    path = Path(path)
    if path.suffix != suffix:
        path = path.with_name(path.name + suffix)
    return path


def vrep_to_file(vrep: VRepresentation, options: Sequence[str] = ()) -> PolyhedraFile:
    rows = [(1,) + tuple(v) for v in vrep.vertices]
    rows += [(0,) + tuple(r) for r in vrep.rays]
    return PolyhedraFile(
        kind="V",
        rows=tuple(rows),
        numbertype=_numbertype_for(rows),
        options=_with_config_option(options, vrep.config),
        columns=vrep.dimension + 1,
    )


def vrep_from_file(pf: PolyhedraFile, source: str = "<string>") -> VRepresentation:
    if pf.kind != "V":
        raise ParseError(f"{source}: expected a V-representation")
    if pf.linearity:
        raise ParseError(f"{source}: linearity rows are not supported in .ext input")
    vertices = []
    rays = []
    for row in pf.rows:
        if row[0] == 1:
            vertices.append(row[1:])
        elif row[0] == 0:
            rays.append(row[1:])
        else:
            raise ParseError(
                f"{source}: generator rows must start with 0 or 1, got {row[0]}"
            )
    dimension = max(pf.n_columns - 1, 0)
    config = _config_option(pf.options)
    if config is not None and event_count(config) != dimension:
        config = None
    return VRepresentation(
        dimension=dimension, vertices=tuple(vertices), rays=tuple(rays), config=config
    )


def hrep_to_file(hrep: HRepresentation, options: Sequence[str] = ()) -> PolyhedraFile:
    return PolyhedraFile(
        kind="H",
        rows=hrep.rows,
        numbertype=_numbertype_for(hrep.rows),
        linearity=tuple(sorted(hrep.linearity)),
        options=_with_config_option(options, hrep.config),
        columns=hrep.dimension + 1,
    )


def hrep_from_file(pf: PolyhedraFile, source: str = "<string>") -> HRepresentation:
    if pf.kind != "H":
        raise ParseError(f"{source}: expected an H-representation")
    dimension = max(pf.n_columns - 1, 0)
    config = _config_option(pf.options)
    if config is not None and event_count(config) != dimension:
        config = None
    return HRepresentation(
        dimension=dimension,
        rows=pf.rows,
        linearity=frozenset(pf.linearity),
        config=config,
    )


def write_ext(vrep: VRepresentation, path, options: Sequence[str] = ()) -> Path:
    """Write a V-representation; the ``.ext`` suffix is appended if absent."""
    path = _ensure_suffix(path, ".ext")
    path.write_text(format_polyhedra_file(vrep_to_file(vrep, options)), newline="\n")
    return path


def read_ext(path) -> VRepresentation:
    path = Path(path)
    return vrep_from_file(parse_polyhedra_file(path.read_text(), str(path)), str(path))


def write_ine(hrep: HRepresentation, path, options: Sequence[str] = ()) -> Path:
    """Write an H-representation; the ``.ine`` suffix is appended if absent."""
    path = _ensure_suffix(path, ".ine")
    path.write_text(format_polyhedra_file(hrep_to_file(hrep, options)), newline="\n")
    return path


def read_ine(path) -> HRepresentation:
    path = Path(path)
    return hrep_from_file(parse_polyhedra_file(path.read_text(), str(path)), str(path))


def write_violation_csv(reports: Sequence[ViolationReport], path) -> Path:
    """Columns ``row,inequality,violation``, one line per report."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "inequality", "violation"])
        for report in reports:
            writer.writerow([report.row, to_text(report.inequality), report.amount])
    return path


def write_curve_csv(curves: Sequence[CurveSamples], path) -> Path:
    """Column ``x`` plus one value column per curve, named by source row."""
    if not curves:
        raise ValueError("no curves to write")
    xs = curves[0].xs
    for c in curves[1:]:
        if c.xs != xs:
            raise ValueError("curves were sampled on different grids")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x"] + [f"row{c.row}" for c in curves])
        for i, x in enumerate(xs):
            writer.writerow([x] + [c.values[i] for c in curves])
    return path


def write_grid_csv(grid: GridSamples, path) -> Path:
    """Long form ``x,y,f`` rows, x fastest."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "f"])
        nx = len(grid.xs)
        for iy, y in enumerate(grid.ys):
            for ix, x in enumerate(grid.xs):
                writer.writerow([x, y, grid.values[iy * nx + ix]])
    return path


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
)


def _svg_header(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def curves_svg(curves: Sequence[CurveSamples]) -> str:
    """Self-contained SVG with one polyline per violation curve."""
    if not curves:
        raise ValueError("no curves to render")
    width, height, margin = 640, 480, 50
    xs = curves[0].xs
    x_lo, x_hi = min(xs), max(xs)
    all_values = [v for c in curves for v in c.values] + [0.0]
    y_lo, y_hi = min(all_values), max(all_values)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x: float) -> float:
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def py(v: float) -> float:
        return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    out = _svg_header(width, height)
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="black"/>'
    )
    zero = py(0.0)
    out.append(
        f'<line x1="{margin}" y1="{zero:.2f}" x2="{width - margin}" '
        f'y2="{zero:.2f}" stroke="#888888" stroke-dasharray="4 3"/>'
    )
    for i, c in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(
            f"{px(x):.2f},{py(v):.2f}" for x, v in zip(c.xs, c.values)
        )
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
        out.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * (i + 1)}" '
            f'font-size="11" fill="{color}">row {c.row}</text>'
        )
    for value, label_y in ((y_hi, margin), (y_lo, height - margin)):
        out.append(
            f'<text x="4" y="{label_y}" font-size="11">{value:.4g}</text>'
        )
    for value, label_x in ((x_lo, margin), (x_hi, width - margin)):
        out.append(
            f'<text x="{label_x}" y="{height - margin + 16}" '
            f'font-size="11">{value:.4g}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def grid_svg(grid: GridSamples) -> str:
    """Grayscale cell grid; darker cells mark stronger violation."""
    margin = 40
    cell = max(2, 400 // max(len(grid.xs), len(grid.ys)))
    width = 2 * margin + cell * len(grid.xs)
    height = 2 * margin + cell * len(grid.ys)
    f_max = max(grid.values)
    out = _svg_header(width, height)
    nx = len(grid.xs)
    for iy in range(len(grid.ys)):
        for ix in range(nx):
            f = grid.values[iy * nx + ix]
            if f > 0 and f_max > 0:
                level = int(round(255 * (1 - f / f_max)))
            else:
                level = 255
            fill = f"#{level:02x}{level:02x}{level:02x}"
            # y axis points up: last sample row sits at the top
            x0 = margin + ix * cell
            y0 = margin + (len(grid.ys) - 1 - iy) * cell
            out.append(
                f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" '
                f'fill="{fill}"/>'
            )
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{cell * nx}" '
        f'height="{cell * len(grid.ys)}" fill="none" stroke="black"/>'
    )
    out.append(
        f'<text x="{margin}" y="{height - margin + 16}" font-size="11">'
        f"x: {min(grid.xs):.4g} .. {max(grid.xs):.4g}, "
        f"y: {min(grid.ys):.4g} .. {max(grid.ys):.4g}, "
        f"max violation {f_max:.6g}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(data, path) -> Path:
    """Render curve samples (list) or one grid to a standalone SVG file."""
    path = Path(path)
    if isinstance(data, GridSamples):
        text = grid_svg(data)
    elif isinstance(data, CurveSamples):
        text = curves_svg([data])
    else:
        text = curves_svg(list(data))
    path.write_text(text, newline="\n")
    return path
