"""JSON system specs in, CSV tables and SVG polylines out.

CSV: comma separated, "." decimal, LF endings, 17 significant digits so
floats round-trip exactly, infinities spelled "inf".  SVG: one polyline
with the y axis flipped to mathematical orientation; output bytes are a
pure function of the input.
"""

from __future__ import annotations

import json
import math
import re
from functools import singledispatch
from pathlib import Path

import numpy as np

from .errors import DomainError, SpecParseError, SystemValidationError
from .ifs_core import (
    KINDS,
    DeRhamSystem,
    DifferentiableMap,
    validate_system,
)
from .perturbation import StudyTable
from .presets import PRESETS, build_preset
from .regularity import ExponentTrace, VariationTable
from .solver import CurveSample, IncrementTable

_PRESET_RE = re.compile(r"^\s*([a-z0-9_]+)\s*(?:\(([^()]*)\))?\s*$")


def load_document(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecParseError(f"{path}: top level must be an object")
    return doc


def _parse_preset_expr(expr: str) -> DeRhamSystem:
    match = _PRESET_RE.match(expr)
    if not match:
        raise SpecParseError(f"preset: cannot parse {expr!r}")
    name, argstr = match.groups()
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise SpecParseError(f"preset: unknown name {name!r}; expected one of {known}")
    args = ()
    if argstr is not None and argstr.strip():
        try:
            args = tuple(float(a) for a in argstr.split(","))
        except ValueError:
            raise SpecParseError(f"preset: bad argument list {argstr!r}") from None
    return build_preset(name, args)


def _build_explicit(doc: dict) -> DeRhamSystem:
    base = doc.get("base")
    if not isinstance(base, int) or isinstance(base, bool) or base < 2:
        raise SpecParseError("base: must be an integer >= 2")
    space = doc.get("space", "interval")
    if space not in ("interval", "plane"):
        raise SpecParseError('space: must be "interval" or "plane"')
    maps = doc.get("maps")
    if not isinstance(maps, list) or len(maps) != base:
        raise SpecParseError(f"maps: must be a list of exactly {base} entries")
    branches = []
    for i, entry in enumerate(maps):
        if not isinstance(entry, dict):
            raise SpecParseError(f"maps[{i}]: must be an object")
        kind = entry.get("kind")
        if kind not in KINDS:
            raise SpecParseError(
                f"maps[{i}].kind: unknown kind {kind!r}; expected one of "
                + ", ".join(sorted(KINDS)))
        params = entry.get("params")
        if not isinstance(params, list) or not all(
                isinstance(p, (int, float)) and not isinstance(p, bool)
                for p in params):
            raise SpecParseError(f"maps[{i}].params: must be a list of numbers")
        try:
            branches.append(DifferentiableMap(kind, tuple(params)))
        except Exception as exc:
            raise SpecParseError(f"maps[{i}]: {exc}") from None
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecParseError("name: must be a string")
    try:
        return DeRhamSystem(m=base, branches=tuple(branches), space=space, name=name)
    except Exception as exc:
        raise SpecParseError(str(exc)) from None


def parse_system_spec(doc: dict) -> DeRhamSystem:
    """Document tree -> validated system; preset and explicit forms exclusive."""
    if "preset" in doc:
        if any(k in doc for k in ("base", "space", "maps")):
            raise SpecParseError("preset: exclusive with base/space/maps")
        if not isinstance(doc["preset"], str):
            raise SpecParseError("preset: must be a string")
        sys_ = _parse_preset_expr(doc["preset"])
    else:
        sys_ = _build_explicit(doc)
    report = validate_system(sys_)
    if not report.passed:
        raise SystemValidationError(report)
    return sys_


def system_to_document(sys_: DeRhamSystem) -> dict:
    doc = {
        "base": sys_.m,
        "space": sys_.space,
        "maps": [{"kind": b.kind, "params": list(b.params)} for b in sys_.branches],
    }
    if sys_.name is not None:
        doc["name"] = sys_.name
    return doc


def load_system(source: str) -> DeRhamSystem:
    """Accept either a JSON file path or a bare preset expression."""
    text = str(source)
    if text.endswith(".json") or Path(text).exists():
        return parse_system_spec(load_document(text))
    sys_ = _parse_preset_expr(text)
    report = validate_system(sys_)
    if not report.passed:
        raise SystemValidationError(report)
    return sys_


# ---------------------------------------------------------------------------
# CSV


def _num(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _write_text(destination, text: str):
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit_rows(destination, header: list[str], rows):
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_text(destination, "\n".join(lines) + "\n")


@singledispatch
def emit_csv(table, destination) -> None:
    raise TypeError(f"no CSV form for {type(table).__name__}")


@emit_csv.register
def _(table: CurveSample, destination) -> None:
    if table.space == "plane":
        rows = ([_num(t), _num(v.real), _num(v.imag)]
                for t, v in zip(table.t, table.values))
        _emit_rows(destination, ["t", "g_re", "g_im"], rows)
    else:
        rows = ([_num(t), _num(v)] for t, v in zip(table.t, table.values))
        _emit_rows(destination, ["t", "g"], rows)


@emit_csv.register
def _(table: IncrementTable, destination) -> None:
    sep = "" if table.m <= 10 else "-"
    def rows():
        for i, v in enumerate(table.values):
            digits = sep.join(str(a) for a in table.digits_for_row(i))
            yield [digits, _num(v)]
    _emit_rows(destination, ["digits", "m_n"], rows())


@emit_csv.register
def _(table: VariationTable, destination) -> None:
    rows = ([str(int(n)), _num(s)] for n, s in zip(table.n, table.s))
    _emit_rows(destination, ["n", "s_n"], rows)


@emit_csv.register
def _(table: ExponentTrace, destination) -> None:
    rows = ([str(int(n)), _num(v)] for n, v in zip(table.n, table.values))
    _emit_rows(destination, ["n", "value"], rows)


@emit_csv.register
def _(table: StudyTable, destination) -> None:
    def rows():
        for e, d, a, b in zip(table.eps, table.sup_dist, table.alpha, table.beta):
            yield [_num(e), _num(d), _num(a), _num(b)]
        yield [_num(0.0), _num(0.0), _num(table.alpha0), _num(table.beta0)]
    _emit_rows(destination, ["eps", "sup_distance", "alpha", "beta"], rows())


# ---------------------------------------------------------------------------
# SVG


def _svg_coord(x: float) -> str:
    return format(x, ".10g")


def emit_svg(sample: CurveSample, destination, width: int = 800,
             height: int = 800, stroke: str = "black") -> None:
    """Single-polyline rendering; byte output depends only on the inputs.

    Interval curves map the unit square onto the canvas; plane curves
    use their bounding box plus a 5% margin on each side.
    """
    vals = np.asarray(sample.values)
    if vals.size == 0:
        raise DomainError("cannot render an empty sample")
    if sample.space == "plane":
        xs = vals.real
        ys = vals.imag
        x_lo, x_hi = float(xs.min()), float(xs.max())
        y_lo, y_hi = float(ys.min()), float(ys.max())
        pad_x = 0.05 * (x_hi - x_lo) or 0.5
        pad_y = 0.05 * (y_hi - y_lo) or 0.5
        x_lo, x_hi = x_lo - pad_x, x_hi + pad_x
        y_lo, y_hi = y_lo - pad_y, y_hi + pad_y
    else:
        xs = np.asarray(sample.t, dtype=float)
        ys = vals.astype(float)
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    px = (xs - x_lo) / (x_hi - x_lo) * width
    # y axis flipped so larger G renders higher
    py = (y_hi - ys) / (y_hi - y_lo) * height
    points = " ".join(f"{_svg_coord(x)},{_svg_coord(y)}" for x, y in zip(px, py))
    text = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<polyline fill="none" stroke="{stroke}" stroke-width="1" '
        f'points="{points}"/>\n'
        "</svg>\n"
    )
    _write_text(destination, text)
