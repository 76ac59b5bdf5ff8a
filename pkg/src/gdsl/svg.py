"""SVG 1.1 export of a pattern: flat panels laid out on a grid.

Panels are placed row-major with 5 cm gutters; 1 SVG user unit = 1 mm.
Stitched edge pairs are overdrawn in a shared stroke colour so seams can
be matched by eye. Output is byte-deterministic for identical input.
"""

from __future__ import annotations

import colorsys
import math

from .errors import ValidationFailed
from .geometry import Edge
from .pattern import Pattern, validate_pattern

GUTTER_CM = 5.0
SCALE = 10.0  # cm -> mm (SVG user units)

_PANEL_FILL = "#f5efe6"
_PANEL_STROKE = "#3a3a3a"


def _fmt(v: float) -> str:
    # fixed-point keeps output stable; 0.01 mm resolution is plenty
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _stitch_color(index: int) -> str:
    # golden-angle hue walk gives well-separated, reproducible colours
    hue = (index * 137.508) % 360.0 / 360.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.42, 0.85)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def _edge_path(edge: Edge, to_svg) -> str:
    """Path fragment for one edge, excluding the initial moveto."""
    pts = [to_svg(p) for p in (*edge.control, edge.end)]
    coords = " ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts)
    cmd = {0: "L", 1: "Q", 2: "C"}[len(edge.control)]
    return f"{cmd} {coords}"


def export_svg(pattern: Pattern) -> str:
    """Render a valid pattern to an SVG document string."""
    report = validate_pattern(pattern)
    if not report.passed:
        raise ValidationFailed(
            f"cannot export an invalid pattern ({report.codes()})",
            report.violations)

    if not pattern.panels:
        return ('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                'width="1mm" height="1mm" viewBox="0 0 1 1"></svg>\n')

    boxes = [p.bbox() for p in pattern.panels]
    cell_w = max(b[2] - b[0] for b in boxes) + GUTTER_CM
    cell_h = max(b[3] - b[1] for b in boxes) + GUTTER_CM
    cols = max(1, math.ceil(math.sqrt(len(pattern.panels))))
    rows = math.ceil(len(pattern.panels) / cols)
    width = (cols * cell_w + GUTTER_CM) * SCALE
    height = (rows * cell_h + GUTTER_CM) * SCALE

    # panel-local cm -> page mm, with the y axis flipped for SVG
    transforms = {}
    for i, (panel, box) in enumerate(zip(pattern.panels, boxes)):
        col, row = i % cols, i // cols
        ox = (GUTTER_CM + col * cell_w - box[0]) * SCALE
        oy = (GUTTER_CM + row * cell_h + box[3]) * SCALE

        def to_svg(p, ox=ox, oy=oy):
            return (ox + p[0] * SCALE, oy - p[1] * SCALE)

        transforms[panel.id] = to_svg

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}mm" height="{_fmt(height)}mm" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for panel in pattern.panels:
        to_svg = transforms[panel.id]
        sx, sy = to_svg(panel.edges[0].start)
        d = f"M {_fmt(sx)} {_fmt(sy)} " + " ".join(
            _edge_path(e, to_svg) for e in panel.edges) + " Z"
        lines.append(f'  <path id="panel-{panel.id}" d="{d}" '
                     f'fill="{_PANEL_FILL}" stroke="{_PANEL_STROKE}" '
                     'stroke-width="1.2"/>')
        lx, ly = to_svg((panel.bbox()[0], panel.bbox()[3]))
        lines.append(f'  <text x="{_fmt(lx + 4)}" y="{_fmt(ly + 14)}" '
                     f'font-size="12" fill="#555">{panel.id}</text>')

    for k, stitch in enumerate(pattern.stitches):
        color = _stitch_color(k)
        for ref in (stitch.side_a, stitch.side_b):
            edge = pattern.resolve(ref)
            to_svg = transforms[ref.panel_id]
            sx, sy = to_svg(edge.start)
            d = f"M {_fmt(sx)} {_fmt(sy)} {_edge_path(edge, to_svg)}"
            lines.append(f'  <path class="stitch stitch-{k}" d="{d}" '
                         f'fill="none" stroke="{color}" stroke-width="2.4" '
                         'stroke-linecap="round"/>')

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
