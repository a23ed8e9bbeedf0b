"""SVG rendering of Newton polygons.

One polyline per polygon with markers at the breakpoints; the Hodge
polygon is always drawn in a distinguished stroke, and turning points are
marked filled when they sit on the Hodge polygon and hollow otherwise.
Output is deterministic plain text.
"""

from __future__ import annotations

from fractions import Fraction

from .kottwitz import HodgeDatum, NewtonPoint, hodge_polygon

_SCALE = 60
_MARGIN = 30

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
            "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e"]


def _xy(x, y, height):
    return (_MARGIN + float(x) * _SCALE, height - _MARGIN - float(y) * _SCALE)


def _polyline_points(v: NewtonPoint, height) -> str:
    pts = [(Fraction(0), Fraction(0))]
    acc = Fraction(0)
    for i, s in enumerate(v.slopes):
        acc += s
        pts.append((Fraction(i + 1), acc))
    return " ".join(f"{px:.1f},{py:.1f}" for px, py in (_xy(x, y, height) for x, y in pts))


def polygon_svg(points, h: HodgeDatum) -> str:
    """SVG document showing the given Newton points against the Hodge polygon."""
    hodge = hodge_polygon(h)
    width = 2 * _MARGIN + h.n * _SCALE
    height = 2 * _MARGIN + (h.d + 1) * _SCALE
    rows = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    # lattice grid
    for gx in range(h.n + 1):
        x0, y0 = _xy(gx, 0, height)
        _, y1 = _xy(gx, h.d, height)
        rows.append(
            f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x0:.1f}" y2="{y1:.1f}" '
            f'stroke="#eeeeee" stroke-width="1"/>')
    for gy in range(h.d + 1):
        x0, y0 = _xy(0, gy, height)
        x1, _ = _xy(h.n, gy, height)
        rows.append(
            f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x1:.1f}" y2="{y0:.1f}" '
            f'stroke="#eeeeee" stroke-width="1"/>')
    rows.append(
        f'<polyline points="{_polyline_points(hodge, height)}" fill="none" '
        f'stroke="#000000" stroke-width="3" stroke-dasharray="7,3"/>')
    drawn = [v for v in points if v != hodge]
    for idx, v in enumerate(drawn):
        color = _PALETTE[idx % len(_PALETTE)]
        rows.append(
            f'<polyline points="{_polyline_points(v, height)}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in v.turning_points():
            cx, cy = _xy(x, y, height)
            on_hodge = y == h.hodge_value(x)
            fill = color if on_hodge else "white"
            rows.append(
                f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3.5" fill="{fill}" '
                f'stroke="{color}" stroke-width="1.5"/>')
    rows.append("</svg>")
    return "\n".join(rows) + "\n"
