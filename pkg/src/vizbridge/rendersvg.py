"""Deterministic SVG 1.1 export for scenes and parallel-coordinates figures.

Output is byte-identical for identical inputs: no timestamps, no generated
ids, fixed number formatting, inline styles only. Cartesian scenes draw axes
bottom/left inside a 40 px margin; parallel-coordinates figures draw one
vertical axis per column.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from vizbridge.datamodel import DataSource
from vizbridge.gog.compiler import ContourField, Guide, PointMarks, SceneGraph
from vizbridge.parcoords.geometry import AxisLayout, row_to_polyline
from vizbridge.selection import NEUTRAL_GRAY, SelectionGroup, color_hex

MARGIN = 40.0


class RenderError(Exception):
    pass


def _fmt(v: float) -> str:
    text = f"{v:.2f}"
    return "0.00" if text == "-0.00" else text


def _check_size(size: tuple[int, int]) -> tuple[float, float]:
    w, h = size
    if w <= 0 or h <= 0:
        raise RenderError(f"canvas size must be positive, got {size}")
    return float(w), float(h)


class _Doc:
    def __init__(self, w: float, h: float):
        self.parts = [
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(w)}" height="{_fmt(h)}" '
            f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">'
        ]

    def tag(self, name: str, **attrs) -> None:
        rendered = " ".join(f"{k.replace('_', '-')}={quoteattr(v)}" for k, v in attrs.items())
        self.parts.append(f"<{name} {rendered}/>")

    def text(self, content: str, **attrs) -> None:
        rendered = " ".join(f"{k.replace('_', '-')}={quoteattr(v)}" for k, v in attrs.items())
        self.parts.append(f"<text {rendered}>{escape(content)}</text>")

    def finish(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


class _Scale:
    """Affine map from a data domain onto a pixel span."""

    def __init__(self, domain: tuple[float, float], lo_px: float, hi_px: float):
        d0, d1 = domain
        if d0 == d1:
            d0, d1 = d0 - 0.5, d1 + 0.5
        self.d0, self.d1 = d0, d1
        self.lo_px, self.hi_px = lo_px, hi_px

    def __call__(self, v: float) -> float:
        t = (v - self.d0) / (self.d1 - self.d0)
        return self.lo_px + t * (self.hi_px - self.lo_px)


def _group_color_of(row: int, groups: tuple[SelectionGroup, ...]) -> tuple[str, float] | None:
    hit = None
    for g in groups:  # later groups draw over earlier ones
        if row in g.rows:
            hit = (color_hex(g.color), g.alpha)
    return hit


def _points_attr(points: list[tuple[float, float]]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def render_scene(
    scene: SceneGraph,
    size: tuple[int, int] = (800, 600),
    groups: tuple[SelectionGroup, ...] | list[SelectionGroup] = (),
) -> str:
    """Render a compiled scene to SVG text; deterministic for equal inputs."""
    w, h = _check_size(size)
    groups = tuple(groups)
    doc = _Doc(w, h)
    sx = _Scale(scene.x_domain, MARGIN, w - MARGIN)
    sy = _Scale(scene.y_domain, h - MARGIN, MARGIN)  # y grows upward

    for guide in scene.guides:
        _render_guide(doc, guide, sx, sy, w, h)

    for element in scene.elements:
        if isinstance(element.computed, ContourField):
            for (level, polys), color in zip(
                element.computed.isolines, element.computed.colors
            ):
                for poly in polys:
                    pts = [(sx(x), sy(y)) for x, y in poly]
                    d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts)
                    doc.tag(
                        "path",
                        d=d,
                        fill="none",
                        stroke=color,
                        stroke_width="1.2",
                    )
        elif isinstance(element.computed, PointMarks):
            marks = element.computed
            if element.geom == "polyline":
                pts = [
                    (sx(x), sy(y))
                    for x, y in zip(marks.xs, marks.ys)
                    if x is not None and y is not None
                ]
                doc.tag(
                    "polyline",
                    points=_points_attr(pts),
                    fill="none",
                    stroke=color_hex(NEUTRAL_GRAY),
                    stroke_width="1",
                )
                continue
            for r, (x, y) in enumerate(zip(marks.xs, marks.ys)):
                if x is None or y is None:
                    continue
                styled = _group_color_of(r, groups)
                fill, alpha = styled if styled else (color_hex(NEUTRAL_GRAY), 1.0)
                doc.tag(
                    "circle",
                    cx=_fmt(sx(x)),
                    cy=_fmt(sy(y)),
                    r=_fmt(marks.radii[r]),
                    fill=fill,
                    fill_opacity=_fmt(alpha),
                )
                if marks.labels is not None and marks.labels[r]:
                    doc.text(
                        marks.labels[r],
                        x=_fmt(sx(x) + 4),
                        y=_fmt(sy(y) - 4),
                        font_size="9",
                        fill="#333333",
                    )
    return doc.finish()


def _render_guide(doc: _Doc, guide: Guide, sx: _Scale, sy: _Scale, w: float, h: float) -> None:
    if guide.guide == "axis":
        if guide.params == 1:
            y = h - MARGIN
            doc.tag(
                "line",
                x1=_fmt(MARGIN), y1=_fmt(y), x2=_fmt(w - MARGIN), y2=_fmt(y),
                stroke="#000000", stroke_width="1",
            )
            doc.text(
                f"{sx.d0:g}", x=_fmt(MARGIN), y=_fmt(y + 14), font_size="9",
                fill="#333333", text_anchor="middle",
            )
            doc.text(
                f"{sx.d1:g}", x=_fmt(w - MARGIN), y=_fmt(y + 14), font_size="9",
                fill="#333333", text_anchor="middle",
            )
            doc.text(
                guide.label, x=_fmt(w / 2), y=_fmt(h - 8),
                font_size="12", text_anchor="middle", fill="#000000",
            )
        else:
            doc.tag(
                "line",
                x1=_fmt(MARGIN), y1=_fmt(MARGIN), x2=_fmt(MARGIN), y2=_fmt(h - MARGIN),
                stroke="#000000", stroke_width="1",
            )
            doc.text(
                f"{sy.d0:g}", x=_fmt(MARGIN - 6), y=_fmt(h - MARGIN), font_size="9",
                fill="#333333", text_anchor="end",
            )
            doc.text(
                f"{sy.d1:g}", x=_fmt(MARGIN - 6), y=_fmt(MARGIN), font_size="9",
                fill="#333333", text_anchor="end",
            )
            doc.text(
                guide.label,
                x="14", y=_fmt(h / 2), font_size="12", text_anchor="middle",
                fill="#000000", transform=f"rotate(-90 14 {_fmt(h / 2)})",
            )
    elif guide.guide == "form.line":
        (x1, y1), (x2, y2) = guide.params  # type: ignore[misc]
        doc.tag(
            "line",
            x1=_fmt(sx(x1)), y1=_fmt(sy(y1)), x2=_fmt(sx(x2)), y2=_fmt(sy(y2)),
            stroke="#555555", stroke_width="1", stroke_dasharray="4 3",
        )
        if guide.label:
            doc.text(
                guide.label,
                x=_fmt((sx(x1) + sx(x2)) / 2),
                y=_fmt((sy(y1) + sy(y2)) / 2 - 6),
                font_size="10", text_anchor="middle", fill="#555555",
            )
    else:
        raise RenderError(f"unknown guide kind {guide.guide!r}")


def render_parcoords(
    layout: AxisLayout,
    data: DataSource,
    groups: tuple[SelectionGroup, ...] | list[SelectionGroup] = (),
    size: tuple[int, int] = (800, 600),
) -> str:
    """Render a parallel-coordinates figure: one polyline per unbroken row run.

    Ungrouped rows draw first in row order as neutral gray; groups then draw
    in creation order (z-order), each member row in row order with the group
    color and alpha.
    """
    w, h = _check_size(size)
    groups = tuple(groups)
    doc = _Doc(w, h)
    p = layout.n_axes
    span = (w - 2 * MARGIN) / max(p - 1, 1)

    def px(i: int) -> float:
        return MARGIN + i * span

    def py(y: float) -> float:
        return h - MARGIN - y * (h - 2 * MARGIN)

    grouped_rows = set()
    for g in groups:
        grouped_rows.update(g.rows.indices)

    def emit_row(row: int, stroke: str, alpha: float) -> None:
        poly = row_to_polyline(layout, row)
        for run in poly.runs():
            if len(run) < 2 and p > 1:
                continue
            pts = [(px(round(x / layout.spacing)), py(y)) for x, y in run]
            doc.tag(
                "polyline",
                points=_points_attr(pts),
                fill="none",
                stroke=stroke,
                stroke_opacity=_fmt(alpha),
                stroke_width="1",
            )

    for row in range(layout.n_rows):
        if row not in grouped_rows:
            emit_row(row, color_hex(NEUTRAL_GRAY), 1.0)
    for g in groups:
        for row in g.rows:
            emit_row(row, color_hex(g.color), g.alpha)

    for i, name in enumerate(layout.axes):
        doc.tag(
            "line",
            x1=_fmt(px(i)), y1=_fmt(MARGIN), x2=_fmt(px(i)), y2=_fmt(h - MARGIN),
            stroke="#000000", stroke_width="1",
        )
        doc.text(
            name, x=_fmt(px(i)), y=_fmt(MARGIN - 8),
            font_size="11", text_anchor="middle", fill="#000000",
        )
        lo, hi = layout.ranges[i]
        doc.text(
            f"{lo:g}", x=_fmt(px(i)), y=_fmt(h - MARGIN + 12),
            font_size="8", text_anchor="middle", fill="#333333",
        )
        doc.text(
            f"{hi:g}", x=_fmt(px(i)), y=_fmt(MARGIN + 10),
            font_size="8", text_anchor="middle", fill="#333333",
        )
    return doc.finish()
