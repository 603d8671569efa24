"""Compile parsed statements against a data source into a renderable scene.

Point elements expand to one mark per row; contour elements evaluate the
joint kernel density and carry extracted level polylines in data
coordinates; guides resolve labels and geometry. Scale domains are the
min/max of the bound quantitative columns.
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from vizbridge.datamodel import DataSource
from vizbridge.gog.contour import extract_contours
from vizbridge.gog.kde import KdeSpec, epanechnikov_kde_2d, silverman_bandwidth
from vizbridge.gog.parser import (
    CallExpr,
    Cross,
    GogStatement,
    Identifier,
    NumberLit,
    StringLit,
    TupleLit,
)

MIN_MARK_RADIUS = 1.0  # px; the builtin `zero` size renders at this radius

GEOMS = ("point", "contour", "polyline")
GUIDES = ("axis", "form.line")
AESTHETICS = ("position", "size", "label", "color")
DENSITY_PATH = ("smooth", "density", "kernel", "epanechnikov", "joint")
BUILTINS = ("zero", "dim", "hue")


class CompileError(Exception):
    pass


@dataclass(frozen=True)
class ContourField:
    grid: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    levels: tuple[float, ...]
    isolines: tuple[tuple[float, tuple[tuple[tuple[float, float], ...], ...]], ...]
    colors: tuple[str, ...]  # one hex color per level


@dataclass(frozen=True)
class PointMarks:
    xs: tuple[float | None, ...]
    ys: tuple[float | None, ...]
    labels: tuple[str, ...] | None
    radii: tuple[float, ...]


@dataclass(frozen=True)
class GeomElement:
    geom: str
    aesthetics: dict[str, Any]
    computed: PointMarks | ContourField | None


@dataclass(frozen=True)
class Guide:
    guide: str
    params: int | tuple[tuple[float, float], tuple[float, float]]
    label: str


@dataclass(frozen=True)
class SceneGraph:
    data_ref: str
    data_name: str
    elements: tuple[GeomElement, ...]
    guides: tuple[Guide, ...]
    x_dim: str | None
    y_dim: str | None
    x_domain: tuple[float, float]
    y_domain: tuple[float, float]


def _hue_colors(count: int) -> tuple[str, ...]:
    colors = []
    for k in range(count):
        r, g, b = colorsys.hsv_to_rgb((k / max(count, 1)) % 1.0, 0.65, 0.85)
        colors.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return tuple(colors)


def _quantitative_column(data: DataSource, name: str) -> np.ndarray:
    try:
        idx = data.column_index(name)
    except Exception:
        raise CompileError(f"unknown column {name}") from None
    if not data.columns[idx].type.is_quantitative:
        raise CompileError(
            f"column {name} is categorical; position needs a quantitative column"
        )
    return np.asarray(data.column_values(idx), dtype=np.float64)


def _column_as_text(data: DataSource, name: str) -> tuple[str, ...]:
    try:
        idx = data.column_index(name)
    except Exception:
        raise CompileError(f"unknown column {name}") from None
    values = data.column_values(idx)
    if isinstance(values, np.ndarray):
        return tuple("" if math.isnan(v) else f"{v:g}" for v in values)
    return tuple("" if v is None else str(v) for v in values)


def _cross_columns(expr: Cross) -> tuple[str, str]:
    if not isinstance(expr.left, Identifier) or not isinstance(expr.right, Identifier):
        raise CompileError("cross operands must be column names")
    return expr.left.name, expr.right.name


def _domain(values: np.ndarray) -> tuple[float, float]:
    finite = values[~np.isnan(values)]
    if finite.size == 0:
        return (0.0, 1.0)
    lo, hi = float(finite.min()), float(finite.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _collect_aesthetics(call: CallExpr) -> dict[str, CallExpr]:
    out: dict[str, CallExpr] = {}
    for arg in call.args:
        if not isinstance(arg, CallExpr):
            raise CompileError(f"element argument must be an aesthetic call, got {arg!r}")
        name = arg.path[0]
        if name not in AESTHETICS:
            raise CompileError(f"unknown aesthetic {arg.path_name!r}")
        if name in out:
            raise CompileError(f"duplicate {name} binding")
        out[name] = arg
    if "position" not in out:
        raise CompileError(f"element {call.path_name!r} needs exactly one position binding")
    return out


def _single_arg(call: CallExpr, what: str):
    if len(call.args) != 1:
        raise CompileError(f"{what} takes exactly one argument")
    return call.args[0]


def _compile_point(
    call: CallExpr, data: DataSource, geom: str
) -> tuple[GeomElement, str, str]:
    aes = _collect_aesthetics(call)
    pos = _single_arg(aes["position"], "position")
    if not isinstance(pos, Cross):
        raise CompileError(f"{geom} position must cross two columns, e.g. position(a*b)")
    x_name, y_name = _cross_columns(pos)
    xs = _quantitative_column(data, x_name)
    ys = _quantitative_column(data, y_name)

    labels: tuple[str, ...] | None = None
    if "label" in aes:
        label_arg = _single_arg(aes["label"], "label")
        if isinstance(label_arg, Identifier):
            labels = _column_as_text(data, label_arg.name)
        elif isinstance(label_arg, StringLit):
            labels = tuple([label_arg.value] * data.n_rows)
        else:
            raise CompileError("label binding must be a column or a string")

    radii: tuple[float, ...]
    if "size" in aes:
        size_arg = _single_arg(aes["size"], "size")
        if isinstance(size_arg, Identifier) and size_arg.name == "zero":
            radii = tuple([MIN_MARK_RADIUS] * data.n_rows)
        elif isinstance(size_arg, NumberLit):
            if size_arg.value <= 0:
                raise CompileError("size must be positive")
            radii = tuple([float(size_arg.value)] * data.n_rows)
        elif isinstance(size_arg, Identifier):
            col = _quantitative_column(data, size_arg.name)
            lo, hi = _domain(col)
            scaled = MIN_MARK_RADIUS + 5.0 * (col - lo) / (hi - lo)
            radii = tuple(
                MIN_MARK_RADIUS if math.isnan(v) else float(v) for v in scaled
            )
        else:
            raise CompileError("size binding must be zero, a number, or a column")
    else:
        radii = tuple([2.5] * data.n_rows)

    marks = PointMarks(
        xs=tuple(None if math.isnan(v) else float(v) for v in xs),
        ys=tuple(None if math.isnan(v) else float(v) for v in ys),
        labels=labels,
        radii=radii,
    )
    element = GeomElement(
        geom=geom,
        aesthetics={"position": (x_name, y_name), **_describe_extras(aes)},
        computed=marks,
    )
    return element, x_name, y_name


def _describe_extras(aes: dict[str, CallExpr]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in ("size", "label", "color"):
        if key in aes:
            out[key] = aes[key].path_name if not aes[key].args else _arg_repr(aes[key])
    return out


def _arg_repr(call: CallExpr) -> str:
    from vizbridge.gog.parser import _print_expr

    return _print_expr(call)


def _compile_contour(
    call: CallExpr, data: DataSource, kde_spec: KdeSpec | None
) -> tuple[GeomElement, str, str]:
    aes = _collect_aesthetics(call)
    pos = _single_arg(aes["position"], "position")
    if not (isinstance(pos, CallExpr) and pos.path == DENSITY_PATH):
        raise CompileError(
            "contour position must be smooth.density.kernel.epanechnikov.joint(a*b)"
        )
    stat_arg = _single_arg(pos, "density")
    if not isinstance(stat_arg, Cross):
        raise CompileError("density argument must cross two columns")
    x_name, y_name = _cross_columns(stat_arg)
    xs = _quantitative_column(data, x_name)
    ys = _quantitative_column(data, y_name)
    keep = ~(np.isnan(xs) | np.isnan(ys))
    pts = np.column_stack([xs[keep], ys[keep]])
    if pts.shape[0] == 0:
        raise CompileError("density has no complete observations")

    if kde_spec is None:
        kde_spec = KdeSpec(
            bandwidth=(silverman_bandwidth(pts[:, 0]), silverman_bandwidth(pts[:, 1]))
        )
    hx, hy = kde_spec.bandwidth
    domain = (
        (float(pts[:, 0].min()) - hx, float(pts[:, 0].max()) + hx),
        (float(pts[:, 1].min()) - hy, float(pts[:, 1].max()) + hy),
    )
    grid = epanechnikov_kde_2d(pts, kde_spec, domain)
    peak = float(grid.max())
    levels = tuple(np.linspace(0.1 * peak, 0.9 * peak, 5))
    gx, gy = kde_spec.grid
    grid_xs = np.linspace(domain[0][0], domain[0][1], gx)
    grid_ys = np.linspace(domain[1][0], domain[1][1], gy)
    dx = (domain[0][1] - domain[0][0]) / (gx - 1)
    dy = (domain[1][1] - domain[1][0]) / (gy - 1)
    isolines = []
    for level, polys in extract_contours(grid, list(levels)):
        mapped = tuple(
            tuple((domain[0][0] + px * dx, domain[1][0] + py * dy) for px, py in poly)
            for poly in polys
        )
        isolines.append((level, mapped))

    color_call = aes.get("color")
    if color_call is not None and color_call.path not in (("color", "hue"), ("color",)):
        raise CompileError(f"unsupported color binding {color_call.path_name!r}")
    field = ContourField(
        grid=grid,
        xs=grid_xs,
        ys=grid_ys,
        levels=levels,
        isolines=tuple(isolines),
        colors=_hue_colors(len(levels)),
    )
    element = GeomElement(
        geom="contour",
        aesthetics={"position": (x_name, y_name), "color": "color.hue"},
        computed=field,
    )
    return element, x_name, y_name


def _compile_guide(call: CallExpr) -> Guide:
    name = call.path_name
    if name == "axis":
        dim_value: int | None = None
        label = ""
        for arg in call.args:
            if isinstance(arg, CallExpr) and arg.path == ("dim",):
                v = _single_arg(arg, "dim")
                if not isinstance(v, NumberLit) or int(v.value) not in (1, 2):
                    raise CompileError("axis dim must be 1 or 2")
                dim_value = int(v.value)
            elif isinstance(arg, CallExpr) and arg.path == ("label",):
                v = _single_arg(arg, "label")
                if not isinstance(v, StringLit):
                    raise CompileError("axis label must be a string")
                label = v.value
            else:
                raise CompileError(f"unsupported axis argument {arg!r}")
        if dim_value is None:
            raise CompileError("axis guide needs dim(1) or dim(2)")
        return Guide("axis", dim_value, label)
    if name == "form.line":
        endpoints: tuple[tuple[float, float], tuple[float, float]] | None = None
        label = ""
        for arg in call.args:
            if isinstance(arg, CallExpr) and arg.path == ("position",):
                if len(arg.args) != 2 or not all(isinstance(a, TupleLit) for a in arg.args):
                    raise CompileError("form.line position takes two (x,y) tuples")
                a, b = arg.args
                endpoints = ((a.x, a.y), (b.x, b.y))
            elif isinstance(arg, CallExpr) and arg.path == ("label",):
                v = _single_arg(arg, "label")
                if not isinstance(v, StringLit):
                    raise CompileError("form.line label must be a string")
                label = v.value
            else:
                raise CompileError(f"unsupported form.line argument {arg!r}")
        if endpoints is None:
            raise CompileError("form.line needs position((x1,y1),(x2,y2))")
        return Guide("form.line", endpoints, label)
    raise CompileError(f"unknown guide {name!r}")


def compile_scene(
    statements: list[GogStatement],
    data: DataSource,
    kde_spec: KdeSpec | None = None,
) -> SceneGraph:
    elements: list[GeomElement] = []
    guides: list[Guide] = []
    x_dim: str | None = None
    y_dim: str | None = None

    for stmt in statements:
        if stmt.kind == "GUIDE":
            guides.append(_compile_guide(stmt.call))
            continue
        geom = stmt.call.path_name
        if geom not in GEOMS:
            raise CompileError(f"unknown geom {geom!r}")
        if geom == "contour":
            element, ex, ey = _compile_contour(stmt.call, data, kde_spec)
        else:
            element, ex, ey = _compile_point(stmt.call, data, geom)
        if x_dim is None:
            x_dim, y_dim = ex, ey
        elif (x_dim, y_dim) != (ex, ey):
            raise CompileError(
                f"elements bind conflicting dimensions: {(x_dim, y_dim)} vs {(ex, ey)}"
            )
        elements.append(element)

    if x_dim is not None and y_dim is not None:
        x_domain = _domain(np.asarray(data.column_values(x_dim), dtype=np.float64))
        y_domain = _domain(np.asarray(data.column_values(y_dim), dtype=np.float64))
    else:
        x_domain = y_domain = (0.0, 1.0)
    return SceneGraph(
        data_ref=data.id,
        data_name=data.name,
        elements=tuple(elements),
        guides=tuple(guides),
        x_dim=x_dim,
        y_dim=y_dim,
        x_domain=x_domain,
        y_domain=y_domain,
    )


def scene_to_doc(scene: SceneGraph) -> dict[str, Any]:
    """JSON-able scene payload for the wire (figure.add) and the UI."""
    elements = []
    for el in scene.elements:
        doc: dict[str, Any] = {"geom": el.geom, "aesthetics": dict(el.aesthetics)}
        if isinstance(el.computed, PointMarks):
            doc["marks"] = {
                "x": list(el.computed.xs),
                "y": list(el.computed.ys),
                "r": list(el.computed.radii),
            }
            if el.computed.labels is not None:
                doc["marks"]["label"] = list(el.computed.labels)
        elif isinstance(el.computed, ContourField):
            doc["contours"] = [
                {
                    "level": level,
                    "color": color,
                    "polylines": [[[x, y] for x, y in poly] for poly in polys],
                }
                for (level, polys), color in zip(el.computed.isolines, el.computed.colors)
            ]
        elements.append(doc)
    guides = []
    for g in scene.guides:
        if g.guide == "axis":
            guides.append({"guide": "axis", "dim": g.params, "label": g.label})
        else:
            (x1, y1), (x2, y2) = g.params  # type: ignore[misc]
            guides.append(
                {"guide": "form.line", "from": [x1, y1], "to": [x2, y2], "label": g.label}
            )
    return {
        "data": scene.data_name,
        "xDim": scene.x_dim,
        "yDim": scene.y_dim,
        "xDomain": list(scene.x_domain),
        "yDomain": list(scene.y_domain),
        "elements": elements,
        "guides": guides,
    }
