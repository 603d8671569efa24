"""Axis layout, row polylines, and the 2D line duality.

Axes stand parallel at x = 0, d, 2d, ...; each row maps to the polyline that
crosses axis i at its (normalized) value. A Cartesian line y = mx + b
corresponds to the single point where all inter-axis segments induced by its
points meet: (d/(1-m), b/(1-m)), or an ideal point (parallel segments) when
m = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vizbridge.datamodel import DataSource


class LayoutError(Exception):
    pass


@dataclass(frozen=True)
class AxisLayout:
    """Ordered quantitative axes with per-axis normalization ranges.

    ``normalized`` is an n x p float array in [0, 1] with NaN for missing
    cells; it is precomputed so every per-axis query touches one contiguous
    column.
    """

    axes: tuple[str, ...]
    spacing: float
    ranges: tuple[tuple[float, float], ...]
    normalized: np.ndarray
    source_id: str

    @property
    def n_rows(self) -> int:
        return self.normalized.shape[0]

    @property
    def n_axes(self) -> int:
        return len(self.axes)

    def axis_x(self, i: int) -> float:
        return i * self.spacing

    def to_normalized(self, axis: int, value: float) -> float:
        lo, hi = self.ranges[axis]
        return (value - lo) / (hi - lo)


def layout(data: DataSource, axes: list[str] | tuple[str, ...], d: float) -> AxisLayout:
    """Build an axis layout over quantitative columns with inter-axis distance d."""
    if d <= 0:
        raise LayoutError(f"inter-axis distance must be positive, got {d}")
    if not axes:
        raise LayoutError("layout requires at least one axis")
    ranges = []
    cols = []
    for name in axes:
        idx = data.column_index(name)
        if not data.columns[idx].type.is_quantitative:
            raise LayoutError(f"column {name!r} is not quantitative")
        values = np.asarray(data.column_values(idx), dtype=np.float64)
        cols.append(values)
        finite = values[~np.isnan(values)]
        if finite.size == 0:
            lo, hi = 0.0, 1.0
        else:
            lo, hi = float(finite.min()), float(finite.max())
            if lo == hi:
                # constant column: widen so the value sits mid-range
                lo, hi = lo - 0.5, hi + 0.5
        ranges.append((lo, hi))
    if cols:
        norm = np.column_stack(
            [(c - lo) / (hi - lo) for c, (lo, hi) in zip(cols, ranges)]
        )
    else:
        norm = np.empty((data.n_rows, 0))
    norm.setflags(write=False)
    return AxisLayout(tuple(axes), float(d), tuple(ranges), norm, data.id)


@dataclass(frozen=True)
class Polyline:
    """Vertices (x_i, y_i) per axis; None where a missing value breaks the line."""

    vertices: tuple[tuple[float, float] | None, ...]

    def segments(self) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        out = []
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a is not None and b is not None:
                out.append((a, b))
        return out

    def runs(self) -> list[list[tuple[float, float]]]:
        """Maximal unbroken vertex runs (each renders as one polyline)."""
        out: list[list[tuple[float, float]]] = []
        current: list[tuple[float, float]] = []
        for v in self.vertices:
            if v is None:
                if current:
                    out.append(current)
                current = []
            else:
                current.append(v)
        if current:
            out.append(current)
        return out


def row_to_polyline(layout: AxisLayout, row: int) -> Polyline:
    if not 0 <= row < layout.n_rows:
        raise LayoutError(f"row {row} out of range for n={layout.n_rows}")
    vertices: list[tuple[float, float] | None] = []
    for i in range(layout.n_axes):
        y = layout.normalized[row, i]
        if math.isnan(y):
            vertices.append(None)
        else:
            vertices.append((layout.axis_x(i), float(y)))
    return Polyline(tuple(vertices))


@dataclass(frozen=True)
class CartesianLine:
    slope: float
    intercept: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise LayoutError("line coefficients must be finite")


@dataclass(frozen=True)
class DualPoint:
    x: float
    y: float


@dataclass(frozen=True)
class IdealPoint:
    """Point at infinity: all induced segments are parallel with this slope."""

    direction: float


def line_to_dual_point(line: CartesianLine, d: float) -> DualPoint | IdealPoint:
    """Map y = mx + b to its parallel-coordinates dual point for axis spacing d."""
    if d <= 0:
        raise LayoutError(f"inter-axis distance must be positive, got {d}")
    m, b = line.slope, line.intercept
    if m == 1.0:
        return IdealPoint(direction=b / d)
    return DualPoint(d / (1.0 - m), b / (1.0 - m))
