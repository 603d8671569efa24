"""Parallel-coordinates geometry and indexed selection queries."""

from vizbridge.parcoords.geometry import (
    AxisLayout,
    CartesianLine,
    DualPoint,
    IdealPoint,
    LayoutError,
    Polyline,
    layout,
    line_to_dual_point,
    row_to_polyline,
)
from vizbridge.parcoords.intervaltree import IntervalTree
from vizbridge.parcoords.queries import (
    PairIndex,
    QueryError,
    QueryStats,
    axis_interval_query,
    brush_segment_query,
    selection_correlation,
    slope_query,
)

__all__ = [
    "AxisLayout",
    "CartesianLine",
    "DualPoint",
    "IdealPoint",
    "IntervalTree",
    "LayoutError",
    "PairIndex",
    "Polyline",
    "QueryError",
    "QueryStats",
    "axis_interval_query",
    "brush_segment_query",
    "layout",
    "line_to_dual_point",
    "row_to_polyline",
    "selection_correlation",
    "slope_query",
]
