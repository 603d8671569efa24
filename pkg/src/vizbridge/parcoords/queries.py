"""Selection queries over parallel-coordinates layouts.

The brush query avoids brute-force scans with a per-pair interval tree over
each segment's normalized y-extent: a segment can only meet a vertical probe
interval if its extent overlaps it. Survivors then get the exact linear test,
so results match a full scan while examining fewer rows on selective probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vizbridge.datamodel import DataSource, RowIndexSet
from vizbridge.parcoords.geometry import AxisLayout
from vizbridge.parcoords.intervaltree import IntervalTree


class QueryError(Exception):
    pass


@dataclass
class QueryStats:
    """Instrumentation: rows the exact test examined after prefiltering."""

    candidates_examined: int = 0


@dataclass(frozen=True)
class _AxisOrder:
    values: np.ndarray  # raw values of non-missing rows, ascending
    rows: np.ndarray  # matching row ids


@dataclass(frozen=True)
class _PairEntry:
    rows: np.ndarray  # rows valid on both axes of the pair
    tree: IntervalTree  # over [min(y_i, y_i+1), max(...)] normalized


class PairIndex:
    """Per-axis sort orders plus per-adjacent-pair segment-extent trees.

    Static per dataset version: a data swap publishes a fresh index, it is
    never edited in place.
    """

    def __init__(self, layout: AxisLayout, data: DataSource):
        if layout.source_id != data.id:
            raise QueryError("index layout and data refer to different sources")
        self.layout = layout
        self._axis_orders: list[_AxisOrder] = []
        for i, name in enumerate(layout.axes):
            raw = np.asarray(data.column_values(name), dtype=np.float64)
            valid = np.flatnonzero(~np.isnan(raw))
            order = valid[np.argsort(raw[valid], kind="stable")]
            self._axis_orders.append(_AxisOrder(raw[order], order))
        self._pairs: list[_PairEntry] = []
        norm = layout.normalized
        for i in range(layout.n_axes - 1):
            a, b = norm[:, i], norm[:, i + 1]
            valid = np.flatnonzero(~(np.isnan(a) | np.isnan(b)))
            lo = np.minimum(a[valid], b[valid])
            hi = np.maximum(a[valid], b[valid])
            self._pairs.append(_PairEntry(valid, IntervalTree(lo, hi, valid)))

    def axis_order(self, axis: int) -> _AxisOrder:
        return self._axis_orders[axis]

    def pair_rows(self, pair: int) -> np.ndarray:
        return self._pairs[pair].rows

    def pair_candidates(self, pair: int, ylo: float, yhi: float) -> np.ndarray:
        return self._pairs[pair].tree.query(ylo, yhi)


def _check_source(layout: AxisLayout, data: DataSource) -> None:
    if layout.source_id != data.id:
        raise QueryError("layout and data refer to different sources")


def _check_axis(layout: AxisLayout, axis: int) -> None:
    if not 0 <= axis < layout.n_axes:
        raise QueryError(f"axis {axis} out of range for p={layout.n_axes}")


def _check_pair(layout: AxisLayout, pair: int) -> None:
    if not 0 <= pair < layout.n_axes - 1:
        raise QueryError(f"axis pair {pair} out of range for p={layout.n_axes}")


def _raw_axis(layout: AxisLayout, data: DataSource, axis: int) -> np.ndarray:
    return np.asarray(data.column_values(layout.axes[axis]), dtype=np.float64)


def axis_interval_query(
    layout: AxisLayout,
    data: DataSource,
    axis: int,
    interval: tuple[float, float],
    index: PairIndex | None = None,
) -> RowIndexSet:
    """Rows whose raw value on the axis lies in [lo, hi] (inclusive, missing excluded)."""
    _check_source(layout, data)
    _check_axis(layout, axis)
    lo, hi = interval
    if lo > hi:
        raise QueryError(f"interval has lo > hi: [{lo}, {hi}]")
    if index is not None:
        order = index.axis_order(axis)
        start = int(np.searchsorted(order.values, lo, side="left"))
        stop = int(np.searchsorted(order.values, hi, side="right"))
        return RowIndexSet.of(order.rows[start:stop])
    raw = _raw_axis(layout, data, axis)
    mask = (raw >= lo) & (raw <= hi)
    return RowIndexSet.from_mask(mask)


def brush_segment_query(
    layout: AxisLayout,
    data: DataSource,
    pair: int,
    probe: tuple[float, tuple[float, float]],
    index: PairIndex | None = None,
    stats: QueryStats | None = None,
) -> RowIndexSet:
    """Rows whose segment between axes pair, pair+1 crosses the vertical probe.

    The probe is a normalized y-interval at mouse position x, which must lie
    strictly between the two axes. With an index, candidate segments come from
    the interval tree and only those get the exact interpolation test.
    """
    _check_source(layout, data)
    _check_pair(layout, pair)
    x, (ylo, yhi) = probe
    if ylo > yhi:
        raise QueryError(f"probe interval has lo > hi: [{ylo}, {yhi}]")
    x0, x1 = layout.axis_x(pair), layout.axis_x(pair + 1)
    if not x0 < x < x1:
        raise QueryError(f"probe x={x} outside the open inter-axis band ({x0}, {x1})")
    t = (x - x0) / layout.spacing
    norm = layout.normalized
    a, b = norm[:, pair], norm[:, pair + 1]

    if index is not None:
        cand = index.pair_candidates(pair, ylo, yhi)
    else:
        cand = np.flatnonzero(~(np.isnan(a) | np.isnan(b)))
    if stats is not None:
        stats.candidates_examined = int(cand.size)
    if cand.size == 0:
        return RowIndexSet()
    y = a[cand] + t * (b[cand] - a[cand])
    hit = (y >= ylo) & (y <= yhi)
    return RowIndexSet.of(cand[hit])


def slope_query(
    layout: AxisLayout,
    data: DataSource,
    pair: int,
    slopes: tuple[float, float],
) -> RowIndexSet:
    """Rows with s_lo <= (y_{i+1} - y_i)/d <= s_hi in normalized units."""
    _check_source(layout, data)
    _check_pair(layout, pair)
    s_lo, s_hi = slopes
    if s_lo > s_hi:
        raise QueryError(f"slope interval has lo > hi: [{s_lo}, {s_hi}]")
    norm = layout.normalized
    a, b = norm[:, pair], norm[:, pair + 1]
    slope = (b - a) / layout.spacing
    mask = (slope >= s_lo) & (slope <= s_hi)
    return RowIndexSet.from_mask(mask)


def selection_correlation(
    data: DataSource,
    rows: RowIndexSet,
    col_a: str,
    col_b: str,
) -> float:
    """Pearson r of two quantitative columns over the selected rows."""
    for name in (col_a, col_b):
        if not data.column_type(name).is_quantitative:
            raise QueryError(f"column {name!r} is not quantitative")
    idx = np.asarray(rows.indices, dtype=np.intp)
    if idx.size < 2:
        raise QueryError(f"correlation needs at least 2 rows, got {idx.size}")
    if idx.size and idx[-1] >= data.n_rows:
        raise QueryError(f"row {int(idx[-1])} out of range")
    a = np.asarray(data.column_values(col_a), dtype=np.float64)[idx]
    b = np.asarray(data.column_values(col_b), dtype=np.float64)[idx]
    keep = ~(np.isnan(a) | np.isnan(b))
    a, b = a[keep], b[keep]
    if a.size < 2:
        raise QueryError("fewer than 2 complete pairs in the selection")
    da, db = a - a.mean(), b - b.mean()
    var_a, var_b = float(da @ da), float(db @ db)
    if var_a == 0.0 or var_b == 0.0:
        raise QueryError("correlation undefined: zero variance on the selection")
    return float((da @ db) / math.sqrt(var_a * var_b))
