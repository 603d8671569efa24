"""Marching-squares contour extraction over a density grid.

Vertices lie on grid-cell edges at linearly interpolated crossings, expressed
in grid index coordinates (first coordinate along the grid's first axis).
Segments are chained into polylines; a closed loop repeats its first vertex
at the end. Saddle cells disambiguate by the cell-center average.
"""

from __future__ import annotations

import numpy as np

Point = tuple[float, float]
Polyline = list[Point]

# Segment table: case index bit k set when corner k is above the level.
# Corners: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1); edges: 0=bottom (j side,
# between corners 0-1), 1=right (1-2), 2=top (3-2), 3=left (0-3).
_CASES: dict[int, tuple[tuple[int, int], ...]] = {
    0: (),
    1: ((3, 0),),
    2: ((0, 1),),
    3: ((3, 1),),
    4: ((1, 2),),
    6: ((0, 2),),
    7: ((3, 2),),
    8: ((2, 3),),
    9: ((2, 0),),
    11: ((2, 1),),
    12: ((1, 3),),
    13: ((1, 0),),
    14: ((0, 3),),
    15: (),
}


def _edge_point(edge: int, i: int, j: int, v: tuple[float, float, float, float], level: float) -> Point:
    v0, v1, v2, v3 = v
    if edge == 0:
        t = (level - v0) / (v1 - v0)
        return (i + t, float(j))
    if edge == 1:
        t = (level - v1) / (v2 - v1)
        return (float(i + 1), j + t)
    if edge == 2:
        t = (level - v3) / (v2 - v3)
        return (i + t, float(j + 1))
    t = (level - v0) / (v3 - v0)
    return (float(i), j + t)


def _cell_segments(grid: np.ndarray, i: int, j: int, level: float) -> list[tuple[Point, Point]]:
    v = (
        float(grid[i, j]),
        float(grid[i + 1, j]),
        float(grid[i + 1, j + 1]),
        float(grid[i, j + 1]),
    )
    case = sum(1 << k for k in range(4) if v[k] > level)
    if case in (5, 10):
        center_above = (sum(v) / 4.0) > level
        if case == 5:
            pairs = ((3, 0), (1, 2)) if not center_above else ((3, 2), (1, 0))
        else:
            pairs = ((0, 1), (2, 3)) if not center_above else ((0, 3), (2, 1))
    else:
        pairs = _CASES[case]
    return [
        (_edge_point(a, i, j, v, level), _edge_point(b, i, j, v, level))
        for a, b in pairs
    ]


def _key(p: Point) -> tuple[float, float]:
    return (round(p[0], 9), round(p[1], 9))


def _chain(segments: list[tuple[Point, Point]]) -> list[Polyline]:
    """Join segments sharing endpoints into maximal open chains, then loops."""
    succ: dict[tuple, list[tuple[Point, Point]]] = {}
    degree: dict[tuple, int] = {}
    for seg in segments:
        for p in seg:
            degree[_key(p)] = degree.get(_key(p), 0) + 1
        succ.setdefault(_key(seg[0]), []).append(seg)
        succ.setdefault(_key(seg[1]), []).append(seg)

    used: set[int] = set()

    def walk(start_seg: tuple[Point, Point], head: Point) -> Polyline:
        used.add(id(start_seg))
        tail = start_seg[0] if _key(start_seg[1]) == _key(head) else start_seg[1]
        poly = [tail, head]
        cursor = head
        while True:
            nxt = None
            for seg in succ.get(_key(cursor), ()):
                if id(seg) in used:
                    continue
                nxt = seg
                break
            if nxt is None:
                return poly
            used.add(id(nxt))
            cursor = nxt[1] if _key(nxt[0]) == _key(cursor) else nxt[0]
            poly.append(cursor)

    polylines: list[Polyline] = []
    # open chains first, starting from degree-1 endpoints for determinism
    endpoints = sorted(k for k, dg in degree.items() if dg == 1)
    for key in endpoints:
        for seg in succ[key]:
            if id(seg) in used:
                continue
            head = seg[1] if _key(seg[0]) == key else seg[0]
            polylines.append(walk(seg, head))
    # remaining segments form closed loops; the walk consumes the closing
    # segment, so the last vertex already equals the first
    for seg in segments:
        if id(seg) in used:
            continue
        poly = walk(seg, seg[1])
        if _key(poly[-1]) != _key(poly[0]):
            poly.append(poly[0])
        polylines.append(poly)
    return polylines


def extract_contours(
    grid: np.ndarray, levels: list[float]
) -> list[tuple[float, list[Polyline]]]:
    """Isolines for each level; levels must be strictly increasing."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2 or grid.shape[0] < 2 or grid.shape[1] < 2:
        raise ValueError(f"grid must be at least 2x2, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid contains non-finite values")
    for a, b in zip(levels, levels[1:]):
        if not a < b:
            raise ValueError(f"levels must be strictly increasing, got {a} then {b}")
    lo, hi = float(grid.min()), float(grid.max())
    out: list[tuple[float, list[Polyline]]] = []
    for level in levels:
        if not lo <= level <= hi:
            out.append((level, []))
            continue
        segments: list[tuple[Point, Point]] = []
        for i in range(grid.shape[0] - 1):
            for j in range(grid.shape[1] - 1):
                segments.extend(_cell_segments(grid, i, j, level))
        out.append((level, _chain(segments)))
    return out


def bilinear(grid: np.ndarray, x: float, y: float) -> float:
    """Bilinear interpolation of the grid at index coordinates (x, y)."""
    gx, gy = grid.shape
    i = min(int(np.floor(x)), gx - 2)
    j = min(int(np.floor(y)), gy - 2)
    i, j = max(i, 0), max(j, 0)
    tx, ty = x - i, y - j
    return float(
        grid[i, j] * (1 - tx) * (1 - ty)
        + grid[i + 1, j] * tx * (1 - ty)
        + grid[i, j + 1] * (1 - tx) * ty
        + grid[i + 1, j + 1] * tx * ty
    )
