"""Static centered interval tree for stabbing and overlap queries.

Built once per dataset version from parallel lo/hi arrays (closed intervals);
`query` returns the indices of every interval overlapping a closed query
interval. Center-stored intervals are kept sorted by lo ascending and hi
descending so one-sided queries take a prefix instead of a scan.
"""

from __future__ import annotations

import numpy as np

_LEAF_SIZE = 16


class _Node:
    __slots__ = ("center", "left", "right", "by_lo", "by_lo_ids", "by_hi", "by_hi_ids",
                 "leaf_los", "leaf_his", "leaf_ids")

    def __init__(self) -> None:
        self.center = 0.0
        self.left = None
        self.right = None
        self.by_lo = None
        self.by_lo_ids = None
        self.by_hi = None
        self.by_hi_ids = None
        self.leaf_los = None
        self.leaf_his = None
        self.leaf_ids = None


def _build(los: np.ndarray, his: np.ndarray, ids: np.ndarray) -> _Node | None:
    if ids.size == 0:
        return None
    node = _Node()
    if ids.size <= _LEAF_SIZE:
        node.leaf_los, node.leaf_his, node.leaf_ids = los, his, ids
        return node
    node.center = float(np.median(np.concatenate([los, his])))
    left_mask = his < node.center
    right_mask = los > node.center
    center_mask = ~(left_mask | right_mask)
    node.left = _build(los[left_mask], his[left_mask], ids[left_mask])
    node.right = _build(los[right_mask], his[right_mask], ids[right_mask])
    c_los, c_his, c_ids = los[center_mask], his[center_mask], ids[center_mask]
    lo_order = np.argsort(c_los, kind="stable")
    hi_order = np.argsort(-c_his, kind="stable")
    node.by_lo = c_los[lo_order]
    node.by_lo_ids = c_ids[lo_order]
    node.by_hi = c_his[hi_order]
    node.by_hi_ids = c_ids[hi_order]
    return node


class IntervalTree:
    """Overlap index over closed intervals [lo_i, hi_i]."""

    def __init__(self, los, his, ids=None):
        los = np.asarray(los, dtype=np.float64)
        his = np.asarray(his, dtype=np.float64)
        if los.shape != his.shape:
            raise ValueError("lo/hi arrays differ in shape")
        if np.any(los > his):
            bad = int(np.argmax(los > his))
            raise ValueError(f"interval {bad} has lo > hi")
        if ids is None:
            ids = np.arange(los.size, dtype=np.intp)
        else:
            ids = np.asarray(ids, dtype=np.intp)
        self._size = int(los.size)
        self._root = _build(los, his, ids)

    def __len__(self) -> int:
        return self._size

    def query(self, qlo: float, qhi: float) -> np.ndarray:
        """Indices of intervals with lo <= qhi and hi >= qlo (inclusive overlap)."""
        if qlo > qhi:
            raise ValueError(f"query interval has lo > hi: [{qlo}, {qhi}]")
        parts: list[np.ndarray] = []
        self._collect(self._root, qlo, qhi, parts)
        if not parts:
            return np.empty(0, dtype=np.intp)
        return np.concatenate(parts)

    def _collect(self, node: _Node | None, qlo: float, qhi: float, parts: list) -> None:
        if node is None:
            return
        if node.leaf_ids is not None:
            mask = (node.leaf_los <= qhi) & (node.leaf_his >= qlo)
            if mask.any():
                parts.append(node.leaf_ids[mask])
            return
        if qhi < node.center:
            # center intervals contain node.center > qhi, so hi >= qlo holds
            cut = int(np.searchsorted(node.by_lo, qhi, side="right"))
            if cut:
                parts.append(node.by_lo_ids[:cut])
            self._collect(node.left, qlo, qhi, parts)
        elif qlo > node.center:
            cut = int(np.searchsorted(-node.by_hi, -qlo, side="right"))
            if cut:
                parts.append(node.by_hi_ids[:cut])
            self._collect(node.right, qlo, qhi, parts)
        else:
            if node.by_lo_ids is not None and node.by_lo_ids.size:
                parts.append(node.by_lo_ids)
            self._collect(node.left, qlo, qhi, parts)
            self._collect(node.right, qlo, qhi, parts)
