"""Named selection groups, set algebra, and linked-figure propagation.

A group is a named row subset of one data source with a color and an alpha
level; brushing creates groups, linking re-highlights the same rows in every
live figure bound to the same source. Z-order is creation order; the default
palette cycles eight fixed colors at alpha 0.5.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from vizbridge.datamodel import DataSource, RowIndexSet

PALETTE: tuple[tuple[int, int, int], ...] = (
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
)
DEFAULT_ALPHA = 0.5
NEUTRAL_GRAY = (136, 136, 136)


class SelectionError(Exception):
    pass


def color_hex(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


@dataclass(frozen=True)
class SelectionGroup:
    id: str
    name: str
    source: str  # DataSource id
    rows: RowIndexSet
    color: tuple[int, int, int]
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise SelectionError(f"alpha must be in (0, 1], got {self.alpha}")


def combine(a: SelectionGroup, b: SelectionGroup, op: str) -> RowIndexSet:
    """Set algebra over two groups of the same source."""
    if a.source != b.source:
        raise SelectionError(
            f"cannot combine groups of different sources {a.source!r} and {b.source!r}"
        )
    if op == "union":
        return a.rows.union(b.rows)
    if op == "intersect":
        return a.rows.intersect(b.rows)
    if op == "subtract":
        return a.rows.subtract(b.rows)
    raise SelectionError(f"unknown combine op {op!r}")


class SelectionRegistry:
    """Creation-ordered groups per source; names unique within a source."""

    def __init__(self) -> None:
        self._groups: dict[str, SelectionGroup] = {}
        self._order: list[str] = []
        self._counter = itertools.count()

    def create_group(
        self,
        source: DataSource,
        rows: RowIndexSet,
        name: str,
        color: tuple[int, int, int] | None = None,
        alpha: float | None = None,
    ) -> SelectionGroup:
        rows.validate_for(source.n_rows)
        if any(
            g.name == name and g.source == source.id for g in self._groups.values()
        ):
            raise SelectionError(f"duplicate group name {name!r} for source {source.name!r}")
        seq = next(self._counter)
        group = SelectionGroup(
            id=f"g{seq}",
            name=name,
            source=source.id,
            rows=rows,
            color=color if color is not None else PALETTE[seq % len(PALETTE)],
            alpha=alpha if alpha is not None else DEFAULT_ALPHA,
        )
        self._groups[group.id] = group
        self._order.append(group.id)
        return group

    def delete_group(self, group_id: str) -> None:
        self._groups.pop(group_id, None)
        if group_id in self._order:
            self._order.remove(group_id)

    def find(self, source_id: str, name: str) -> SelectionGroup | None:
        for gid in self._order:
            g = self._groups[gid]
            if g.source == source_id and g.name == name:
                return g
        return None

    def get(self, group_id: str) -> SelectionGroup:
        try:
            return self._groups[group_id]
        except KeyError:
            raise SelectionError(f"unknown group {group_id!r}") from None

    def groups_for(self, source_id: str) -> list[SelectionGroup]:
        """Groups on a source in z-order (creation order)."""
        return [self._groups[g] for g in self._order if self._groups[g].source == source_id]


@dataclass(frozen=True)
class Notification:
    figure_id: str
    group_id: str
    group_name: str
    source: str
    rows: RowIndexSet
    color: tuple[int, int, int]
    alpha: float


@dataclass
class _FigureLink:
    figure_id: str
    source: str
    alive: bool = True
    visible_groups: list[str] = field(default_factory=list)


class LinkRegistry:
    """Live figures per data source and their currently visible groups."""

    def __init__(self) -> None:
        self._figures: dict[str, _FigureLink] = {}

    def register_figure(self, figure_id: str, source_id: str) -> None:
        self._figures[figure_id] = _FigureLink(figure_id, source_id)

    def mark_dead(self, figure_id: str) -> None:
        if figure_id in self._figures:
            self._figures[figure_id].alive = False

    def figures_on(self, source_id: str) -> list[str]:
        return [
            f.figure_id
            for f in self._figures.values()
            if f.alive and f.source == source_id
        ]

    def is_alive(self, figure_id: str) -> bool:
        link = self._figures.get(figure_id)
        return bool(link and link.alive)

    def visible_groups(self, figure_id: str) -> tuple[str, ...]:
        link = self._figures.get(figure_id)
        return tuple(link.visible_groups) if link else ()

    def propagate(self, group: SelectionGroup) -> list[Notification]:
        """One notification per live same-source figure; dead figures are pruned."""
        dead = [fid for fid, f in self._figures.items() if not f.alive]
        for fid in dead:
            del self._figures[fid]
        notifications = []
        for fid in self.figures_on(group.source):
            link = self._figures[fid]
            if group.id not in link.visible_groups:
                link.visible_groups.append(group.id)
            notifications.append(
                Notification(
                    figure_id=fid,
                    group_id=group.id,
                    group_name=group.name,
                    source=group.source,
                    rows=group.rows,
                    color=group.color,
                    alpha=group.alpha,
                )
            )
        return notifications
