import numpy as np
import pytest

from vizbridge.datamodel import QUANTITATIVE, Column, DataSource, RowIndexSet
from vizbridge.selection import (
    DEFAULT_ALPHA,
    PALETTE,
    LinkRegistry,
    SelectionError,
    SelectionRegistry,
    combine,
)


@pytest.fixture
def source():
    return DataSource("s", [Column("a", QUANTITATIVE)], [np.arange(10.0)])


@pytest.fixture
def other_source():
    return DataSource("t", [Column("a", QUANTITATIVE)], [np.arange(10.0)])


class TestGroups:
    def test_create_from_rows(self, source):
        reg = SelectionRegistry()
        group = reg.create_group(source, RowIndexSet.of([1, 4, 2]), "brush1")
        assert group.rows.indices == (1, 2, 4)
        assert group.color == PALETTE[0]
        assert group.alpha == DEFAULT_ALPHA

    def test_empty_group_allowed(self, source):
        reg = SelectionRegistry()
        group = reg.create_group(source, RowIndexSet(), "empty")
        assert len(group.rows) == 0

    def test_zero_alpha_rejected(self, source):
        reg = SelectionRegistry()
        with pytest.raises(SelectionError, match="alpha"):
            reg.create_group(source, RowIndexSet(), "g", alpha=0.0)

    def test_out_of_range_rows_rejected(self, source):
        reg = SelectionRegistry()
        with pytest.raises(Exception, match="range"):
            reg.create_group(source, RowIndexSet.of([99]), "g")

    def test_duplicate_name_within_source_rejected(self, source, other_source):
        reg = SelectionRegistry()
        reg.create_group(source, RowIndexSet(), "g")
        with pytest.raises(SelectionError, match="duplicate"):
            reg.create_group(source, RowIndexSet(), "g")
        reg.create_group(other_source, RowIndexSet(), "g")  # other source is fine

    def test_palette_cycles_in_creation_order(self, source):
        reg = SelectionRegistry()
        groups = [
            reg.create_group(source, RowIndexSet(), f"g{i}") for i in range(10)
        ]
        assert groups[0].color == PALETTE[0]
        assert groups[8].color == PALETTE[0]
        assert [g.color for g in groups[:8]] == list(PALETTE)

    def test_zorder_is_creation_order(self, source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet(), "a")
        b = reg.create_group(source, RowIndexSet(), "b")
        assert [g.id for g in reg.groups_for(source.id)] == [a.id, b.id]


class TestCombine:
    def test_union(self, source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet.of([1, 3]), "a")
        b = reg.create_group(source, RowIndexSet.of([2, 3]), "b")
        assert combine(a, b, "union").indices == (1, 2, 3)
        assert combine(a, b, "union") == combine(b, a, "union")

    def test_intersect_disjoint(self, source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet.of([1]), "a")
        b = reg.create_group(source, RowIndexSet.of([2]), "b")
        assert combine(a, b, "intersect").indices == ()
        assert combine(a, b, "intersect") == combine(b, a, "intersect")

    def test_subtract_self_is_empty(self, source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet.of([1, 2]), "a")
        assert combine(a, a, "subtract").indices == ()

    def test_subtract_union_intersect_recovers_a(self, source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet.of([1, 2, 5, 7]), "a")
        b = reg.create_group(source, RowIndexSet.of([2, 3, 7]), "b")
        recovered = combine(a, b, "subtract").union(a.rows.intersect(b.rows))
        assert recovered == a.rows

    def test_cross_source_rejected(self, source, other_source):
        reg = SelectionRegistry()
        a = reg.create_group(source, RowIndexSet.of([1]), "a")
        b = reg.create_group(other_source, RowIndexSet.of([1]), "b")
        with pytest.raises(SelectionError, match="different sources"):
            combine(a, b, "union")


class TestLinking:
    def test_propagate_reaches_same_source_figures_only(self, source, other_source):
        reg = SelectionRegistry()
        links = LinkRegistry()
        for fid in ("f1", "f2", "f3"):
            links.register_figure(fid, source.id)
        links.register_figure("f4", other_source.id)
        group = reg.create_group(source, RowIndexSet.of([1, 2]), "g")
        notes = links.propagate(group)
        assert sorted(n.figure_id for n in notes) == ["f1", "f2", "f3"]
        assert all(n.rows == group.rows for n in notes)

    def test_propagate_no_figures(self, source):
        reg = SelectionRegistry()
        links = LinkRegistry()
        group = reg.create_group(source, RowIndexSet(), "g")
        assert links.propagate(group) == []

    def test_repeat_propagate_still_delivers(self, source):
        reg = SelectionRegistry()
        links = LinkRegistry()
        links.register_figure("f1", source.id)
        group = reg.create_group(source, RowIndexSet.of([3]), "g")
        first = links.propagate(group)
        second = links.propagate(group)
        assert len(first) == len(second) == 1

    def test_linking_closure(self, source):
        reg = SelectionRegistry()
        links = LinkRegistry()
        links.register_figure("f1", source.id)
        links.register_figure("f2", source.id)
        group = reg.create_group(source, RowIndexSet.of([0, 9]), "g")
        links.propagate(group)
        for fid in ("f1", "f2"):
            assert group.id in links.visible_groups(fid)

    def test_dead_figures_pruned(self, source):
        reg = SelectionRegistry()
        links = LinkRegistry()
        links.register_figure("f1", source.id)
        links.register_figure("f2", source.id)
        links.mark_dead("f1")
        group = reg.create_group(source, RowIndexSet.of([1]), "g")
        notes = links.propagate(group)
        assert [n.figure_id for n in notes] == ["f2"]
        assert links.visible_groups("f1") == ()
