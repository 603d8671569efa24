import math

import numpy as np
import pytest

from vizbridge.datamodel import (
    CATEGORICAL,
    QUANTITATIVE,
    Column,
    CsvError,
    DataError,
    DataSource,
    EncodingError,
    MergeError,
    RowIndexSet,
    infer_column_type,
    load_csv,
    merge,
    ordered_categorical,
)


class TestInference:
    def test_all_numeric(self):
        assert infer_column_type(["1.5", "2", "3"]) == QUANTITATIVE

    def test_one_nonnumeric(self):
        assert infer_column_type(["1.5", "x"]) == CATEGORICAL

    def test_empty_list_defaults_quantitative(self):
        assert infer_column_type([]) == QUANTITATIVE

    def test_missing_tokens_do_not_flip(self):
        assert infer_column_type(["1", "", "NaN", "2"]) == QUANTITATIVE

    def test_nonfinite_text_is_categorical(self):
        assert infer_column_type(["1", "inf"]) == CATEGORICAL
        assert infer_column_type(["nan"]) == CATEGORICAL

    def test_underscored_number_is_categorical(self):
        assert infer_column_type(["1_0"]) == CATEGORICAL

    def test_order_insensitive(self):
        values = ["3", "x", "1", "", "7"]
        expected = infer_column_type(values)
        for perm in (values[::-1], sorted(values), values[2:] + values[:2]):
            assert infer_column_type(perm) == expected

    def test_ordered_categorical_requires_order(self):
        with pytest.raises(DataError):
            ordered_categorical([])
        with pytest.raises(DataError):
            ordered_categorical(["a", "a"])


class TestLoadCsv:
    def test_basic_inference(self):
        ds = load_csv(b"a,b\n1,x\n2,y")
        assert (ds.n_rows, ds.n_cols) == (2, 2)
        assert ds.column_type("a") == QUANTITATIVE
        assert ds.column_type("b") == CATEGORICAL
        assert ds.cell(0, 0) == 1.0
        assert ds.cell(1, 1) == "y"

    def test_header_only(self):
        ds = load_csv(b"a\n")
        assert (ds.n_rows, ds.n_cols) == (0, 1)

    def test_satellite_scale(self):
        names = ["X", "Y"] + [f"B{i}" for i in range(1, 8)]
        lines = [",".join(names)]
        for r in range(9000):
            lines.append(",".join(str((r * 31 + c * 7) % 997 / 10.0) for c in range(9)))
        ds = load_csv("\n".join(lines).encode())
        assert (ds.n_rows, ds.n_cols) == (9000, 9)
        assert all(ds.column_type(n) == QUANTITATIVE for n in names)

    def test_ragged_row_names_line(self):
        with pytest.raises(CsvError, match="line 3"):
            load_csv(b"a,b\n1,2\n3\n")

    def test_bad_encoding(self):
        with pytest.raises(EncodingError):
            load_csv(b"a\n\xff\xfe")

    def test_quoted_fields(self):
        ds = load_csv(b'a,b\n"1,5",x\n')
        assert ds.column_type("a") == CATEGORICAL
        assert ds.cell(0, 0) == "1,5"

    def test_missing_cells(self):
        ds = load_csv(b"a,b\n1,x\n,NaN\n2,")
        assert ds.column_type("a") == QUANTITATIVE
        assert ds.cell(1, 0) is None
        assert ds.cell(1, 1) is None
        assert ds.cell(2, 1) is None

    def test_blank_lines_skipped(self):
        ds = load_csv(b"a\n1\n\n2\n")
        assert ds.n_rows == 2

    def test_custom_delimiter(self):
        ds = load_csv(b"a;b\n1;2\n", delimiter=";")
        assert (ds.n_rows, ds.n_cols) == (1, 2)

    def test_no_header(self):
        ds = load_csv(b"1,2\n3,4\n", header=False)
        assert ds.column_names == ("col1", "col2")
        assert ds.n_rows == 2


class TestMerge:
    def _small(self, name, rows):
        cols = [Column("a", QUANTITATIVE), Column("b", CATEGORICAL)]
        a = np.array([r[0] for r in rows], dtype=float)
        b = [r[1] for r in rows]
        return DataSource(name, cols, [a, b])

    def test_rows_merge(self):
        x = self._small("x", [(1, "u"), (2, "v")])
        y = self._small("y", [(3, "w"), (4, "u"), (5, "v")])
        m = merge(x, y, "rows")
        assert (m.n_rows, m.n_cols) == (5, 2)
        assert m.columns == x.columns
        assert m.cell(4, 1) == "v"

    def test_columns_merge(self):
        left = DataSource("l", [Column("a", QUANTITATIVE)], [np.arange(4.0)])
        right = DataSource(
            "r",
            [Column("b", QUANTITATIVE), Column("c", QUANTITATIVE)],
            [np.arange(4.0), np.arange(4.0) * 2],
        )
        m = merge(left, right, "columns")
        assert (m.n_rows, m.n_cols) == (4, 3)

    def test_rows_merge_name_mismatch(self):
        x = self._small("x", [(1, "u")])
        bad = DataSource(
            "y", [Column("z", QUANTITATIVE), Column("b", CATEGORICAL)],
            [np.array([1.0]), ["u"]],
        )
        with pytest.raises(MergeError, match="'a'"):
            merge(x, bad, "rows")

    def test_columns_merge_collision(self):
        x = self._small("x", [(1, "u")])
        with pytest.raises(MergeError, match="'a'"):
            merge(x, x, "columns")

    def test_merge_does_not_mutate(self):
        x = self._small("x", [(1, "u"), (2, "v")])
        y = self._small("y", [(3, "w")])
        before = [x.row(r) for r in range(2)]
        merge(x, y, "rows")
        assert [x.row(r) for r in range(2)] == before


class TestDataSource:
    def test_duplicate_column_names_rejected(self):
        with pytest.raises(DataError, match="duplicate"):
            DataSource(
                "d",
                [Column("a", QUANTITATIVE), Column("a", QUANTITATIVE)],
                [np.array([1.0]), np.array([2.0])],
            )

    def test_ragged_columns_rejected(self):
        with pytest.raises(DataError):
            DataSource(
                "d",
                [Column("a", QUANTITATIVE), Column("b", QUANTITATIVE)],
                [np.array([1.0]), np.array([1.0, 2.0])],
            )

    def test_infinite_cell_rejected(self):
        with pytest.raises(DataError, match="non-finite"):
            DataSource("d", [Column("a", QUANTITATIVE)], [np.array([math.inf])])

    def test_ids_unique(self):
        a = DataSource("d", [], [])
        b = DataSource("d", [], [])
        assert a.id != b.id


class TestRowIndexSet:
    def test_of_sorts_and_dedups(self):
        assert RowIndexSet.of([3, 1, 3, 2]).indices == (1, 2, 3)

    def test_bounds_checked(self):
        with pytest.raises(DataError):
            RowIndexSet.of([5], n=5)
        with pytest.raises(DataError):
            RowIndexSet((-1,))

    def test_unsorted_rejected(self):
        with pytest.raises(DataError):
            RowIndexSet((2, 1))

    def test_set_algebra(self):
        a, b = RowIndexSet.of([1, 3]), RowIndexSet.of([2, 3])
        assert a.union(b).indices == (1, 2, 3)
        assert a.intersect(b).indices == (3,)
        assert a.subtract(a).indices == ()
