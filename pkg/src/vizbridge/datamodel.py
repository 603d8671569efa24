"""Typed columnar data sources: CSV ingestion, type inference, and merging.

A :class:`DataSource` is an immutable n-rows-by-p-columns table whose columns
are either quantitative (finite floats, NaN for missing) or categorical
(string labels, ``None`` for missing). Storage is column-major so per-axis
queries touch contiguous arrays.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MISSING_TOKENS = ("", "NaN")


class DataError(Exception):
    """Base error for data-source construction and manipulation."""


class CsvError(DataError):
    pass


class EncodingError(DataError):
    pass


class MergeError(DataError):
    pass


@dataclass(frozen=True)
class ColumnType:
    """Column type tag: quantitative, categorical, or ordered categorical.

    Ordered categorical carries the explicit category order; it is never
    inferred, only declared.
    """

    kind: str
    order: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("quantitative", "categorical", "ordered"):
            raise DataError(f"unknown column type kind {self.kind!r}")
        if self.kind == "ordered":
            if not self.order:
                raise DataError("ordered categorical requires a non-empty order list")
            if len(set(self.order)) != len(self.order):
                raise DataError("ordered categorical order list has duplicates")
        elif self.order is not None:
            raise DataError(f"column type {self.kind!r} takes no order list")

    @property
    def is_quantitative(self) -> bool:
        return self.kind == "quantitative"


QUANTITATIVE = ColumnType("quantitative")
CATEGORICAL = ColumnType("categorical")


def ordered_categorical(order: Iterable[str]) -> ColumnType:
    return ColumnType("ordered", tuple(order))


@dataclass(frozen=True)
class Column:
    name: str
    type: ColumnType


_ds_counter = itertools.count()
_ds_lock = threading.Lock()


def _next_source_id() -> str:
    with _ds_lock:
        return f"ds{next(_ds_counter)}"


def parse_quantitative(text: str) -> float | None:
    """Parse one CSV cell as a finite number; None when missing; raises ValueError otherwise."""
    stripped = text.strip()
    if stripped in MISSING_TOKENS:
        return None
    if "_" in stripped:
        raise ValueError(f"not a decimal number: {text!r}")
    value = float(stripped)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def infer_column_type(values: Sequence[str]) -> ColumnType:
    """Quantitative iff every non-missing value parses as a finite decimal number.

    The empty list infers quantitative (the permissive default for numeric
    pipelines). Ordered categorical is never inferred.
    """
    for value in values:
        try:
            parse_quantitative(value)
        except ValueError:
            return CATEGORICAL
    return QUANTITATIVE


class DataSource:
    """Immutable typed columnar table shipped between the SCE and the kernel.

    Quantitative columns are float64 arrays with NaN marking missing cells;
    categorical columns are label lists with ``None`` marking missing.
    """

    def __init__(
        self,
        name: str,
        columns: Sequence[Column],
        column_data: Sequence[np.ndarray | Sequence[str | None]],
        source_id: str | None = None,
    ):
        if len(columns) != len(column_data):
            raise DataError("column list and column data differ in length")
        names = [c.name for c in columns]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DataError(f"duplicate column name {dup!r}")

        lengths = {len(d) for d in column_data}
        if len(lengths) > 1:
            raise DataError(f"columns have differing lengths {sorted(lengths)}")
        self._n = lengths.pop() if lengths else 0

        stored: list[np.ndarray | tuple] = []
        for col, data in zip(columns, column_data):
            if col.type.is_quantitative:
                arr = np.asarray(data, dtype=np.float64)
                if np.any(np.isinf(arr)):
                    raise DataError(f"non-finite value in quantitative column {col.name!r}")
                arr.setflags(write=False)
                stored.append(arr)
            else:
                stored.append(tuple(data))
        self.id = source_id if source_id is not None else _next_source_id()
        self.name = name
        self.columns = tuple(columns)
        self._data = tuple(stored)
        self._index = {c.name: i for i, c in enumerate(self.columns)}

    @property
    def n_rows(self) -> int:
        return self._n

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DataError(f"unknown column {name!r}") from None

    def column_type(self, name: str) -> ColumnType:
        return self.columns[self.column_index(name)].type

    def column_values(self, key: str | int) -> np.ndarray | tuple:
        """Column payload: float64 array (quantitative) or label tuple (categorical)."""
        idx = key if isinstance(key, int) else self.column_index(key)
        return self._data[idx]

    def cell(self, row: int, col: int):
        data = self._data[col]
        if isinstance(data, np.ndarray):
            v = float(data[row])
            return None if math.isnan(v) else v
        return data[row]

    def row(self, row: int) -> tuple:
        return tuple(self.cell(row, c) for c in range(self.n_cols))

    def iter_rows(self) -> Iterable[tuple]:
        for r in range(self._n):
            yield self.row(r)

    def equals_cells(self, other: "DataSource") -> bool:
        """Cell-identical comparison ignoring ids."""
        if self.name != other.name or self.columns != other.columns:
            return False
        if self.n_rows != other.n_rows:
            return False
        for a, b in zip(self._data, other._data):
            if isinstance(a, np.ndarray) != isinstance(b, np.ndarray):
                return False
            if isinstance(a, np.ndarray):
                if not np.array_equal(a, b, equal_nan=True):
                    return False
            elif a != b:
                return False
        return True

    def __repr__(self) -> str:
        return f"DataSource({self.name!r}, {self.n_rows}x{self.n_cols})"


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"input is not valid UTF-8: {exc}") from exc


def load_csv(
    data: bytes,
    delimiter: str = ",",
    header: bool = True,
    name: str = "csv",
) -> DataSource:
    """Parse RFC-4180-style CSV bytes into a DataSource with inferred column types.

    Empty fields and the literal ``NaN`` are missing values; missing cells do
    not flip an otherwise-quantitative column to categorical.
    """
    text = _decode(data)
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    rows = [r for r in reader if r]  # blank lines are not records
    if not rows:
        raise CsvError("empty input: no header or data lines")

    if header:
        names = [h.strip() for h in rows[0]]
        body = rows[1:]
    else:
        names = [f"col{i + 1}" for i in range(len(rows[0]))]
        body = rows

    p = len(names)
    for lineno, row in enumerate(body, start=2 if header else 1):
        if len(row) != p:
            raise CsvError(
                f"line {lineno}: expected {p} fields, found {len(row)}"
            )

    texts = [[row[c] for row in body] for c in range(p)]
    columns: list[Column] = []
    column_data: list[np.ndarray | list] = []
    for cname, cells in zip(names, texts):
        ctype = infer_column_type(cells)
        columns.append(Column(cname, ctype))
        if ctype.is_quantitative:
            parsed = [parse_quantitative(v) for v in cells]
            column_data.append(
                np.array([math.nan if v is None else v for v in parsed], dtype=np.float64)
            )
        else:
            column_data.append([v if v.strip() not in MISSING_TOKENS else None for v in cells])
    return DataSource(name, columns, column_data)


def merge(a: DataSource, b: DataSource, mode: str) -> DataSource:
    """Concatenate two sources by rows (same schema) or columns (same n, disjoint names)."""
    if mode == "rows":
        if a.n_cols != b.n_cols:
            raise MergeError(f"column count mismatch: {a.n_cols} vs {b.n_cols}")
        for ca, cb in zip(a.columns, b.columns):
            if ca.name != cb.name:
                raise MergeError(f"column name mismatch at {ca.name!r} vs {cb.name!r}")
            if ca.type != cb.type:
                raise MergeError(f"column type mismatch at {ca.name!r}")
        column_data = []
        for i in range(a.n_cols):
            da, db = a.column_values(i), b.column_values(i)
            if isinstance(da, np.ndarray):
                column_data.append(np.concatenate([da, db]))
            else:
                column_data.append(da + db)
        return DataSource(f"{a.name}+{b.name}", a.columns, column_data)
    if mode == "columns":
        if a.n_rows != b.n_rows:
            raise MergeError(f"row count mismatch: {a.n_rows} vs {b.n_rows}")
        overlap = set(a.column_names) & set(b.column_names)
        if overlap:
            first = next(n for n in a.column_names if n in overlap)
            raise MergeError(f"column name collision at {first!r}")
        columns = a.columns + b.columns
        column_data = [a.column_values(i) for i in range(a.n_cols)]
        column_data += [b.column_values(i) for i in range(b.n_cols)]
        return DataSource(f"{a.name}+{b.name}", columns, column_data)
    raise MergeError(f"unknown merge mode {mode!r}")


@dataclass(frozen=True)
class RowIndexSet:
    """Sorted duplicate-free row indices, the unit of selection and query results."""

    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        idx = self.indices
        for i, v in enumerate(idx):
            if v < 0:
                raise DataError(f"negative row index {v}")
            if i and idx[i - 1] >= v:
                raise DataError("row indices must be strictly increasing")

    @classmethod
    def of(cls, values: Iterable[int], n: int | None = None) -> "RowIndexSet":
        idx = tuple(sorted({int(v) for v in values}))
        if n is not None and idx and idx[-1] >= n:
            raise DataError(f"row index {idx[-1]} out of range for n={n}")
        return cls(idx)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "RowIndexSet":
        return cls(tuple(int(i) for i in np.flatnonzero(mask)))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, value: int) -> bool:
        return value in set(self.indices)

    def union(self, other: "RowIndexSet") -> "RowIndexSet":
        return RowIndexSet.of(set(self.indices) | set(other.indices))

    def intersect(self, other: "RowIndexSet") -> "RowIndexSet":
        return RowIndexSet.of(set(self.indices) & set(other.indices))

    def subtract(self, other: "RowIndexSet") -> "RowIndexSet":
        return RowIndexSet.of(set(self.indices) - set(other.indices))

    def validate_for(self, n: int) -> None:
        if self.indices and self.indices[-1] >= n:
            raise DataError(f"row index {self.indices[-1]} out of range for n={n}")
