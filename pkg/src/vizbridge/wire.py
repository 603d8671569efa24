"""JSON wire codec for data sources.

Documents are UTF-8 JSON with pinned field names::

    {"name": ..., "columns": [{"name": ..., "type": ..., "order"?: [...]}],
     "rows": [[...], ...]}

Rows are row-major; numbers keep full precision via the shortest
round-tripping decimal form; missing cells encode as ``null``. The codec is
lossless on the DataSource value domain.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from vizbridge.datamodel import (
    CATEGORICAL,
    QUANTITATIVE,
    Column,
    ColumnType,
    DataSource,
    ordered_categorical,
)

_TYPE_TAGS = {"quantitative": QUANTITATIVE, "categorical": CATEGORICAL}


class WireSchemaError(Exception):
    """Malformed wire document; ``path`` points at the offending node."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _column_doc(col: Column) -> dict[str, Any]:
    doc: dict[str, Any] = {"name": col.name, "type": col.type.kind}
    if col.type.kind == "ordered":
        doc["order"] = list(col.type.order or ())
    return doc


def _rows_payload(ds: DataSource) -> list[list[Any]]:
    arrays = [ds.column_values(i) for i in range(ds.n_cols)]
    if ds.n_cols == 0 or ds.n_rows == 0:
        return [[] for _ in range(ds.n_rows)]
    if all(isinstance(a, np.ndarray) for a in arrays):
        stacked = np.column_stack(arrays)
        if not np.any(np.isnan(stacked)):
            return stacked.tolist()
        cells = np.where(np.isnan(stacked), None, stacked.astype(object))
        return cells.tolist()
    out = []
    for r in range(ds.n_rows):
        row = []
        for a in arrays:
            if isinstance(a, np.ndarray):
                v = float(a[r])
                row.append(None if math.isnan(v) else v)
            else:
                row.append(a[r])
        out.append(row)
    return out


def datasource_to_doc(ds: DataSource) -> dict[str, Any]:
    return {
        "name": ds.name,
        "columns": [_column_doc(c) for c in ds.columns],
        "rows": _rows_payload(ds),
    }


def serialize_datasource(ds: DataSource) -> bytes:
    doc = datasource_to_doc(ds)
    return json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")


def _parse_column(doc: Any, path: str) -> Column:
    if not isinstance(doc, dict):
        raise WireSchemaError(path, "column must be an object")
    name = doc.get("name")
    if not isinstance(name, str):
        raise WireSchemaError(f"{path}.name", "column name must be a string")
    tag = doc.get("type")
    if tag == "ordered":
        order = doc.get("order")
        if not isinstance(order, list) or not all(isinstance(o, str) for o in order):
            raise WireSchemaError(f"{path}.order", "ordered type requires a string list")
        try:
            ctype: ColumnType = ordered_categorical(order)
        except Exception as exc:
            raise WireSchemaError(f"{path}.order", str(exc)) from exc
    elif tag in _TYPE_TAGS:
        ctype = _TYPE_TAGS[tag]
    else:
        raise WireSchemaError(f"{path}.type", f"unknown column type tag {tag!r}")
    return Column(name, ctype)


def _quantitative_cells(rows: list, col: int, p: int) -> np.ndarray:
    out = np.empty(len(rows), dtype=np.float64)
    for r, row in enumerate(rows):
        v = row[col]
        if v is None:
            out[r] = math.nan
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            if not math.isfinite(v):
                raise WireSchemaError(f"rows[{r}][{col}]", "non-finite number")
            out[r] = float(v)
        else:
            raise WireSchemaError(
                f"rows[{r}][{col}]", f"expected number or null, found {type(v).__name__}"
            )
    return out


def _categorical_cells(rows: list, col: int) -> list[str | None]:
    out: list[str | None] = []
    for r, row in enumerate(rows):
        v = row[col]
        if v is None or isinstance(v, str):
            out.append(v)
        else:
            raise WireSchemaError(
                f"rows[{r}][{col}]", f"expected string or null, found {type(v).__name__}"
            )
    return out


def doc_to_datasource(doc: Any) -> DataSource:
    if not isinstance(doc, dict):
        raise WireSchemaError("$", "document must be an object")
    name = doc.get("name")
    if not isinstance(name, str):
        raise WireSchemaError("name", "missing or non-string source name")
    columns_doc = doc.get("columns")
    if not isinstance(columns_doc, list):
        raise WireSchemaError("columns", "missing column list")
    columns = [_parse_column(c, f"columns[{i}]") for i, c in enumerate(columns_doc)]

    rows = doc.get("rows")
    if not isinstance(rows, list):
        raise WireSchemaError("rows", "missing row list")
    p = len(columns)
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise WireSchemaError(f"rows[{r}]", "row must be a list")
        if len(row) != p:
            raise WireSchemaError(f"rows[{r}]", f"expected {p} cells, found {len(row)}")

    column_data: list[np.ndarray | list] = []
    if rows and all(c.type.is_quantitative for c in columns):
        # Strict-check one row cheaply; the bulk conversion below rejects
        # nulls wholesale and the slow path pins down the offending cell.
        for i in range(p):
            _quantitative_cells(rows[:1], i, p)
        try:
            matrix = np.asarray(rows, dtype=np.float64)
            if not np.all(np.isfinite(matrix)):
                raise TypeError
            column_data = [np.ascontiguousarray(matrix[:, i]) for i in range(p)]
        except (TypeError, ValueError):
            column_data = [_quantitative_cells(rows, i, p) for i in range(p)]
    else:
        for i, col in enumerate(columns):
            if col.type.is_quantitative:
                column_data.append(_quantitative_cells(rows, i, p))
            else:
                column_data.append(_categorical_cells(rows, i))
    if not rows:
        column_data = [
            np.empty(0, dtype=np.float64) if c.type.is_quantitative else []
            for c in columns
        ]
    return DataSource(name, columns, column_data)


def _reject_constant(token: str) -> float:
    raise WireSchemaError("$", f"non-finite literal {token!r} is not valid on the wire")


def deserialize_datasource(data: bytes) -> DataSource:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise WireSchemaError("$", f"document is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise WireSchemaError("$", f"invalid JSON: {exc}") from exc
    return doc_to_datasource(doc)
