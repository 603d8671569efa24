"""Visualization kernel bridging scientific computing sessions and interactive plots.

Subpackages:

- ``datamodel`` / ``wire``: typed columnar data sources and their JSON wire codec
- ``gog``: lexer, parser, and compiler for the grammar-of-graphics script dialect
- ``parcoords``: parallel-coordinates geometry and indexed selection queries
- ``selection``: named selection groups, set algebra, and figure linking
- ``bridge``: the HTTP protocol server (handshake, eval/store, SSE, replies)
- ``mocksce``: scriptable stand-in for a scientific computing environment
- ``rendersvg``: deterministic SVG export
"""

from vizbridge.datamodel import (
    ColumnType,
    DataSource,
    RowIndexSet,
    infer_column_type,
    load_csv,
    merge,
)

__all__ = [
    "ColumnType",
    "DataSource",
    "RowIndexSet",
    "infer_column_type",
    "load_csv",
    "merge",
]
