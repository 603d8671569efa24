"""Kernel state and its single-coordinator command queue.

All mutations of kernel state (variables, figures, selection groups) run on
one coordinator thread consuming a serialized command queue; endpoint handler
threads submit commands and block for the result. Dataset swaps rebuild the
affected figures' layouts and indexes before the command completes, so
readers never observe a half-published index.
"""

from __future__ import annotations

import queue
import threading
from dataclasses import dataclass
from typing import Any

from vizbridge.bridge.scebackend import ArithmeticSce, SceBackend, UnsupportedExpression
from vizbridge.datamodel import DataSource, RowIndexSet
from vizbridge.gog import compile_scene, parse
from vizbridge.gog.compiler import CompileError, scene_to_doc
from vizbridge.gog.lexer import LexError
from vizbridge.gog.parser import ParseError
from vizbridge.parcoords import (
    AxisLayout,
    PairIndex,
    QueryError,
    axis_interval_query,
    brush_segment_query,
    layout as build_layout,
    slope_query,
)
from vizbridge.selection import (
    LinkRegistry,
    SelectionError,
    SelectionRegistry,
    color_hex,
)
from vizbridge.wire import WireSchemaError, doc_to_datasource


class KernelError(Exception):
    """Kernel-level failure carrying a machine-readable kind."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


@dataclass
class Figure:
    id: str
    name: str
    source_name: str
    kind: str  # "parcoords" | "gog"
    owner: int
    axes: tuple[str, ...] = ()
    script: str = ""
    layout: AxisLayout | None = None
    index: PairIndex | None = None
    scene_doc: dict | None = None


@dataclass(frozen=True)
class KernelEvent:
    """Outbound notification the transport layer turns into SSE sends."""

    command: str
    payload: dict[str, Any]


def _rows_payload(layout: AxisLayout) -> list[list[float | None]]:
    out: list[list[float | None]] = []
    for r in range(layout.n_rows):
        row = []
        for i in range(layout.n_axes):
            v = layout.normalized[r, i]
            row.append(None if v != v else float(v))  # NaN check
        out.append(row)
    return out


class Kernel:
    def __init__(self, sce_backend: SceBackend | None = None):
        self._backend = sce_backend if sce_backend is not None else ArithmeticSce()
        self._variables: dict[str, Any] = {}
        self._figures: dict[str, Figure] = {}
        self._figure_seq = 0
        self._selections = SelectionRegistry()
        self._links = LinkRegistry()
        self._sessions: dict[int, bool] = {}
        self._queue: queue.Queue = queue.Queue()
        self._coordinator = threading.Thread(
            target=self._run, name="kernel-coordinator", daemon=True
        )
        self._coordinator.start()

    # -- command queue ------------------------------------------------------

    def _run(self) -> None:
        while True:
            item = self._queue.get()
            if item is None:
                return
            fn, box, done = item
            try:
                box["result"] = fn()
            except BaseException as exc:  # surfaced to the submitting thread
                box["error"] = exc
            done.set()

    def submit(self, fn):
        box: dict[str, Any] = {}
        done = threading.Event()
        self._queue.put((fn, box, done))
        done.wait()
        if "error" in box:
            raise box["error"]
        return box["result"]

    def close(self) -> None:
        self._queue.put(None)
        self._coordinator.join(timeout=2)

    # -- public commands (each serialized through the coordinator) ----------

    def connect(self, dvp_id: int) -> None:
        self.submit(lambda: self._sessions.__setitem__(dvp_id, True))

    def disconnect(self, dvp_id: int) -> None:
        def run():
            self._sessions[dvp_id] = False
            for fig in self._figures.values():
                if fig.owner == dvp_id:
                    self._links.mark_dead(fig.id)
        self.submit(run)

    def eval(self, expression: str) -> int:
        def run():
            try:
                return self._backend.eval(expression)
            except UnsupportedExpression as exc:
                raise KernelError("unsupported", str(exc)) from exc
        return self.submit(run)

    def fetch(self, name: str) -> Any:
        def run():
            if name not in self._variables:
                raise KernelError("unbound", f"no variable named {name!r}")
            return self._variables[name]
        return self.submit(run)

    def store(self, dvp_id: int, name: str, payload: Any) -> tuple[dict, list[KernelEvent]]:
        """Bind a dataset, scalar, figure, or selection; returns (reply, events)."""
        return self.submit(lambda: self._store(dvp_id, name, payload))

    def variable_names(self) -> list[str]:
        return self.submit(lambda: sorted(self._variables))

    def bind(self, name: str, value: Any) -> None:
        """Directly bind a variable (server-side preloads)."""
        self.submit(lambda: self._variables.__setitem__(name, value))

    def figure(self, figure_id: str) -> Figure:
        def run():
            if figure_id not in self._figures:
                raise KernelError("unknown-figure", f"no figure {figure_id!r}")
            return self._figures[figure_id]
        return self.submit(run)

    def group_rows(self, source_name: str, group_name: str) -> tuple[int, ...]:
        def run():
            ds = self._dataset(source_name)
            group = self._selections.find(ds.id, group_name)
            if group is None:
                raise KernelError("unbound", f"no group {group_name!r} on {source_name!r}")
            return group.rows.indices
        return self.submit(run)

    # -- store dispatch (coordinator thread) --------------------------------

    def _store(self, dvp_id: int, name: str, payload: Any) -> tuple[dict, list[KernelEvent]]:
        if isinstance(payload, dict) and "columns" in payload and "rows" in payload:
            return self._store_dataset(name, payload)
        if isinstance(payload, dict) and "figure" in payload:
            return self._store_figure(dvp_id, name, payload["figure"])
        if isinstance(payload, dict) and "selection" in payload:
            return self._store_selection(name, payload["selection"])
        if isinstance(payload, (int, float, str)) and not isinstance(payload, bool):
            self._variables[name] = payload
            return {"bound": name}, []
        if isinstance(payload, list) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in payload
        ):
            self._variables[name] = sorted(set(payload))
            return {"bound": name}, []
        raise KernelError("type", f"cannot store payload of type {type(payload).__name__}")

    def _dataset(self, name: str) -> DataSource:
        value = self._variables.get(name)
        if value is None:
            raise KernelError("unbound", f"no variable named {name!r}")
        if not isinstance(value, DataSource):
            raise KernelError("type", f"variable {name!r} is not a data source")
        return value

    def _store_dataset(self, name: str, doc: dict) -> tuple[dict, list[KernelEvent]]:
        try:
            ds = doc_to_datasource({**doc, "name": name})
        except WireSchemaError as exc:
            raise KernelError("schema", str(exc)) from exc
        self._variables[name] = ds
        # dataset swap: republish every live figure on this source atomically
        for fig in self._figures.values():
            if fig.source_name == name and self._links.is_alive(fig.id):
                self._rebuild_figure(fig, ds)
        return {"bound": name, "n": ds.n_rows, "p": ds.n_cols}, []

    def _rebuild_figure(self, fig: Figure, ds: DataSource) -> None:
        if fig.kind == "parcoords":
            lay = build_layout(ds, list(fig.axes), d=1.0)
            fig.layout = lay
            fig.index = PairIndex(lay, ds)
        else:
            fig.scene_doc = scene_to_doc(compile_scene(parse(fig.script), ds))
        self._links.register_figure(fig.id, ds.id)

    def _store_figure(self, dvp_id: int, name: str, doc: Any) -> tuple[dict, list[KernelEvent]]:
        if not isinstance(doc, dict):
            raise KernelError("schema", "figure payload must be an object")
        source_name = doc.get("source")
        if not isinstance(source_name, str):
            raise KernelError("schema", "figure.source: missing source variable name")
        ds = self._dataset(source_name)
        kind = doc.get("kind")
        self._figure_seq += 1
        fig = Figure(
            id=f"fig{self._figure_seq}",
            name=name,
            source_name=source_name,
            kind=kind if isinstance(kind, str) else "",
            owner=dvp_id,
        )
        if kind == "parcoords":
            axes = doc.get("axes")
            if axes is None:
                axes = [c.name for c in ds.columns if c.type.is_quantitative]
            if not isinstance(axes, list) or not all(isinstance(a, str) for a in axes):
                raise KernelError("schema", "figure.axes: must be a list of column names")
            try:
                lay = build_layout(ds, axes, d=1.0)
            except Exception as exc:
                raise KernelError("compile", str(exc)) from exc
            fig.axes = tuple(axes)
            fig.layout = lay
            fig.index = PairIndex(lay, ds)
            event_payload = {
                "figure": fig.id,
                "kind": "parcoords",
                "source": source_name,
                "axes": list(axes),
                "n": lay.n_rows,
                "ranges": [list(r) for r in lay.ranges],
                "rows": _rows_payload(lay),
            }
        elif kind == "gog":
            script = doc.get("script")
            if not isinstance(script, str):
                raise KernelError("schema", "figure.script: missing script text")
            try:
                scene = compile_scene(parse(script), ds)
            except (ParseError, LexError, CompileError) as exc:
                raise KernelError("compile", str(exc)) from exc
            fig.script = script
            fig.scene_doc = scene_to_doc(scene)
            event_payload = {
                "figure": fig.id,
                "kind": "gog",
                "source": source_name,
                "scene": fig.scene_doc,
            }
        else:
            raise KernelError("schema", f"figure.kind: unknown kind {kind!r}")
        self._figures[fig.id] = fig
        self._links.register_figure(fig.id, ds.id)
        events = [KernelEvent("figure.add", event_payload)]
        return {"figure": fig.id}, events

    def _resolve_rows(self, sel: dict, ds: DataSource, fig: Figure | None) -> RowIndexSet:
        if "rows" in sel:
            rows = sel["rows"]
            if not isinstance(rows, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in rows
            ):
                raise KernelError("schema", "selection.rows: must be a list of integers")
            try:
                return RowIndexSet.of(rows, n=ds.n_rows)
            except Exception as exc:
                raise KernelError("type", str(exc)) from exc
        if "query" in sel:
            if fig is None or fig.layout is None or fig.index is None:
                raise KernelError(
                    "schema", "selection.query requires a parcoords figure reference"
                )
            return self._run_query(sel["query"], fig, ds)
        raise KernelError("schema", "selection: needs rows or query")

    def _run_query(self, q: Any, fig: Figure, ds: DataSource) -> RowIndexSet:
        if not isinstance(q, dict):
            raise KernelError("schema", "query must be an object")
        kind = q.get("kind")
        lay, idx = fig.layout, fig.index
        assert lay is not None and idx is not None
        try:
            if kind == "axis_interval":
                axis = int(q["axis"])
                lo, hi = float(q["lo"]), float(q["hi"])
                if q.get("units", "data") == "normalized":
                    rlo, rhi = lay.ranges[axis]
                    lo = rlo + lo * (rhi - rlo)
                    hi = rlo + hi * (rhi - rlo)
                return axis_interval_query(lay, ds, axis, (lo, hi), index=idx)
            if kind == "segment_brush":
                pair = int(q["pair"])
                x = float(q["x"])
                return brush_segment_query(
                    lay, ds, pair, (x, (float(q["ylo"]), float(q["yhi"]))), index=idx
                )
            if kind == "slope":
                pair = int(q["pair"])
                return slope_query(lay, ds, pair, (float(q["lo"]), float(q["hi"])))
        except KeyError as exc:
            raise KernelError("schema", f"query missing field {exc.args[0]!r}") from exc
        except (QueryError, ValueError, IndexError) as exc:
            raise KernelError("query", str(exc)) from exc
        raise KernelError("schema", f"unknown query kind {kind!r}")

    def _store_selection(self, name: str, sel: Any) -> tuple[dict, list[KernelEvent]]:
        if not isinstance(sel, dict):
            raise KernelError("schema", "selection payload must be an object")
        fig: Figure | None = None
        if "figure" in sel:
            fig_id = sel["figure"]
            fig = self._figures.get(fig_id)
            if fig is None:
                raise KernelError("unknown-figure", f"no figure {fig_id!r}")
            source_name = fig.source_name
        else:
            source_name = sel.get("source")
            if not isinstance(source_name, str):
                raise KernelError("schema", "selection.source: missing source name")
        ds = self._dataset(source_name)
        rows = self._resolve_rows(sel, ds, fig)

        existing = self._selections.find(ds.id, name)
        if existing is not None:
            self._selections.delete_group(existing.id)  # stores rebind
        try:
            group = self._selections.create_group(
                ds,
                rows,
                name,
                color=tuple(sel["color"]) if "color" in sel else None,
                alpha=float(sel["alpha"]) if "alpha" in sel else None,
            )
        except SelectionError as exc:
            raise KernelError("type", str(exc)) from exc

        self._variables[name] = list(rows.indices)
        events = []
        for note in self._links.propagate(group):
            events.append(
                KernelEvent(
                    "selection.set",
                    {
                        "figure": note.figure_id,
                        "group": note.group_id,
                        "name": note.group_name,
                        "source": source_name,
                        "variable": name,
                        "rows": list(note.rows.indices),
                        "color": color_hex(note.color),
                        "alpha": note.alpha,
                    },
                )
            )
        reply = {
            "group": group.id,
            "variable": name,
            "rows": list(rows.indices),
            "color": color_hex(group.color),
            "alpha": group.alpha,
        }
        return reply, events
