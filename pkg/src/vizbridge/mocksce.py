"""Scriptable stand-in for a scientific computing session, driving the bridge.

A script is a list of steps (connect, store, figure.add, await_selection,
fetch, eval, disconnect) executed in order against a running bridge server.
The session records every wire message it sends and receives; received SSE
events enter the log when a step consumes them, so a replay against a fresh
server produces an identical transcript once ids are canonicalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any
from urllib.parse import urlparse

import requests

from vizbridge.sseclient import SseStream


class MockScriptError(Exception):
    def __init__(self, step_index: int, message: str):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}")


@dataclass
class MockSession:
    dvp_id: int = -1
    variables: dict[str, Any] = field(default_factory=dict)
    events: list[dict[str, Any]] = field(default_factory=list)  # append-only
    steps: list[dict[str, Any]] = field(default_factory=list)

    def log(self, direction: str, message: Any) -> None:
        self.events.append({"direction": direction, "message": message})

    def transcript_doc(self) -> dict[str, Any]:
        return {
            "dvpId": self.dvp_id,
            "steps": self.steps,
            "log": self.events,
            "variables": self.variables,
        }


class MockSce:
    """Protocol client playing the computing-environment side of the bridge."""

    def __init__(self, server_url: str, timeout: float = 30.0):
        self.server_url = server_url.rstrip("/")
        self.timeout = timeout
        self.session = MockSession()
        self._stream: SseStream | None = None
        parsed = urlparse(self.server_url)
        self._host = parsed.hostname or "127.0.0.1"
        self._port = parsed.port or 80

    # -- wire helpers --------------------------------------------------------

    def _post_sce(self, doc: dict[str, Any]) -> dict[str, Any]:
        self.session.log("send", doc)
        response = requests.post(
            f"{self.server_url}/sce", json=doc, timeout=self.timeout
        )
        reply = response.json()
        self.session.log("recv", reply)
        if reply.get("status") != "ok":
            payload = reply.get("payload") or {}
            raise RuntimeError(
                f"{payload.get('kind', 'error')}: {payload.get('message', reply)}"
            )
        return reply.get("payload") or {}

    # -- protocol actions ----------------------------------------------------

    def handshake(self) -> int:
        response = requests.get(f"{self.server_url}/welcome", timeout=self.timeout)
        response.raise_for_status()
        doc = response.json()
        self.session.log("recv", doc)
        self.session.dvp_id = doc["dvpId"]
        return self.session.dvp_id

    def connect(self) -> None:
        if self.session.dvp_id < 0:
            self.handshake()
        self._post_sce({"dvpId": self.session.dvp_id, "op": "connect"})
        self._stream = SseStream(self._host, self._port, self.session.dvp_id)

    def disconnect(self) -> None:
        self._post_sce({"dvpId": self.session.dvp_id, "op": "disconnect"})
        if self._stream is not None:
            self._stream.close()
            self._stream = None

    def store(self, name: str, payload: Any) -> dict[str, Any]:
        return self._post_sce(
            {"dvpId": self.session.dvp_id, "op": "store", "name": name, "payload": payload}
        )

    def fetch(self, name: str) -> Any:
        payload = self._post_sce(
            {"dvpId": self.session.dvp_id, "op": "fetch", "name": name}
        )
        value = payload.get("value", payload)
        self.session.variables[name] = value
        return value

    def eval(self, expression: str) -> Any:
        payload = self._post_sce(
            {"dvpId": self.session.dvp_id, "op": "eval", "payload": expression}
        )
        return payload.get("value")

    def figure_add(self, name: str, source: str, kind: str = "parcoords", **extra) -> str:
        doc = {"source": source, "kind": kind, **extra}
        payload = self.store(name, {"figure": doc})
        return payload.get("figure", "")

    def await_selection(self, timeout: float | None = None) -> dict[str, Any]:
        """Block until a selection.set event arrives, then fetch its variable."""
        if self._stream is None:
            raise RuntimeError("await_selection requires an open stream (connect first)")
        wait = timeout if timeout is not None else self.timeout

        def scan(event: dict[str, Any]) -> bool:
            self.session.log("recv", event)
            return event.get("command") == "selection.set"

        event = self._stream.next_event(timeout=wait, predicate=scan)
        variable = event["payload"].get("variable")
        if variable:
            self.fetch(variable)
        return event

    def close(self) -> None:
        if self._stream is not None:
            self._stream.close()
            self._stream = None


def run_script(
    server_url: str, steps: list[dict[str, Any]], timeout: float = 30.0
) -> MockSession:
    """Execute steps in order; any protocol failure aborts with the step index."""
    client = MockSce(server_url, timeout=timeout)
    try:
        for i, step in enumerate(steps):
            op = step.get("op")
            try:
                if op == "connect":
                    client.connect()
                elif op == "disconnect":
                    client.disconnect()
                elif op == "store":
                    client.store(step["name"], step["data"])
                elif op == "figure.add":
                    client.figure_add(
                        step.get("name", "figure"),
                        step["source"],
                        step.get("kind", "parcoords"),
                        **{
                            k: v
                            for k, v in step.items()
                            if k in ("axes", "script")
                        },
                    )
                elif op == "await_selection":
                    client.await_selection(step.get("timeout"))
                elif op == "fetch":
                    client.fetch(step["name"])
                elif op == "eval":
                    value = client.eval(step["expr"])
                    client.session.variables[f"eval:{step['expr']}"] = value
                else:
                    raise RuntimeError(f"unknown step op {op!r}")
            except Exception as exc:
                raise MockScriptError(i, str(exc)) from exc
            client.session.steps.append({"op": op, "status": "ok"})
    finally:
        client.close()
    return client.session


_ID_KEYS = {
    "dvpId": "int",
    "requestId": "int",
    "figure": "str",
    "group": "str",
}


def canonicalize_transcript(doc: Any) -> Any:
    """Renumber protocol ids in first-appearance order so replays compare equal.

    The wire format carries no timestamps; ids (dvpId, requestId, figure and
    group tokens) are the only run-dependent values.
    """
    mappings: dict[str, dict[Any, Any]] = {key: {} for key in _ID_KEYS}

    def canon(key: str, value: Any) -> Any:
        table = mappings[key]
        if value not in table:
            fresh = len(table)
            table[value] = fresh if isinstance(value, int) else f"{key}{fresh}"
        return table[value]

    def walk(node: Any) -> Any:
        if isinstance(node, dict):
            out = {}
            for k, v in node.items():
                if k in _ID_KEYS and isinstance(v, (int, str)) and not isinstance(v, bool):
                    out[k] = canon(k, v)
                else:
                    out[k] = walk(v)
            return out
        if isinstance(node, list):
            return [walk(v) for v in node]
        return node

    return walk(doc)


def transcript_json(session: MockSession) -> str:
    return json.dumps(session.transcript_doc(), indent=2, sort_keys=True)
