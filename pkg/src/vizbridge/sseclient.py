"""Minimal client for the bridge's server-sent event stream.

Reads ``data: <json>`` frames off a chunked HTTP response on a background
thread and exposes them as parsed documents. ``close`` shuts the socket down,
which unblocks the reader immediately.
"""

from __future__ import annotations

import http.client
import json
import socket
import threading
from typing import Any, Callable


class SseStreamError(Exception):
    pass


class SseStream:
    def __init__(self, host: str, port: int, dvp_id: int, path: str = "/sse"):
        conn = http.client.HTTPConnection(host, port)
        conn.request("GET", f"{path}?dvpId={dvp_id}")
        response = conn.getresponse()
        if response.status != 200:
            body = response.read().decode("utf-8", "replace")
            conn.close()
            raise SseStreamError(f"stream rejected: {response.status} {body}")
        self._conn = conn
        self._response = response
        self._cond = threading.Condition()
        self._events: list[dict[str, Any]] = []
        self._consumed = 0
        self._closed = False
        self._thread = threading.Thread(target=self._pump, daemon=True)
        self._thread.start()

    def _pump(self) -> None:
        data_lines: list[bytes] = []
        try:
            for raw in iter(self._response.readline, b""):
                line = raw.rstrip(b"\r\n")
                if line.startswith(b"data: "):
                    data_lines.append(line[len(b"data: "):])
                elif line == b"" and data_lines:
                    doc = json.loads(b"\n".join(data_lines))
                    data_lines = []
                    with self._cond:
                        self._events.append(doc)
                        self._cond.notify_all()
        except Exception:
            pass
        finally:
            with self._cond:
                self._closed = True
                self._cond.notify_all()

    @property
    def events(self) -> list[dict[str, Any]]:
        with self._cond:
            return list(self._events)

    def wait_for(self, count: int, timeout: float = 10.0) -> list[dict[str, Any]]:
        """Block until at least ``count`` events arrived; returns the first count."""
        with self._cond:
            ok = self._cond.wait_for(lambda: len(self._events) >= count, timeout)
            if not ok:
                raise TimeoutError(f"expected {count} events, saw {len(self._events)}")
            return list(self._events[:count])

    def next_event(
        self,
        timeout: float = 10.0,
        predicate: Callable[[dict[str, Any]], bool] | None = None,
    ) -> dict[str, Any]:
        """Return the next unconsumed event (matching ``predicate`` if given)."""
        import time as _time

        deadline = _time.monotonic() + timeout
        with self._cond:
            while True:
                while self._consumed < len(self._events):
                    event = self._events[self._consumed]
                    self._consumed += 1
                    if predicate is None or predicate(event):
                        return event
                if self._closed:
                    raise SseStreamError("stream closed")
                remaining = deadline - _time.monotonic()
                if remaining <= 0 or not self._cond.wait(remaining):
                    raise TimeoutError("no matching event before timeout")

    def close(self) -> None:
        try:
            if self._conn.sock is not None:
                self._conn.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._conn.close()
        self._thread.join(timeout=2)
