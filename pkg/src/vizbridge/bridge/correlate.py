"""Request/reply correlation: atomic counters and the blocking reply table.

Replies key on requestId. A waiting caller blocks (with timeout) until a
reply for its request and client arrives; each reply is consumed exactly
once. Duplicate replies for an already-seen requestId are rejected; replies
nobody waits for are held for a bounded time and then swept.
"""

from __future__ import annotations

import threading
import time

from vizbridge.bridge.messages import SSEReplyMessage


class AtomicCounter:
    """Thread-safe auto-incrementing id source, starting at 0."""

    def __init__(self) -> None:
        self._value = 0
        self._lock = threading.Lock()

    def next(self) -> int:
        with self._lock:
            value = self._value
            self._value += 1
            return value

    def peek(self) -> int:
        with self._lock:
            return self._value


class ReplyTimeout(Exception):
    def __init__(self, request_id: int, timeout: float):
        self.request_id = request_id
        super().__init__(f"no reply for request {request_id} within {timeout}s")


class DuplicateReplyError(Exception):
    def __init__(self, request_id: int):
        self.request_id = request_id
        super().__init__(f"duplicate reply for request {request_id}")


class ReplyCorrelator:
    def __init__(self, hold_seconds: float = 60.0, clock=time.monotonic):
        self._hold = hold_seconds
        self._clock = clock
        self._cond = threading.Condition()
        self._held: dict[int, tuple[SSEReplyMessage, float]] = {}
        self._seen: set[int] = set()

    def post(self, reply: SSEReplyMessage) -> None:
        """Enqueue a reply; rejects a second reply for the same requestId."""
        with self._cond:
            self._sweep_locked()
            if reply.request_id in self._seen:
                raise DuplicateReplyError(reply.request_id)
            self._seen.add(reply.request_id)
            self._held[reply.request_id] = (reply, self._clock())
            self._cond.notify_all()

    def wait(self, request_id: int, dvp_id: int, timeout: float = 30.0) -> SSEReplyMessage:
        """Block until the matching reply arrives; consume it exactly once.

        A reply carrying a different dvpId never matches and stays held.
        """
        deadline = self._clock() + timeout
        with self._cond:
            while True:
                entry = self._held.get(request_id)
                if entry is not None and entry[0].dvp_id == dvp_id:
                    del self._held[request_id]
                    return entry[0]
                remaining = deadline - self._clock()
                if remaining <= 0:
                    raise ReplyTimeout(request_id, timeout)
                self._cond.wait(min(remaining, 0.5))

    def held_count(self) -> int:
        with self._cond:
            return len(self._held)

    def sweep(self) -> int:
        """Drop held replies older than the hold window; returns how many."""
        with self._cond:
            return self._sweep_locked()

    def _sweep_locked(self) -> int:
        now = self._clock()
        expired = [
            rid for rid, (_, ts) in self._held.items() if now - ts > self._hold
        ]
        for rid in expired:
            del self._held[rid]
        return len(expired)
