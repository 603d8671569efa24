"""Wire messages: handshake document, eval/store requests, SSE events, replies.

All documents are UTF-8 JSON with pinned field names (dvpId, requestId,
endpoints, serialization, op, name, payload, command, status). SSE events use
the standard event-stream framing, one document per event::

    data: {...}\\n\\n
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

ENDPOINT_PATHS = {"eval": "/sce", "sse": "/sse", "sseReply": "/sse-reply"}
WELCOME_PATH = "/welcome"
EVAL_OPS = ("connect", "disconnect", "eval", "store", "fetch")


class SchemaError(Exception):
    """Malformed message; ``field`` names what is missing or wrong."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ProtocolError(Exception):
    """Well-formed message that violates protocol state (e.g. unknown dvpId)."""


def new_session_doc(dvp_id: int) -> dict[str, Any]:
    """Handshake response: assigned id plus the endpoint map."""
    return {
        "dvpId": dvp_id,
        "endpoints": dict(ENDPOINT_PATHS),
        "serialization": "json",
    }


@dataclass(frozen=True)
class EvalMessage:
    dvp_id: int
    op: str
    name: str | None
    payload: Any


def parse_eval_message(doc: Any) -> EvalMessage:
    if not isinstance(doc, dict):
        raise SchemaError("$", "message must be an object")
    dvp_id = doc.get("dvpId")
    if not isinstance(dvp_id, int) or isinstance(dvp_id, bool) or dvp_id < 0:
        raise SchemaError("dvpId", "missing or not a non-negative integer")
    op = doc.get("op")
    if op not in EVAL_OPS:
        raise SchemaError("op", f"must be one of {', '.join(EVAL_OPS)}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("name", "must be a string when present")
    payload = doc.get("payload")
    if op == "store":
        if name is None:
            raise SchemaError("name", "store requires a name")
        if payload is None:
            raise SchemaError("payload", "store requires a payload")
    if op == "fetch" and name is None:
        raise SchemaError("name", "fetch requires a name")
    if op == "eval" and not isinstance(payload, str):
        raise SchemaError("payload", "eval requires an expression string payload")
    return EvalMessage(dvp_id, op, name, payload)


@dataclass(frozen=True)
class SSEMessage:
    request_id: int
    command: str
    payload: Any

    def to_doc(self) -> dict[str, Any]:
        return {
            "requestId": self.request_id,
            "command": self.command,
            "payload": self.payload,
        }


@dataclass(frozen=True)
class SSEReplyMessage:
    request_id: int
    dvp_id: int
    status: str
    payload: Any

    def to_doc(self) -> dict[str, Any]:
        return {
            "requestId": self.request_id,
            "dvpId": self.dvp_id,
            "status": self.status,
            "payload": self.payload,
        }


def parse_reply_message(doc: Any) -> SSEReplyMessage:
    if not isinstance(doc, dict):
        raise SchemaError("$", "message must be an object")
    request_id = doc.get("requestId")
    if not isinstance(request_id, int) or isinstance(request_id, bool) or request_id < 0:
        raise SchemaError("requestId", "missing or not a non-negative integer")
    dvp_id = doc.get("dvpId")
    if not isinstance(dvp_id, int) or isinstance(dvp_id, bool) or dvp_id < 0:
        raise SchemaError("dvpId", "missing or not a non-negative integer")
    status = doc.get("status")
    if status not in ("ok", "error"):
        raise SchemaError("status", "must be 'ok' or 'error'")
    return SSEReplyMessage(request_id, dvp_id, status, doc.get("payload"))


def sse_frame(message: SSEMessage) -> bytes:
    body = json.dumps(message.to_doc(), separators=(",", ":"))
    return f"data: {body}\n\n".encode("utf-8")


def ok_reply(payload: Any = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"status": "ok"}
    if payload is not None:
        doc["payload"] = payload
    return doc


def error_reply(kind: str, message: str) -> dict[str, Any]:
    return {"status": "error", "payload": {"kind": kind, "message": message}}
