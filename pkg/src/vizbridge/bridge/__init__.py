"""Bridge protocol server: handshake, eval/store endpoint, SSE stream, replies."""

from vizbridge.bridge.correlate import (
    AtomicCounter,
    DuplicateReplyError,
    ReplyCorrelator,
    ReplyTimeout,
)
from vizbridge.bridge.messages import (
    ENDPOINT_PATHS,
    ProtocolError,
    SchemaError,
    SSEMessage,
    SSEReplyMessage,
    new_session_doc,
    parse_eval_message,
    parse_reply_message,
    sse_frame,
)
from vizbridge.bridge.scebackend import ArithmeticSce, SceBackend, UnsupportedExpression
from vizbridge.bridge.kernel import Kernel, KernelError
from vizbridge.bridge.server import BridgeServer, DeliveryError

__all__ = [
    "ArithmeticSce",
    "AtomicCounter",
    "BridgeServer",
    "DeliveryError",
    "DuplicateReplyError",
    "ENDPOINT_PATHS",
    "Kernel",
    "KernelError",
    "ProtocolError",
    "ReplyCorrelator",
    "ReplyTimeout",
    "SceBackend",
    "SchemaError",
    "SSEMessage",
    "SSEReplyMessage",
    "UnsupportedExpression",
    "new_session_doc",
    "parse_eval_message",
    "parse_reply_message",
    "sse_frame",
]
