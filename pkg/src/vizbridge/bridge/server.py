"""The HTTP/1.1 bridge server.

Endpoints::

    GET  /welcome            handshake: assigns a fresh dvpId + endpoint map
    POST /sce                connect | disconnect | eval | store | fetch
    GET  /sse?dvpId=N        server-sent event stream for client N
    POST /sse-reply          reply to an SSE request (correlation by requestId)

Each request runs on its own thread; blocking waits block only their caller.
Kernel state mutates solely on the kernel coordinator thread. Per-client SSE
events are queued and written by the single stream thread, so they arrive in
send order.
"""

from __future__ import annotations

import json
import mimetypes
import queue
import select
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from vizbridge.bridge.correlate import (
    AtomicCounter,
    DuplicateReplyError,
    ReplyCorrelator,
)
from vizbridge.bridge.kernel import Kernel, KernelError
from vizbridge.bridge.messages import (
    ENDPOINT_PATHS,
    WELCOME_PATH,
    SchemaError,
    SSEMessage,
    error_reply,
    new_session_doc,
    ok_reply,
    parse_eval_message,
    parse_reply_message,
    sse_frame,
)
from vizbridge.bridge.scebackend import SceBackend
from vizbridge.datamodel import DataSource
from vizbridge.wire import datasource_to_doc


class DeliveryError(Exception):
    pass


_STREAM_CLOSE = object()


class _ClientSession:
    def __init__(self, dvp_id: int):
        self.dvp_id = dvp_id
        self.events: queue.Queue = queue.Queue()
        self.stream_open = False
        self.send_lock = threading.Lock()  # rid order == queue order per client

    def close_stream(self) -> None:
        self.stream_open = False
        self.events.put(_STREAM_CLOSE)


class _BridgeHTTPServer(ThreadingHTTPServer):
    daemon_threads = True
    block_on_close = False  # never stall shutdown on idle keep-alive sockets


class BridgeServer:
    """Owns the HTTP server, id counters, correlation table, and kernel."""

    def __init__(
        self,
        port: int = 0,
        host: str = "127.0.0.1",
        sce_backend: SceBackend | None = None,
        kernel: Kernel | None = None,
        hold_seconds: float = 60.0,
        ui_dir: str | Path | None = None,
    ):
        self.kernel = kernel if kernel is not None else Kernel(sce_backend)
        self.correlator = ReplyCorrelator(hold_seconds=hold_seconds)
        self.dvp_ids = AtomicCounter()
        self.request_ids = AtomicCounter()
        self.clients: dict[int, _ClientSession] = {}
        self._clients_lock = threading.Lock()
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self._httpd = _BridgeHTTPServer((host, port), _Handler)
        self._httpd.bridge = self  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None
        self._stopping = threading.Event()
        self._sweeper = threading.Thread(target=self._sweep_loop, daemon=True)

    # -- lifecycle -----------------------------------------------------------

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        return f"http://{self._httpd.server_address[0]}:{self.port}"

    def start(self) -> "BridgeServer":
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, kwargs={"poll_interval": 0.1}, daemon=True
        )
        self._thread.start()
        self._sweeper.start()
        return self

    def stop(self) -> None:
        self._stopping.set()
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread:
            self._thread.join(timeout=3)
        self.kernel.close()

    def serve_forever(self) -> None:
        self._sweeper.start()
        self._httpd.serve_forever(poll_interval=0.1)

    def shutdown(self) -> None:
        self._stopping.set()
        self._httpd.shutdown()
        self._httpd.server_close()
        self.kernel.close()

    def _sweep_loop(self) -> None:
        while not self._stopping.wait(0.5):
            self.correlator.sweep()

    # -- client registry -----------------------------------------------------

    def register_client(self) -> int:
        dvp_id = self.dvp_ids.next()
        with self._clients_lock:
            self.clients[dvp_id] = _ClientSession(dvp_id)
        return dvp_id

    def client(self, dvp_id: int) -> _ClientSession | None:
        with self._clients_lock:
            return self.clients.get(dvp_id)

    def open_stream_clients(self) -> list[_ClientSession]:
        with self._clients_lock:
            return [c for c in self.clients.values() if c.stream_open]

    # -- messaging -----------------------------------------------------------

    def send_sse(self, dvp_id: int, command: str, payload) -> int:
        """Queue one event for a client; the requestId advances regardless of
        delivery so ids stay unique across failures."""
        session = self.client(dvp_id)
        if session is None:
            self.request_ids.next()
            raise DeliveryError(f"client {dvp_id} has no open event stream")
        with session.send_lock:
            request_id = self.request_ids.next()
            if not session.stream_open:
                raise DeliveryError(f"client {dvp_id} has no open event stream")
            session.events.put(SSEMessage(request_id, command, payload))
        return request_id

    def wait_for_reply(self, request_id: int, dvp_id: int, timeout: float = 30.0):
        return self.correlator.wait(request_id, dvp_id, timeout)

    def broadcast(self, command: str, payload) -> list[int]:
        """Send one event per open stream; skips clients without streams."""
        request_ids = []
        for session in self.open_stream_clients():
            try:
                request_ids.append(self.send_sse(session.dvp_id, command, payload))
            except DeliveryError:
                continue  # stream closed between listing and sending
        return request_ids


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    timeout = 30  # idle keep-alive sockets drop instead of pinning threads

    @property
    def bridge(self) -> BridgeServer:
        return self.server.bridge  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers -------------------------------------------------------------

    def _send_json(self, doc: dict, status: int = 200) -> None:
        body = json.dumps(doc, separators=(",", ":")).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise SchemaError("$", f"body is not valid JSON: {exc}") from exc

    # -- endpoints -----------------------------------------------------------

    def do_GET(self) -> None:
        parsed = urlparse(self.path)
        if parsed.path == WELCOME_PATH:
            dvp_id = self.bridge.register_client()
            self._send_json(new_session_doc(dvp_id))
            return
        if parsed.path == ENDPOINT_PATHS["sse"]:
            self._serve_stream(parsed)
            return
        if self._serve_static(parsed.path):
            return
        self._send_json(error_reply("not-found", f"no endpoint {parsed.path}"), 404)

    def do_POST(self) -> None:
        parsed = urlparse(self.path)
        if parsed.path == ENDPOINT_PATHS["eval"]:
            self._handle_sce()
            return
        if parsed.path == ENDPOINT_PATHS["sseReply"]:
            self._handle_reply()
            return
        self._send_json(error_reply("not-found", f"no endpoint {parsed.path}"), 404)

    # -- /sce ----------------------------------------------------------------

    def _handle_sce(self) -> None:
        try:
            msg = parse_eval_message(self._read_json())
        except SchemaError as exc:
            self._send_json(error_reply("schema", str(exc)), 400)
            return
        bridge = self.bridge
        if bridge.client(msg.dvp_id) is None:
            self._send_json(
                error_reply("protocol", f"unknown dvpId {msg.dvp_id}"), 400
            )
            return
        try:
            if msg.op == "connect":
                bridge.kernel.connect(msg.dvp_id)
                self._send_json(ok_reply({"connected": True}))
            elif msg.op == "disconnect":
                bridge.kernel.disconnect(msg.dvp_id)
                session = bridge.client(msg.dvp_id)
                if session is not None and session.stream_open:
                    session.close_stream()
                self._send_json(ok_reply({"connected": False}))
            elif msg.op == "eval":
                value = bridge.kernel.eval(msg.payload)
                self._send_json(ok_reply({"value": value}))
            elif msg.op == "fetch":
                value = bridge.kernel.fetch(msg.name)
                if isinstance(value, DataSource):
                    self._send_json(ok_reply(datasource_to_doc(value)))
                else:
                    self._send_json(ok_reply({"value": value}))
            else:  # store
                reply, events = bridge.kernel.store(msg.dvp_id, msg.name, msg.payload)
                request_ids = []
                for event in events:
                    request_ids.extend(bridge.broadcast(event.command, event.payload))
                if request_ids:
                    reply = {**reply, "dispatched": len(request_ids)}
                self._send_json(ok_reply(reply))
        except KernelError as exc:
            self._send_json(error_reply(exc.kind, str(exc)), 400)

    # -- /sse-reply ----------------------------------------------------------

    def _handle_reply(self) -> None:
        try:
            reply = parse_reply_message(self._read_json())
        except SchemaError as exc:
            self._send_json(error_reply("schema", str(exc)), 400)
            return
        try:
            self.bridge.correlator.post(reply)
        except DuplicateReplyError as exc:
            self._send_json(error_reply("duplicate", str(exc)), 409)
            return
        self._send_json(ok_reply({"accepted": reply.request_id}))

    # -- /sse ----------------------------------------------------------------

    def _serve_stream(self, parsed) -> None:
        params = parse_qs(parsed.query)
        try:
            dvp_id = int(params.get("dvpId", ["-1"])[0])
        except ValueError:
            dvp_id = -1
        session = self.bridge.client(dvp_id)
        if session is None:
            self._send_json(error_reply("protocol", f"unknown dvpId {dvp_id}"), 400)
            return
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        # chunked framing so each event reaches the client immediately
        self.send_header("Transfer-Encoding", "chunked")
        self.end_headers()
        session.stream_open = True
        self.close_connection = True  # the stream is this socket's last response
        try:
            while not self.bridge._stopping.is_set():
                try:
                    message = session.events.get(timeout=0.25)
                except queue.Empty:
                    if self._peer_gone():
                        break
                    continue
                if message is _STREAM_CLOSE:
                    self.wfile.write(b"0\r\n\r\n")
                    break
                frame = sse_frame(message)
                self.wfile.write(f"{len(frame):X}\r\n".encode("ascii") + frame + b"\r\n")
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError, OSError):
            pass
        finally:
            session.stream_open = False

    def _peer_gone(self) -> bool:
        """EOF on the stream socket while idle means the client went away."""
        try:
            readable, _, _ = select.select([self.connection], [], [], 0)
            if not readable:
                return False
            return self.connection.recv(1, socket.MSG_PEEK) == b""
        except OSError:
            return True

    # -- static UI -----------------------------------------------------------

    def _serve_static(self, path: str) -> bool:
        ui_dir = self.bridge.ui_dir
        if ui_dir is None or not ui_dir.is_dir():
            return False
        rel = path.lstrip("/") or "index.html"
        target = (ui_dir / rel).resolve()
        try:
            target.relative_to(ui_dir.resolve())
        except ValueError:
            return False
        if not target.is_file():
            return False
        content = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(content)))
        self.end_headers()
        self.wfile.write(content)
        return True
