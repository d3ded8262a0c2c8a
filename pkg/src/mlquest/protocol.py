"""Wire protocol and session endpoint.

Transport is newline-delimited JSON over a plain TCP socket, plus an
optional HTTP listener that upgrades /ws to a WebSocket carrying the
same messages (one JSON document per text frame) and serves the static
UI bundle. All rules run server-side; clients only render snapshots.

Client messages: {"version": 1, "session_id", "seq", "command"}.
A null command attaches to (or creates) the session; any other command
is applied through the engine. seq must be strictly increasing per
session. Replies are either "state" messages carrying a snapshot plus
the events emitted since the previous reply, or "error" messages with a
machine-readable error code; errors leave the session untouched.
"""

from __future__ import annotations

import base64
import hashlib
import json
import socketserver
import threading
from dataclasses import dataclass, field
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer

from . import engine
from .events import fnv1a64
from .model import InputCommand, InvalidCommand, ParseError, check_keys
from .session import Campaign

PROTOCOL_VERSION = 1
MAX_MESSAGE_BYTES = 1 << 20
WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

BAD_SEQ = "bad_seq"
UNKNOWN_SESSION = "unknown_session"
INVALID_COMMAND = "invalid_command"
PARSE_ERROR = "parse_error"


@dataclass
class _Session:
    campaign: Campaign
    last_seq: int | None = None
    cursor: int = 0  # events already delivered
    lock: threading.Lock = field(default_factory=threading.Lock)


def _error(session_id, seq_ack, code: str, message: str) -> dict:
    return {
        "version": PROTOCOL_VERSION,
        "kind": "error",
        "session_id": session_id,
        "seq_ack": seq_ack,
        "error": code,
        "message": message,
    }


class GameServer:
    """Holds the session registry and both listeners.

    Each session is single-writer: its lock serialises command
    application, so concurrent connections can share a session without
    interleaving ticks. Sessions share nothing with each other.
    """

    def __init__(self, specs, seed: int = 0, host: str = "127.0.0.1", port: int = 0,
                 http_port: int | None = None, static_dir: str | None = None):
        if len(specs) != 3:
            raise ValueError("a campaign needs exactly 3 level specs")
        self.specs = tuple(specs)
        self.seed = seed
        self.host = host
        self._port = port
        self._http_port = http_port
        self.static_dir = static_dir
        self._sessions: dict[str, _Session] = {}
        self._registry_lock = threading.Lock()
        self._tcp: socketserver.ThreadingTCPServer | None = None
        self._http: ThreadingHTTPServer | None = None
        self._threads: list[threading.Thread] = []

    # -- session logic (transport-independent) --

    def _session_seed(self, session_id: str) -> int:
        return (self.seed ^ fnv1a64(session_id.encode("utf-8"))) & 0xFFFFFFFFFFFFFFFF

    def _attach(self, session_id: str) -> _Session:
        with self._registry_lock:
            entry = self._sessions.get(session_id)
            if entry is None:
                campaign = Campaign.new(list(self.specs), seed=self._session_seed(session_id))
                entry = _Session(campaign=campaign)
                self._sessions[session_id] = entry
            return entry

    def handle_text(self, text: str) -> dict:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            return _error(None, None, PARSE_ERROR, f"bad JSON: {exc.msg}")
        if not isinstance(data, dict):
            return _error(None, None, PARSE_ERROR, "message must be a JSON object")
        return self.handle_message(data)

    def handle_message(self, data: dict) -> dict:
        session_id = data.get("session_id")
        if not isinstance(session_id, str):
            session_id = None
        try:
            check_keys(data, {"version", "session_id", "seq", "command"}, where="client message")
            if data["version"] != PROTOCOL_VERSION:
                raise ParseError(f"unsupported protocol version {data['version']!r}")
            if session_id is None or not session_id:
                raise ParseError("session_id must be a non-empty string")
            seq = data["seq"]
            if not isinstance(seq, int) or isinstance(seq, bool):
                raise ParseError("seq must be an integer")
            command = None if data["command"] is None else InputCommand.from_dict(data["command"])
        except ParseError as exc:
            return _error(session_id, None, PARSE_ERROR, str(exc))

        if command is None:
            entry = self._attach(session_id)
        else:
            with self._registry_lock:
                entry = self._sessions.get(session_id)
            if entry is None:
                return _error(session_id, None, UNKNOWN_SESSION, f"no session {session_id!r}; attach first")

        with entry.lock:
            if entry.last_seq is not None and seq <= entry.last_seq:
                return _error(session_id, entry.last_seq, BAD_SEQ,
                              f"seq {seq} not after {entry.last_seq}")
            if command is None:
                entry.last_seq = seq
                return self._state_message(session_id, entry, seq)
            entry.last_seq = seq
            try:
                entry.campaign.apply(command)
            except InvalidCommand as exc:
                return _error(session_id, seq, INVALID_COMMAND, str(exc))
            return self._state_message(session_id, entry, seq)

    def _state_message(self, session_id: str, entry: _Session, seq: int) -> dict:
        events = entry.campaign.events
        delta = [e.to_dict() for e in events[entry.cursor:]]
        entry.cursor = len(events)
        return {
            "version": PROTOCOL_VERSION,
            "kind": "state",
            "session_id": session_id,
            "seq_ack": seq,
            "snapshot": engine.snapshot(entry.campaign.session).to_dict(),
            "events": delta,
        }

    # -- lifecycle --

    def start(self) -> None:
        game = self

        class _Tcp(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._tcp = _Tcp((self.host, self._port), _TcpHandler)
        self._tcp.game = game
        thread = threading.Thread(target=self._tcp.serve_forever, daemon=True)
        thread.start()
        self._threads.append(thread)

        if self._http_port is not None:
            handler = partial(_HttpHandler, directory=self.static_dir or ".")
            self._http = ThreadingHTTPServer((self.host, self._http_port), handler)
            self._http.daemon_threads = True
            self._http.game = game
            thread = threading.Thread(target=self._http.serve_forever, daemon=True)
            thread.start()
            self._threads.append(thread)

    def stop(self) -> None:
        for server in (self._tcp, self._http):
            if server is not None:
                server.shutdown()
                server.server_close()
        for thread in self._threads:
            thread.join(timeout=5)
        self._tcp = self._http = None
        self._threads.clear()

    @property
    def tcp_address(self) -> tuple[str, int]:
        assert self._tcp is not None, "server not started"
        return self._tcp.server_address[:2]

    @property
    def http_address(self) -> tuple[str, int]:
        assert self._http is not None, "http listener not started"
        return self._http.server_address[:2]


class _TcpHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        for raw in self.rfile:
            if len(raw) > MAX_MESSAGE_BYTES:
                self._reply(_error(None, None, PARSE_ERROR, "message too large"))
                return
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            self._reply(self.server.game.handle_text(line))

    def _reply(self, message: dict) -> None:
        self.wfile.write((json.dumps(message, sort_keys=True) + "\n").encode("utf-8"))
        self.wfile.flush()


# -- WebSocket framing (RFC 6455, text frames only) --


def ws_accept_key(key: str) -> str:
    digest = hashlib.sha1((key + WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def read_frame(rfile) -> tuple[bool, int, bytes] | None:
    head = rfile.read(2)
    if len(head) < 2:
        return None
    fin = bool(head[0] & 0x80)
    opcode = head[0] & 0x0F
    masked = bool(head[1] & 0x80)
    length = head[1] & 0x7F
    if length == 126:
        length = int.from_bytes(rfile.read(2), "big")
    elif length == 127:
        length = int.from_bytes(rfile.read(8), "big")
    if length > MAX_MESSAGE_BYTES:
        raise ParseError("frame too large")
    mask = rfile.read(4) if masked else b""
    payload = rfile.read(length)
    if len(payload) < length:
        return None
    if masked:
        payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    return fin, opcode, payload


def frame_bytes(opcode: int, payload: bytes) -> bytes:
    head = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head += bytes([n])
    elif n < 1 << 16:
        head += bytes([126]) + n.to_bytes(2, "big")
    else:
        head += bytes([127]) + n.to_bytes(8, "big")
    return head + payload


class _HttpHandler(SimpleHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def do_GET(self) -> None:
        if self.path == "/ws":
            self._websocket()
            return
        super().do_GET()

    def log_message(self, format, *args) -> None:  # quiet by default
        pass

    def _websocket(self) -> None:
        key = self.headers.get("Sec-WebSocket-Key")
        if self.headers.get("Upgrade", "").lower() != "websocket" or not key:
            self.send_error(400, "expected a WebSocket upgrade")
            return
        self.send_response(101, "Switching Protocols")
        self.send_header("Upgrade", "websocket")
        self.send_header("Connection", "Upgrade")
        self.send_header("Sec-WebSocket-Accept", ws_accept_key(key))
        self.end_headers()
        self.close_connection = True

        game = self.server.game
        pending = b""
        while True:
            try:
                frame = read_frame(self.rfile)
            except (ParseError, OSError):
                return
            if frame is None:
                return
            fin, opcode, payload = frame
            if opcode == 0x8:  # close
                self._send(0x8, payload[:2])
                return
            if opcode == 0x9:  # ping
                self._send(0xA, payload)
                continue
            if opcode in (0x1, 0x0):
                pending += payload
                if not fin:
                    continue
                text = pending.decode("utf-8", errors="replace").strip()
                pending = b""
                if text:
                    reply = game.handle_text(text)
                    self._send(0x1, json.dumps(reply, sort_keys=True).encode("utf-8"))

    def _send(self, opcode: int, payload: bytes) -> None:
        try:
            self.wfile.write(frame_bytes(opcode, payload))
            self.wfile.flush()
        except OSError:
            pass
