"""Live engine sessions over a line-delimited JSON protocol.

One JSON object per line, schema version field v:1. Clients create sessions
(inline scenario or task id), stream samples in, and receive events plus
scene deltas out. The server never timestamps anything: client-supplied
sample times are authoritative, so a live session replays bit-identically
through the offline run loop.

Transports: a local TCP stream (primary, shell-testable) and an HTTP bridge
for the browser demo (POST /api with NDJSON message batches; responses are
the same NDJSON lines a TCP client would receive). Static demo assets are
served from the frontend build when --demo is on.
"""

from __future__ import annotations

import asyncio
import json
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .config import EngineConfig
from .document import DocumentPanel, effective_strip_frac
from .geometry import Pose
from .pipeline import StreamOrderError, record_to_sample
from .scenario import Scenario, build_task_scenario
from .simulate import SessionRunner

PROTOCOL_VERSION = 1


def _panel_snapshot(p: DocumentPanel, config: EngineConfig) -> dict:
    return {
        "id": p.panel_id,
        "position": [float(c) for c in p.pose.position],
        "orientation": [float(c) for c in p.pose.orientation],
        "width": p.extent.width,
        "height": p.extent.height,
        "z_rank": p.z_rank,
        "scroll_line": p.scroll_line,
        "highlighted": p.highlighted,
        "scrollable": p.scrollable,
        "strip_frac": effective_strip_frac(p, config.scroll_button_strip_frac),
        "visible_lines": p.layout.visible_lines,
        "chars_per_line": p.layout.chars_per_line,
        "line_spacing": p.layout.line_spacing,
        "lines": [l.text for l in p.layout.lines],
    }


def _panel_delta(p: DocumentPanel) -> dict:
    return {
        "id": p.panel_id,
        "position": [float(c) for c in p.pose.position],
        "orientation": [float(c) for c in p.pose.orientation],
        "z_rank": p.z_rank,
        "scroll_line": p.scroll_line,
        "highlighted": p.highlighted,
    }


@dataclass
class _Session:
    runner: SessionRunner
    last_seq: int


class SessionBroker:
    """Message handler shared by every transport; deterministic and
    transport-agnostic. Guard with a lock when used from threads."""

    def __init__(self):
        self._sessions: dict[str, _Session] = {}
        self._counter = 0

    def handle_line(self, line: str) -> list[dict]:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return [self._error(None, None, "parse", f"bad JSON: {exc.msg}")]
        if not isinstance(msg, dict):
            return [self._error(None, None, "parse", "message must be a JSON object")]
        return self.handle(msg)

    def handle(self, msg: dict) -> list[dict]:
        kind = msg.get("kind")
        seq = msg.get("seq")
        session_id = msg.get("session_id")
        if kind == "create_session":
            return self._create(msg, seq)
        session = self._sessions.get(session_id)
        if session is None:
            return [self._error(session_id, seq, "no_session", f"unknown session {session_id!r}")]
        if not isinstance(seq, int) or seq <= session.last_seq:
            return [
                self._error(
                    session_id, seq, "bad_stream", f"seq {seq!r} not after {session.last_seq}"
                )
            ]
        session.last_seq = seq

        if kind == "sample":
            return self._sample(session, session_id, seq, msg)
        if kind == "set_head_pose":
            return self._set_head(session, session_id, seq, msg)
        if kind == "toggle_lens":
            events = session.runner.engine.manual_toggle()
            session.runner.events.extend(events)
            return self._respond(session, session_id, seq, events)
        if kind == "end_session":
            del self._sessions[session_id]
            return [
                {"v": PROTOCOL_VERSION, "kind": "events", "session_id": session_id, "ack_seq": seq, "events": []}
            ]
        return [self._error(session_id, seq, "parse", f"unknown message kind {kind!r}")]

    # --- handlers ---

    def _create(self, msg: dict, seq) -> list[dict]:
        try:
            if "scenario" in msg:
                scenario = Scenario.from_dict(msg["scenario"])
            elif "task" in msg:
                scenario = build_task_scenario(msg["task"], int(msg.get("seed", 0)))
            else:
                return [self._error(None, seq, "parse", "create_session needs 'scenario' or 'task'")]
            overrides = dict(msg.get("overrides", {}))
            if "mode" in msg and msg["mode"]:
                overrides["mode"] = msg["mode"]
            if overrides:
                scenario.config = scenario.config.with_overrides(overrides)
        except (KeyError, ValueError) as exc:
            return [self._error(None, seq, "parse", str(exc))]
        self._counter += 1
        session_id = f"s{self._counter}"
        runner = SessionRunner(scenario.build_scene(), scenario.config)
        self._sessions[session_id] = _Session(runner=runner, last_seq=seq if isinstance(seq, int) else 0)
        scene = runner.scene
        snapshot = {
            "head": scene.head.to_dict(),
            "config": scenario.config.to_dict(),
            "panels": [
                _panel_snapshot(p, scenario.config)
                for p in sorted(scene.panels.values(), key=lambda p: p.panel_id)
            ],
        }
        return [
            {
                "v": PROTOCOL_VERSION,
                "kind": "session_created",
                "session_id": session_id,
                "ack_seq": seq,
                "scene": snapshot,
            }
        ]

    def _sample(self, session: _Session, session_id, seq, msg) -> list[dict]:
        try:
            sample = record_to_sample(msg["sample"])
        except (KeyError, TypeError, ValueError) as exc:
            return [self._error(session_id, seq, "parse", f"bad sample: {exc}")]
        try:
            events = session.runner.feed(sample)
        except StreamOrderError as exc:
            return [self._error(session_id, seq, "bad_stream", str(exc))]
        return self._respond(session, session_id, seq, events)

    def _set_head(self, session: _Session, session_id, seq, msg) -> list[dict]:
        try:
            pose = Pose.from_dict(msg)
        except (KeyError, ValueError) as exc:
            return [self._error(session_id, seq, "parse", f"bad pose: {exc}")]
        session.runner.scene.head = pose
        return self._respond(session, session_id, seq, [])

    def _respond(self, session: _Session, session_id, seq, events) -> list[dict]:
        out = []
        if events:
            out.append(
                {
                    "v": PROTOCOL_VERSION,
                    "kind": "events",
                    "session_id": session_id,
                    "ack_seq": seq,
                    "events": [e.to_record() for e in events],
                }
            )
        engine = session.runner.engine
        scene = session.runner.scene
        region = engine.lens_region_current
        out.append(
            {
                "v": PROTOCOL_VERSION,
                "kind": "scene_delta",
                "session_id": session_id,
                "ack_seq": seq,
                "panels": [
                    _panel_delta(p) for p in sorted(scene.panels.values(), key=lambda p: p.panel_id)
                ],
                "lens": region.to_record() if region is not None else None,
                "dwell": engine.dwell_progress(),
                "head": scene.head.to_dict(),
            }
        )
        return out

    @staticmethod
    def _error(session_id, seq, code: str, message: str) -> dict:
        return {
            "v": PROTOCOL_VERSION,
            "kind": "error",
            "session_id": session_id,
            "ack_seq": seq,
            "code": code,
            "message": message,
        }


def encode(msg: dict) -> str:
    return json.dumps(msg, separators=(",", ":"))


# --- TCP transport ---


async def _serve_tcp(broker: SessionBroker, lock: threading.Lock, port: int, ready=None):
    async def handle_connection(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                text = line.decode("utf-8").strip()
                if not text:
                    continue
                with lock:
                    responses = broker.handle_line(text)
                for resp in responses:
                    writer.write((encode(resp) + "\n").encode("utf-8"))
                await writer.drain()
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            writer.close()

    server = await asyncio.start_server(handle_connection, host="127.0.0.1", port=port)
    actual = server.sockets[0].getsockname()[1]
    print(f"session service listening on tcp://127.0.0.1:{actual}", flush=True)
    if ready is not None:
        ready(actual)
    async with server:
        await server.serve_forever()


# --- HTTP bridge (browser demo) ---

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
}


def _make_http_handler(broker: SessionBroker, lock: threading.Lock, static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet
            pass

        def do_POST(self):
            if self.path != "/api":
                self.send_error(404)
                return
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length).decode("utf-8")
            lines_out = []
            for line in body.splitlines():
                line = line.strip()
                if not line:
                    continue
                with lock:
                    for resp in broker.handle_line(line):
                        lines_out.append(encode(resp))
            payload = ("\n".join(lines_out) + "\n").encode("utf-8") if lines_out else b""
            self.send_response(200)
            self.send_header("Content-Type", "application/x-ndjson")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def do_GET(self):
            if static_dir is None:
                self.send_error(404, "demo assets not enabled (run with --demo)")
                return
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (static_dir / rel).resolve()
            if not str(target).startswith(str(static_dir.resolve())) or not target.is_file():
                self.send_error(404)
                return
            data = target.read_bytes()
            self.send_response(200)
            self.send_header(
                "Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            )
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

    return Handler


def demo_static_dir() -> Path | None:
    """The built browser demo, when present alongside the repo."""
    root = Path(__file__).resolve().parents[2] / "frontend"
    for candidate in (root / "dist", root / "public"):
        if (candidate / "index.html").is_file():
            return root  # serve the whole frontend dir: index.html references dist/
    if (root / "index.html").is_file():
        return root
    return None


def serve(port: int = 7466, http_port: int | None = None, demo: bool = False) -> None:
    broker = SessionBroker()
    lock = threading.Lock()

    if demo or http_port is not None:
        static_dir = demo_static_dir() if demo else None
        if demo and static_dir is None:
            print("warning: no built demo found under frontend/; serving API only", flush=True)
        handler = _make_http_handler(broker, lock, static_dir)
        httpd = ThreadingHTTPServer(("127.0.0.1", 8766 if http_port is None else http_port), handler)
        actual_http = httpd.server_address[1]
        threading.Thread(target=httpd.serve_forever, daemon=True).start()
        print(f"http bridge listening on http://127.0.0.1:{actual_http}/", flush=True)

    try:
        asyncio.run(_serve_tcp(broker, lock, port))
    except KeyboardInterrupt:
        pass
