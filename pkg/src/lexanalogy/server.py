"""HTTP + JSON interface for annotation sessions.

Endpoints:
    GET  /api/session             session metadata and per-annotator progress
    GET  /api/tasks/next?annotator=<id>   next unlabeled task for an annotator
    POST /api/tasks/<id>/verdict  body {"annotator": ..., "decision": ...}
    GET  /api/agreement           Fleiss/pairwise-Cohen agreement report
    GET  /api/export              verdict TSV (task_id, annotator, decision)

Anything else is served as a static file from the assets directory, so the
browser UI and the API share one origin.  Writes are serialized through a
lock (single-writer store); reads are safe to run concurrently.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .annotation import AnnotationSession, SessionError, Verdict

__all__ = ["make_server", "serve_forever"]

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_PLACEHOLDER = """<!doctype html>
<html><head><meta charset="utf-8"><title>annotation</title></head>
<body><h1>Annotation API</h1>
<p>No browser UI is installed. The JSON API lives under <code>/api/</code>.</p>
</body></html>
"""


class _Handler(BaseHTTPRequestHandler):
    server_version = "lexanalogy"

    # Set by make_server on the server object.
    @property
    def session(self) -> AnnotationSession:
        return self.server.session

    @property
    def assets_dir(self) -> Path | None:
        return self.server.assets_dir

    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:
            super().log_message(fmt, *args)

    # -- plumbing ------------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, payload, status: int = 200) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8")

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status)

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            return json.loads(raw or b"{}")
        except json.JSONDecodeError:
            return None

    # -- routes ----------------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/api/session":
            session = self.session
            self._send_json(
                {
                    "tasks": len(session.tasks),
                    "annotators": session.annotators,
                    "seed": session.seed,
                    "progress": session.progress(),
                }
            )
        elif url.path == "/api/tasks/next":
            params = parse_qs(url.query)
            annotator = (params.get("annotator") or [""])[0]
            try:
                task = self.session.next_task(annotator)
            except SessionError as exc:
                self._send_error_json(400, str(exc))
                return
            if task is None:
                self._send_json({"done": True})
            else:
                self._send_json(task.payload())
        elif url.path == "/api/agreement":
            reports = {
                name: asdict(report)
                for name, report in self.session.agreement().items()
            }
            self._send_json(reports)
        elif url.path == "/api/export":
            body = self.session.export_tsv().encode("utf-8")
            self._send(200, body, "text/tab-separated-values; charset=utf-8")
        elif url.path.startswith("/api/"):
            self._send_error_json(404, "no such endpoint")
        else:
            self._serve_static(url.path)

    def do_POST(self):
        url = urlparse(self.path)
        parts = url.path.strip("/").split("/")
        if len(parts) == 4 and parts[:2] == ["api", "tasks"] and parts[3] == "verdict":
            task_id = parts[2]
            payload = self._read_json()
            if payload is None:
                self._send_error_json(400, "invalid JSON body")
                return
            annotator = payload.get("annotator", "")
            decision = payload.get("decision")
            try:
                verdict = Verdict(task_id, annotator, decision)
            except ValueError as exc:
                self._send_error_json(400, str(exc))
                return
            with self.server.write_lock:
                try:
                    self.session.submit_verdict(verdict)
                except SessionError as exc:
                    self._send_error_json(400, str(exc))
                    return
            self._send_json({"ok": True, "task_id": task_id})
        else:
            self._send_error_json(404, "no such endpoint")

    # -- static assets ----------------------------------------------------------

    def _serve_static(self, path: str) -> None:
        if path in ("", "/"):
            path = "/index.html"
        if self.assets_dir is None:
            if path == "/index.html":
                self._send(200, _PLACEHOLDER.encode("utf-8"), _CONTENT_TYPES[".html"])
            else:
                self._send_error_json(404, "not found")
            return
        root = self.assets_dir.resolve()
        target = (root / path.lstrip("/")).resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "not found")
            return
        if not target.is_file():
            self._send_error_json(404, "not found")
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)


def make_server(
    session: AnnotationSession,
    port: int = 8765,
    host: str = "127.0.0.1",
    assets_dir=None,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    """Build (and bind) the annotation server; raises OSError on a busy port."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.session = session
    server.assets_dir = Path(assets_dir) if assets_dir else None
    server.write_lock = threading.Lock()
    server.verbose = verbose
    return server


def serve_forever(server: ThreadingHTTPServer) -> None:
    """Serve until interrupted, then flush the session's verdict log."""
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.session.close()
        server.server_close()
