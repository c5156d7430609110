"""Concurrent HTTP filter service.

Protocol:
  POST /v1/filter   {"comments": [str, ...]} -> {"mask": [0|1, ...], "model_id": str}
  GET  /v1/health   {"status": "ok"|"degraded", "model_id": str|null, "uptime_s": float}

Errors carry {"error": str} bodies: 400 malformed request, 413 oversize,
503 no model or admission gate full (with Retry-After). Every /v1/*
response allows any origin so the browser client can call us directly.

One immutable model serves all requests; a semaphore bounds concurrent
/v1/filter work; shutdown stops accepting and drains in-flight handlers.
"""

from __future__ import annotations

import hashlib
import json
import signal
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .classifier import ModelParams, TextPipeline, load_model, predict_mask
from .errors import BindError, FormatError, ModelLoadError
from .preprocess import Lexicon, StopwordSet

MAX_BODY_BYTES = 64 * 1024 * 1024


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8731
    model_path: str | None = None
    lexicon_path: str | None = None
    stopwords_path: str | None = None
    max_comments: int = 10000
    max_concurrent: int = 200
    timeout_s: float = 30.0

    def __post_init__(self):
        if not 0 <= self.port <= 65535:
            raise ValueError(f"invalid port {self.port}")
        if self.max_concurrent < 1:
            raise ValueError("max_concurrent must be >= 1")
        if self.max_comments < 1:
            raise ValueError("max_comments must be >= 1")


class FilterApp:
    """Request-independent state: the loaded model and admission gate."""

    def __init__(
        self,
        cfg: ServerConfig,
        model: ModelParams | None = None,
        pipeline: TextPipeline | None = None,
    ):
        self.cfg = cfg
        self.model = model
        self.pipeline = pipeline
        self.model_id: str | None = None
        self.started_at = time.monotonic()
        self.gate = threading.BoundedSemaphore(cfg.max_concurrent)

    def load(self) -> None:
        if self.cfg.model_path is None:
            raise ModelLoadError("no model path configured")
        try:
            self.model = load_model(self.cfg.model_path)
            with open(self.cfg.model_path, "rb") as fin:
                self.model_id = hashlib.sha256(fin.read()).hexdigest()[:16]
        except (OSError, FormatError) as e:
            raise ModelLoadError(f"cannot load model {self.cfg.model_path}: {e}") from e
        lex = (
            Lexicon.from_file(self.cfg.lexicon_path)
            if self.cfg.lexicon_path
            else Lexicon.from_words([])
        )
        stop = (
            StopwordSet.from_file(self.cfg.stopwords_path)
            if self.cfg.stopwords_path
            else StopwordSet.from_words([])
        )
        self.pipeline = TextPipeline.for_model(self.model, lex, stop)

    def predict(self, comments: list[str]) -> list[int]:
        return predict_mask(self.model, comments, self.pipeline)

    def health(self) -> tuple[int, dict]:
        doc = {
            "status": "ok" if self.model is not None else "degraded",
            "model_id": self.model_id,
            "uptime_s": round(time.monotonic() - self.started_at, 3),
        }
        return (200 if self.model is not None else 503), doc

    def filter(self, body: bytes) -> tuple[int, dict]:
        try:
            doc = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return 400, {"error": "body is not valid JSON"}
        if not isinstance(doc, dict) or not isinstance(doc.get("comments"), list):
            return 400, {"error": 'body must be {"comments": [string, ...]}'}
        comments = doc["comments"]
        if not all(isinstance(c, str) for c in comments):
            return 400, {"error": "comments must all be strings"}
        if len(comments) > self.cfg.max_comments:
            return 413, {"error": f"too many comments (limit {self.cfg.max_comments})"}
        if self.model is None:
            return 503, {"error": "no model loaded"}
        return 200, {"mask": self.predict(comments), "model_id": self.model_id}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    app: FilterApp = None  # set per server class
    # socket read timeout; stalled requests drop their connection
    timeout = 30.0

    def _send(self, status: int, doc: dict, extra: dict | None = None) -> None:
        blob = json.dumps(doc, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(blob)))
        # one request per connection: keeps drain-on-shutdown prompt
        self.send_header("Connection", "close")
        self.close_connection = True
        if self.path.startswith("/v1/"):
            self.send_header("Access-Control-Allow-Origin", "*")
        for k, v in (extra or {}).items():
            self.send_header(k, v)
        self.end_headers()
        self.wfile.write(blob)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.send_header("Connection", "close")
        self.close_connection = True
        self.end_headers()

    def do_GET(self):
        if self.path == "/v1/health":
            status, doc = self.app.health()
            self._send(status, doc)
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/v1/filter":
            self._send(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            self._send(400, {"error": "bad Content-Length"})
            return
        if length > MAX_BODY_BYTES:
            self._send(413, {"error": "request body too large"})
            return
        body = self.rfile.read(length)
        if not self.app.gate.acquire(blocking=False):
            self._send(
                503, {"error": "too many concurrent requests"}, {"Retry-After": "1"}
            )
            return
        try:
            status, doc = self.app.filter(body)
        finally:
            self.app.gate.release()
        self._send(status, doc)

    def log_message(self, fmt, *args):
        pass  # keep the serving loop quiet; tests assert on responses


class _Server(ThreadingHTTPServer):
    daemon_threads = False      # drain in-flight handlers on shutdown
    request_queue_size = 512    # accept bursts well beyond the admission gate


class FilterServer:
    """Bind + serve wrapper usable both from the CLI and inside tests."""

    def __init__(self, app: FilterApp):
        self.app = app
        handler = type("BoundHandler", (_Handler,), {"app": app, "timeout": app.cfg.timeout_s})
        try:
            self.httpd = _Server((app.cfg.host, app.cfg.port), handler)
        except OSError as e:
            raise BindError(f"cannot bind {app.cfg.host}:{app.cfg.port}: {e}") from e
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self.httpd.server_address[:2]

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def shutdown(self) -> None:
        self.httpd.shutdown()
        if self._thread is not None:
            self._thread.join()
        self.httpd.server_close()


def serve(cfg: ServerConfig) -> None:
    """Load the model, bind, and serve until SIGINT/SIGTERM."""
    app = FilterApp(cfg)
    app.load()
    server = FilterServer(app)

    def _stop(signum, frame):
        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGINT, _stop)
    signal.signal(signal.SIGTERM, _stop)
    host, port = server.address
    print(f"smartbullets filter service on http://{host}:{port} (model {app.model_id})")
    try:
        server.serve_forever()
    finally:
        server.httpd.server_close()
