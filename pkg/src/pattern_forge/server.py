"""Local JSON endpoint backing the browser playground.

POST /render  {"spec": {...}, "host": {...}, "seed"?, "padding"?, "precision"?}
              -> image/svg+xml
POST /metrics {"spec": {...}, "host": {...}, "seed"?, "supersample"?}
              -> application/json (PatternMetrics)
GET  /schema  -> application/json (the published spec JSON Schema)

Spec errors return 400 with {"path", "message"}. CORS is open so a
playground served from another origin (or the filesystem) can call in.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources

from .metrics import compute_metrics
from .model import PatternError, SpecError
from .pipeline import compile_pattern
from .render import DEFAULT_PADDING, DEFAULT_PRECISION, render_svg
from .specio import build_spec, parse_host

_MAX_BODY = 16 * 1024 * 1024


class _Handler(BaseHTTPRequestHandler):
    server_version = "pattern-forge"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _reply(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _reply_json(self, status: int, obj) -> None:
        self._reply(status, json.dumps(obj).encode("utf-8"), "application/json")

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self._cors()
        self.end_headers()

    def do_GET(self) -> None:
        if self.path == "/schema":
            body = resources.files("pattern_forge").joinpath(
                "schema/pattern-spec.schema.json").read_bytes()
            self._reply(200, body, "application/json")
        elif self.path in ("/", "/health"):
            self._reply_json(200, {"service": "pattern-forge",
                                   "endpoints": ["/render", "/metrics", "/schema"]})
        else:
            self._reply_json(404, {"message": "not found"})

    def do_POST(self) -> None:
        if self.path not in ("/render", "/metrics"):
            self._reply_json(404, {"message": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            if length > _MAX_BODY:
                self._reply_json(413, {"message": "request too large"})
                return
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
            spec = build_spec(payload["spec"])
            host = parse_host(payload["host"])
            seed = payload.get("seed")
            resolved = compile_pattern(spec, host, seed_override=seed)
            if self.path == "/render":
                doc = render_svg(
                    resolved,
                    padding=float(payload.get("padding", DEFAULT_PADDING)),
                    precision=int(payload.get("precision", DEFAULT_PRECISION)))
                self._reply(200, doc.data, "image/svg+xml")
            else:
                metrics = compute_metrics(
                    resolved, supersample=int(payload.get("supersample", 4)))
                self._reply_json(200, metrics.to_dict())
        except SpecError as exc:
            self._reply_json(400, {"path": exc.path, "message": exc.message})
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            self._reply_json(400, {"path": "", "message": str(exc)})
        except PatternError as exc:
            self._reply_json(400, {"path": "", "message": str(exc)})


def make_server(port: int = 8765, bind: str = "127.0.0.1") -> ThreadingHTTPServer:
    return ThreadingHTTPServer((bind, port), _Handler)


def serve(port: int = 8765, bind: str = "127.0.0.1") -> None:
    httpd = make_server(port, bind)
    print(f"pattern-forge serving on http://{bind}:{httpd.server_address[1]}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
