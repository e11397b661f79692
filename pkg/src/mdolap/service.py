"""Stateless HTTP facade over one constellation snapshot.

Endpoints (JSON bodies, UTF-8):

    GET  /health     liveness and whether a store is loaded
    GET  /schema     full schema with per-constraint holds status
    POST /validate   every declared constraint checked, with witnesses
    POST /query      evaluate a query expression

A query request carries exactly one of ``expr`` (source text) or
``query`` (the JSON expression tree), plus an optional ``mode``
(``STRICT`` or ``LEGACY``) and ``override`` flag for inconsistent stores.
The server holds no session state: clients own their expression and wrap
operators around it; identical requests against the same snapshot return
byte-identical bodies.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from . import algebra, constraints as cons, dsl, engine, model
from .errors import InconsistentStore, MdolapError

JSON_TYPE = "application/json; charset=utf-8"


def _dump(obj) -> bytes:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _error_body(code: str, message: str, diagnostics=None) -> bytes:
    body = {"code": code, "message": message}
    if diagnostics is not None:
        body["diagnostics"] = [d.to_json() for d in diagnostics]
    return _dump(body)


def schema_json(c: model.Constellation, results: list[cons.ConstraintResult]) -> dict:
    return {
        "name": c.name,
        "dimensions": [
            {
                "name": d.name,
                "attributes": [{"name": a, "kind": k} for a, k in d.attributes.items()],
                "hierarchies": [
                    {
                        "name": h.name,
                        "params": list(h.params),
                        "weak": {p: list(attrs) for p, attrs in h.weak.items()},
                        "when": model.condition_text(h.cond),
                        "memberCount": len(model.hierarchy_members(d, h.name)),
                    }
                    for h in d.hierarchies.values()
                ],
                "instanceCount": len(d.instances),
            }
            for d in c.dimensions.values()
        ],
        "facts": [
            {
                "name": f.name,
                "measures": [{"name": m.name, "kind": m.kind, "agg": m.agg} for m in f.measures],
                "dimensions": list(f.dims),
                "instanceCount": len(f.instances),
            }
            for f in c.facts.values()
        ],
        "constraints": [
            {**r.constraint.to_json(), "holds": r.holds} for r in results
        ],
        "consistent": cons.all_hold(results),
    }


class Api:
    """Pure request dispatcher; the socket layer below stays trivial.

    Schema and validation bodies are precomputed per snapshot, which makes
    the byte-identical guarantee obvious and repeated calls cheap.
    """

    def __init__(self, constellation: Optional[model.Constellation]):
        self.constellation = constellation
        if constellation is not None:
            results = cons.check_all(constellation)
            self._schema_body = _dump(schema_json(constellation, results))
            self._validate_body = _dump(
                {"allHold": cons.all_hold(results), "results": [r.to_json() for r in results]}
            )
            self._health_body = _dump({"status": "ok", "store": constellation.name})
        else:
            self._health_body = _dump({"status": "ok", "store": None})

    def handle(self, method: str, path: str, body: bytes) -> tuple[int, bytes]:
        if path == "/health" and method == "GET":
            return 200, self._health_body
        if path == "/schema" and method == "GET":
            if self.constellation is None:
                return 503, _error_body("no-store", "no store loaded")
            return 200, self._schema_body
        if path == "/validate" and method == "POST":
            if self.constellation is None:
                return 503, _error_body("no-store", "no store loaded")
            return 200, self._validate_body
        if path == "/query" and method == "POST":
            if self.constellation is None:
                return 503, _error_body("no-store", "no store loaded")
            return self._query(body)
        if path in ("/health", "/schema", "/validate", "/query"):
            return 405, _error_body("method-not-allowed", f"{method} is not supported on {path}")
        return 404, _error_body("not-found", f"no such endpoint: {path}")

    def _query(self, body: bytes) -> tuple[int, bytes]:
        try:
            request = json.loads(body.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return 400, _error_body("bad-request", f"request body is not valid JSON: {exc}")
        if not isinstance(request, dict):
            return 400, _error_body("bad-request", "request body must be a JSON object")
        text = request.get("expr")
        tree = request.get("query")
        if (text is None) == (tree is None):
            return 400, _error_body(
                "bad-request", "provide exactly one of 'expr' (text) or 'query' (JSON tree)"
            )
        mode = request.get("mode", algebra.STRICT)
        if mode not in (algebra.STRICT, algebra.LEGACY):
            return 400, _error_body("bad-request", f"unknown mode {mode!r}")
        override = request.get("override", False)
        if not isinstance(override, bool):
            return 400, _error_body("bad-request", "'override' must be a boolean")

        if text is not None:
            if not isinstance(text, str):
                return 400, _error_body("bad-request", "'expr' must be a string")
            expr, diagnostics = dsl.parse_query(text)
            if expr is None:
                return 400, _error_body("parse-error", "query text does not parse", diagnostics)
        else:
            try:
                expr = dsl.query_from_json(tree)
            except ValueError as exc:
                return 400, _error_body("bad-query-tree", str(exc))

        try:
            table, grid = engine.evaluate(
                self.constellation, expr, mode, allow_inconsistent=override
            )
        except InconsistentStore as exc:
            return 409, _error_body(exc.code, exc.message)
        except MdolapError as exc:
            return 400, _error_body(exc.code, exc.message)
        response = algebra.table_to_json(self.constellation, table, grid)
        response["expr"] = dsl.format_query(expr)
        return 200, _dump(response)


class _Handler(BaseHTTPRequestHandler):
    api: Api  # set by make_server
    protocol_version = "HTTP/1.1"

    def _respond(self, status: int, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", JSON_TYPE)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:
        status, body = self.api.handle("GET", self.path, b"")
        self._respond(status, body)

    def do_POST(self) -> None:
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length) if length else b""
        status, response = self.api.handle("POST", self.path, body)
        self._respond(status, response)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib signature
        pass  # keep the server quiet; the CLI reports the bind address


def make_server(
    constellation: Optional[model.Constellation], host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    api = Api(constellation)
    handler = type("BoundHandler", (_Handler,), {"api": api})
    return ThreadingHTTPServer((host, port), handler)
