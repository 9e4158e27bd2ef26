"""Read-only JSON service over an immutable graph snapshot.

Each request reads ``server.snapshot`` once, so replacing the attribute via
``swap`` is atomic from a handler's point of view.
"""

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import List
from urllib.parse import parse_qs, unquote, urlsplit

from .cq import CQS, CompetencyQuestion, answer
from .errors import InvalidParams, TeachKGError, UnknownEntity, UnsupportedBeforeInference
from .kg import TeachingKG
from .pkg import PersonalKG, resolve_material
from .turtle import export_turtle

# (collection, action) -> competency question name
ROUTES = {
    ("topics", "teachers"): "who-teaches",
    ("topics", "materials"): "materials-for",
    ("topics", "labs"): "labs-for",
    ("topics", "prerequisites"): "prerequisites-of",
    ("courses", "audience"): "target-audience",
    ("courses", "level"): "educational-level",
    ("courses", "teachers"): "who-teaches-course",
    ("courses", "slides"): "linked-slides",
    ("courses", "labs"): "labs-of",
    ("courses", "similar"): "similar-courses",
    ("courses", "suggested"): "suggested-resources",
    ("datasets", "exercises"): "exercises-for",
    ("datasets", "courses"): "courses-using",
    ("materials", "similar"): "courses-using-similar",
    ("materials", "topics"): "topics-covered",
    ("materials", "access"): "is-open-access",
    ("materials", "similarity"): "similarity-to",
}


@dataclass
class Snapshot:
    kg: TeachingKG
    pkgs: List[PersonalKG] = field(default_factory=list)
    default_k: int = 5
    turtle: str = ""

    @classmethod
    def of(cls, kg, pkgs=(), default_k=5):
        kg.store.freeze()
        return cls(kg=kg, pkgs=list(pkgs), default_k=default_k, turtle=export_turtle(kg.store))


def cq_descriptors():
    return [{"name": c.name, "variant": c.variant, "params": list(c.params), "wording": c.wording}
            for c in CQS]


class HttpError(Exception):
    def __init__(self, status, body):
        super().__init__(status)
        self.status = status
        self.body = body


def _flag(query, name):
    values = query.get(name)
    if not values:
        return False
    if values[-1] in ("true", "1"):
        return True
    if values[-1] in ("false", "0"):
        return False
    raise HttpError(400, {"error": f"{name} must be true or false"})


def _k(query, default):
    values = query.get("k")
    if not values:
        return default
    try:
        k = int(values[-1])
    except ValueError:
        raise HttpError(400, {"error": "k must be a positive integer"}) from None
    if k < 1:
        raise HttpError(400, {"error": "k must be a positive integer"})
    return k


def handle(snapshot, path, query):
    """Route a GET request; returns (status, payload, content type)."""
    parts = [unquote(p) for p in path.strip("/").split("/")] if path.strip("/") else []
    if parts == ["cqs"]:
        return 200, cq_descriptors(), "application/json"
    if parts == ["export.ttl"]:
        return 200, snapshot.turtle, "text/turtle; charset=utf-8"
    if len(parts) not in (3, 4) or (parts[0], parts[2]) not in ROUTES:
        raise HttpError(404, {"error": "no such endpoint", "path": path})
    collection, target, action = parts[:3]
    name = ROUTES[(collection, action)]
    if (action == "similarity") != (len(parts) == 4):
        raise HttpError(404, {"error": "no such endpoint", "path": path})
    kw = {}
    if name in ("similar-courses", "suggested-resources", "courses-using-similar"):
        kw["k"] = _k(query, snapshot.default_k)
    if name == "similarity-to":
        kw["other"] = parts[3]
    if name == "prerequisites-of":
        kw["transitive"] = _flag(query, "transitive")
    try:
        if name == "is-open-access" and query.get("requester"):
            res = resolve_material(snapshot.kg.store, snapshot.pkgs, target, query["requester"][-1])
            return 200, {"material": target, "requester": query["requester"][-1],
                         **res.to_json()}, "application/json"
        cq = CompetencyQuestion(name, target, **kw)
        return 200, answer(snapshot.kg, cq).to_json(), "application/json"
    except UnknownEntity as exc:
        raise HttpError(404, {"error": str(exc), "id": str(exc.id)}) from None
    except InvalidParams as exc:
        raise HttpError(400, {"error": str(exc)}) from None
    except UnsupportedBeforeInference as exc:
        raise HttpError(409, {"error": str(exc)}) from None
    except TeachKGError as exc:
        raise HttpError(500, {"error": str(exc)}) from None


class Handler(BaseHTTPRequestHandler):
    server_version = "teachkg"

    def log_message(self, fmt, *args):
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    def _send(self, status, payload, ctype="application/json"):
        if ctype == "application/json":
            body = (json.dumps(payload, ensure_ascii=False) + "\n").encode("utf-8")
        else:
            body = payload.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        snapshot = self.server.snapshot
        url = urlsplit(self.path)
        try:
            status, payload, ctype = handle(snapshot, url.path, parse_qs(url.query))
        except HttpError as exc:
            status, payload, ctype = exc.status, exc.body, "application/json"
        self._send(status, payload, ctype)

    def _read_only(self):
        self._send(405, {"error": "read-only service"})

    do_POST = do_PUT = do_DELETE = do_PATCH = _read_only


class TeachKGServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, snapshot, verbose=False):
        super().__init__(address, Handler)
        self.snapshot = snapshot
        self.verbose = verbose
        self._swap_lock = threading.Lock()

    def swap(self, snapshot):
        """Install a rebuilt snapshot; in-flight requests keep the old one."""
        with self._swap_lock:
            self.snapshot = snapshot


def make_server(snapshot, host="127.0.0.1", port=8080, verbose=False):
    return TeachKGServer((host, port), snapshot, verbose=verbose)


def serve_in_thread(snapshot, host="127.0.0.1", port=0):
    """Start a server on a background thread; returns (server, thread)."""
    server = make_server(snapshot, host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
