"""Annotation server: a JSONL-backed record store behind a small HTTP API.

Endpoints (all JSON):

    GET  /api/typology          the 13 annotation codes with labels
    GET  /api/corpus            record summaries (id, source excerpt, span count, revision)
    GET  /api/records/{id}      one full record, spans carrying their surface text
    PUT  /api/records/{id}      update spans and tgt_norm under optimistic locking
    POST /api/preview           normalized text and variants for an unsaved record
    GET  /api/stats             corpus statistics under both counting modes

Updates must carry the revision the client last saw; a mismatch returns 409
with the server's copy so the client can merge. Invalid spans return 422
with span-level diagnostics. Successful updates bump the revision and
atomically rewrite the backing JSONL file (temp file then rename), so a
crash can never leave a half-written corpus behind.

When a UI directory is configured, anything outside /api/ is served from it
statically.
"""

from __future__ import annotations

import json
import mimetypes
import os
import re
import tempfile
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterable

from . import generate
from .corpus import (
    AnnotatedRecord,
    Corpus,
    CorpusValidationError,
    TypologyCode,
    corpus_stats,
    parse_corpus,
    record_from_dict,
    serialize_corpus,
    src_normalized,
)

_EXCERPT_LEN = 80


class RecordNotFound(KeyError):
    pass


class RevisionConflict(Exception):
    def __init__(self, expected: int, actual: int, record: AnnotatedRecord):
        super().__init__(f"expected revision {expected}, record is at {actual}")
        self.expected = expected
        self.actual = actual
        self.record = record


def record_to_api(record: AnnotatedRecord) -> dict:
    """Record dict as served over the API: wire schema plus span surfaces."""
    obj = record.to_dict()
    for span, wire in zip(record.spans, obj["spans"]):
        wire["surface"] = span.surface
    obj["src_normalized"] = src_normalized(record)
    return obj


def typology_payload() -> list[dict]:
    return [{"code": int(c), "name": c.label, "description": c.description}
            for c in TypologyCode]


def preview_payload(body: dict) -> dict:
    """Variants for an unsaved record; used by editors for live preview."""
    if not isinstance(body, dict) or "record" not in body:
        raise CorpusValidationError("malformed-line", "preview body must carry a 'record' object")
    raw = dict(body["record"])
    raw.setdefault("id", "preview")
    raw.setdefault("tgt", "-")
    raw.setdefault("tgt_norm", "-")
    raw.setdefault("revision", 0)
    record = record_from_dict(raw)
    mode = body.get("mode", "exactly_n")
    params = body.get("params", {})
    corpus = Corpus(name="preview", src_lang="", tgt_lang="", records=(record,))
    if mode == "single_type":
        eval_set = generate.single_type_sets(corpus, int(params.get("code", 1)),
                                             strict=bool(params.get("strict", False)))
    elif mode == "exactly_n":
        lo = int(params.get("lo", params.get("n", 1)))
        hi = int(params.get("hi", lo))
        cap = params.get("cap")
        eval_set = generate.exactly_n_sets(corpus, lo, hi, cap=int(cap) if cap else None)
    else:
        raise CorpusValidationError("malformed-line", f"unknown preview mode {mode!r}")
    return {
        "normalized": src_normalized(record),
        "label": eval_set.label,
        "truncated": eval_set.truncated,
        "variants": [
            {"text": e.variant.text, "kept": list(e.variant.kept),
             "kept_codes": list(e.variant.kept_codes), "n": e.variant.n,
             "pure": e.variant.pure}
            for e in eval_set.entries
        ],
    }


class CorpusStore:
    """Thread-safe record store that persists every accepted update."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        with open(path, "rb") as fh:
            corpus = parse_corpus(fh)
        self._records: dict[str, AnnotatedRecord] = {r.id: r for r in corpus.records}
        self._meta = (corpus.name, corpus.src_lang, corpus.tgt_lang)

    def corpus(self) -> Corpus:
        name, src_lang, tgt_lang = self._meta
        return Corpus(name=name, src_lang=src_lang, tgt_lang=tgt_lang,
                      records=tuple(self._records.values()))

    def summaries(self) -> list[dict]:
        with self._lock:
            return [{
                "id": r.id,
                "src": r.src[:_EXCERPT_LEN] + ("…" if len(r.src) > _EXCERPT_LEN else ""),
                "span_count": len(r.spans),
                "revision": r.revision,
            } for r in self._records.values()]

    def get(self, record_id: str) -> AnnotatedRecord:
        with self._lock:
            try:
                return self._records[record_id]
            except KeyError:
                raise RecordNotFound(record_id) from None

    def stats(self) -> dict:
        with self._lock:
            return corpus_stats(self.corpus()).to_dict()

    def update(self, record_id: str, body: dict) -> AnnotatedRecord:
        """Apply an edit under optimistic locking and persist it.

        Raises RecordNotFound, RevisionConflict, or CorpusValidationError
        (the latter with full span diagnostics, for a 422).
        """
        if not isinstance(body, dict) or "expected_revision" not in body:
            raise CorpusValidationError("malformed-line", "update body must carry 'expected_revision'")
        with self._lock:
            current = self._records.get(record_id)
            if current is None:
                raise RecordNotFound(record_id)
            expected = body["expected_revision"]
            if expected != current.revision:
                raise RevisionConflict(expected, current.revision, current)
            candidate = {
                "id": current.id,
                "src": current.src,
                "tgt": current.tgt,
                "tgt_norm": body.get("tgt_norm", current.tgt_norm),
                "revision": current.revision + 1,
                "spans": body.get("spans", [s.to_dict() for s in current.spans]),
            }
            updated = record_from_dict(candidate)
            self._records[record_id] = updated
            self._persist()
            return updated

    def _persist(self) -> None:
        data = serialize_corpus(self.corpus())
        directory = os.path.dirname(os.path.abspath(self.path)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".corpus-", suffix=".jsonl")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class ApiHandler(BaseHTTPRequestHandler):
    server_version = "ugc-bench"
    protocol_version = "HTTP/1.1"

    @property
    def store(self) -> CorpusStore:
        return self.server.store  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        if not getattr(self.server, "quiet", False):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload, content_type="application/json; charset=utf-8"):
        body = payload if isinstance(payload, bytes) else \
            json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return None

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/api/typology":
            return self._send(200, typology_payload())
        if path == "/api/corpus":
            return self._send(200, self.store.summaries())
        if path == "/api/stats":
            return self._send(200, self.store.stats())
        m = re.fullmatch(r"/api/records/([^/]+)", path)
        if m:
            try:
                record = self.store.get(m.group(1))
            except RecordNotFound:
                return self._send(404, {"error": f"no record {m.group(1)!r}"})
            return self._send(200, record_to_api(record))
        if not path.startswith("/api/"):
            return self._serve_static(path)
        return self._send(404, {"error": f"no route for {path}"})

    def do_PUT(self):
        m = re.fullmatch(r"/api/records/([^/]+)", self.path.split("?", 1)[0])
        if not m:
            return self._send(404, {"error": f"no route for {self.path}"})
        body = self._read_json()
        if body is None:
            return self._send(400, {"error": "request body is not valid JSON"})
        try:
            updated = self.store.update(m.group(1), body)
        except RecordNotFound:
            return self._send(404, {"error": f"no record {m.group(1)!r}"})
        except RevisionConflict as e:
            return self._send(409, {
                "error": "revision conflict",
                "expected_revision": e.expected,
                "actual_revision": e.actual,
                "record": record_to_api(e.record),
            })
        except CorpusValidationError as e:
            return self._send(422, {
                "error": "validation failed",
                "diagnostics": [d.to_dict() for d in e.diagnostics],
            })
        return self._send(200, record_to_api(updated))

    def do_POST(self):
        if self.path.split("?", 1)[0] != "/api/preview":
            return self._send(404, {"error": f"no route for {self.path}"})
        body = self._read_json()
        if body is None:
            return self._send(400, {"error": "request body is not valid JSON"})
        try:
            return self._send(200, preview_payload(body))
        except CorpusValidationError as e:
            return self._send(422, {
                "error": "validation failed",
                "diagnostics": [d.to_dict() for d in e.diagnostics],
            })
        except (ValueError, TypeError) as e:
            return self._send(400, {"error": str(e)})

    def _serve_static(self, path: str):
        ui_dir = getattr(self.server, "ui_dir", None)
        if not ui_dir:
            return self._send(404, {"error": f"no route for {path}"})
        rel = path.lstrip("/") or "index.html"
        full = os.path.realpath(os.path.join(ui_dir, rel))
        if not full.startswith(os.path.realpath(ui_dir) + os.sep) and full != os.path.realpath(ui_dir):
            return self._send(404, {"error": "not found"})
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            return self._send(404, {"error": "not found"})
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as fh:
            return self._send(200, fh.read(), content_type=ctype)


def make_server(corpus_path: str, host: str = "127.0.0.1", port: int = 8737,
                ui_dir: str | None = None, quiet: bool = False) -> ThreadingHTTPServer:
    """Build the HTTP server; callers run serve_forever() on it."""
    server = ThreadingHTTPServer((host, port), ApiHandler)
    server.store = CorpusStore(corpus_path)  # type: ignore[attr-defined]
    server.ui_dir = ui_dir  # type: ignore[attr-defined]
    server.quiet = quiet  # type: ignore[attr-defined]
    return server
