"""Request handling shared by the CLI and the line-delimited service.

Request document (one JSON object per line):

    {"id": ..., "file": "path/A.java" | "source": "...inline text...",
     "line": L, "col": C            # cursor form, 1-based
     | "callee": "m", "pos": N,      # callee form (optional "line" narrows it)
     "k": 10}

Response: {"id", "candidates": [{rendered, exprType, resultType, score,
diagnostics}], "request": {...}, "generated", "afterRules", "warnings"} or
{"id", "error": {"type", "message"}}.

Each request is answered from the file's text alone: the file cache of the
light model is filled with the code before the request and cleared again
afterwards, so replaying a session gives the same answers.
"""
from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

from .corpus.lexer import ParseError, Token, check_balance, tokenize
from .corpus.parser import Parser
from .corpus.requests import extract_requests
from .evaluation import FileSession
from .pipeline import RecommendError, Recommender, beam_baseline
from .typesys.index import TypeIndexError, build_type_index
from .typesys.resolve import UnitContext

log = logging.getLogger(__name__)
DEFAULT_K = 10


def parse_with_cursor(source, path, line=None, col=None):
    """Parse `source`; an empty `( )` at the cursor gets an argument hole."""
    tokens = tokenize(source, path)
    if line is not None and col is not None:
        for i in range(len(tokens) - 1):
            a, b = tokens[i], tokens[i + 1]
            if a.text == "(" and b.text == ")" and a.kind == "op" and b.kind == "op" \
                    and (a.line, a.col + 1) <= (line, col) <= (b.line, b.col):
                tokens.insert(i + 1, Token("", "hole", b.line, b.col))
                break
    check_balance(tokens, path)
    unit = Parser(tokens, path).unit()
    unit.source = source
    return unit


def _arg_span(r):
    """(start, end) source positions of the request's argument slot.

    An empty slot covers the gap between its neighbouring tokens.
    """
    toks = r.unit.tokens
    arg = r.call.args[r.pos - 1]
    first, last = toks[arg.start], toks[arg.end - 1]
    if first.kind == "hole":
        prev = toks[arg.start - 1]
        return (prev.line, prev.col + len(prev.text)), (first.line, first.col)
    return (first.line, first.col), (last.line, last.col + len(last.text))


def request_at_cursor(requests, line, col):
    """The innermost argument slot containing the cursor."""
    best, best_key = None, None
    for r in requests:
        s, e = _arg_span(r)
        if s <= (line, col) <= e:
            key = (s, (-e[0], -e[1]))
            if best_key is None or key > best_key:
                best, best_key = r, key
    return best


def request_by_callee(requests, callee, pos, line=None):
    for r in requests:
        if r.callee == callee and r.pos == pos and (line is None or r.line == line):
            return r
    return None


class ServiceError(Exception):
    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind


class Service:
    def __init__(self, trained, cfg=None, strict=None, default_k=DEFAULT_K):
        self.trained = trained
        self.cfg = cfg or trained.config()
        self.strict = trained.options.strict if strict is None else strict
        self.default_k = default_k
        self.recommender = Recommender(trained.model, trained.tables, self.cfg)

    def _load(self, doc):
        line, col = doc.get("line"), doc.get("col")
        if "source" in doc:
            source, path = doc["source"], doc.get("file") or "<inline>"
        elif "file" in doc:
            path = doc["file"]
            try:
                source = Path(path).read_text(encoding="utf-8")
            except OSError as exc:
                raise ServiceError("input", f"cannot read {path}: {exc.strerror}") from None
        else:
            raise ServiceError("malformed", "request needs 'file' or 'source'")
        cursor = "callee" not in doc
        try:
            return parse_with_cursor(source, path, line if cursor else None,
                                     col if cursor else None)
        except ParseError as exc:
            raise ServiceError("parse", str(exc)) from None

    def _find(self, doc, requests):
        if "callee" in doc:
            pos = doc.get("pos")
            if not isinstance(pos, int) or pos < 1:
                raise ServiceError("malformed", "'pos' must be an integer >= 1")
            r = request_by_callee(requests, doc["callee"], pos, doc.get("line"))
            if r is None:
                raise ServiceError("not-found", f"no call to {doc['callee']} with argument {pos}")
            return r
        line, col = doc.get("line"), doc.get("col")
        if not isinstance(line, int) or not isinstance(col, int):
            raise ServiceError("malformed", "request needs 'line' and 'col' or 'callee' and 'pos'")
        r = request_at_cursor(requests, line, col)
        if r is None:
            raise ServiceError("not-found", f"no argument slot at {line}:{col}")
        return r

    def handle(self, doc):
        if not isinstance(doc, dict):
            raise ServiceError("malformed", "request must be a JSON object")
        k = doc.get("k", self.default_k)
        if k is not None and (not isinstance(k, int) or k < 1):
            raise ServiceError("malformed", "'k' must be an integer >= 1")
        unit = self._load(doc)
        try:
            index = build_type_index([unit], [self.trained.types_doc])
        except TypeIndexError as exc:
            raise ServiceError("index", str(exc)) from None
        ctx = UnitContext(unit, index, self.strict)
        r = self._find(doc, extract_requests(unit))
        desc = {"callee": r.callee, "pos": r.pos, "line": r.line, "col": r.col, "key": r.key}
        model = self.trained.model
        session = FileSession(model, unit)
        try:
            session.advance(r.offset)
            if doc.get("mode") == "beam":
                return {"request": desc, "candidates": beam_baseline(r, model, k or DEFAULT_K)}
            try:
                ranked = self.recommender.recommend(r, ctx, k)
            except RecommendError as exc:
                raise ServiceError(exc.kind, exc.message) from None
        finally:
            session.close()
        out = ranked.to_json()
        out["request"] = desc
        if r.expected is not None:
            out["request"]["expectedTypes"] = list(r.expected.types)
        return out

    def respond(self, line):
        """One response document for one request line; never raises."""
        rid = None
        try:
            try:
                doc = json.loads(line)
            except ValueError as exc:
                raise ServiceError("malformed", f"invalid JSON: {exc}") from None
            if isinstance(doc, dict):
                rid = doc.get("id")
            out = self.handle(doc)
        except ServiceError as exc:
            return {"id": rid, "error": {"type": exc.kind, "message": str(exc)}}
        except Exception as exc:  # keep serving
            log.exception("request failed")
            return {"id": rid, "error": {"type": "internal", "message": f"{type(exc).__name__}: {exc}"}}
        return dict(out, id=rid)

    def serve(self, stdin=None, stdout=None):
        stdin = stdin or sys.stdin
        stdout = stdout or sys.stdout
        n = 0
        for line in stdin:
            if not line.strip():
                continue
            stdout.write(json.dumps(self.respond(line), sort_keys=True) + "\n")
            stdout.flush()
            n += 1
        return n
