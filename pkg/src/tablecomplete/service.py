"""HTTP facade: suggestion, search, and health endpoints over a loaded index bundle.

Request bodies are validated by hand so every error response carries the
same machine-readable envelope: {"code", "message", "details"}. The engine
time reported as ``tookMicros`` wraps the engine calls only, excluding JSON
parsing, serialization, and socket I/O.
"""

from __future__ import annotations

import json
import time
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .columns import suggest_columns
from .indexstore import IndexBundle
from .model import ScoringParams, SeedTable, Suggestion, normalize_label, tokenize
from .rows import suggest_rows

MAX_LIMIT = 100
DEFAULT_LIMIT = 10
SNIPPET_CHARS = 160


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


def _error_response(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details},
    )


def _parse_limit(value, *, source: str) -> int:
    if value is None:
        return DEFAULT_LIMIT
    if isinstance(value, str):
        try:
            value = int(value)
        except ValueError:
            raise ApiError(422, "INVALID_LIMIT", f"{source} limit must be an integer")
    if not isinstance(value, int) or isinstance(value, bool):
        raise ApiError(422, "INVALID_LIMIT", f"{source} limit must be an integer")
    if not 1 <= value <= MAX_LIMIT:
        raise ApiError(
            422, "INVALID_LIMIT", f"limit must be between 1 and {MAX_LIMIT}", details=value
        )
    return value


def _parse_seed(body: dict) -> SeedTable:
    seed_obj = body.get("seed")
    if not isinstance(seed_obj, dict):
        raise ApiError(422, "INVALID_SEED", "request body must carry a 'seed' object")
    caption = seed_obj.get("caption", "")
    entities = seed_obj.get("entities", [])
    labels = seed_obj.get("labels", [])
    if not isinstance(caption, str):
        raise ApiError(422, "INVALID_SEED", "seed caption must be a string")
    if not isinstance(entities, list) or not all(isinstance(e, str) for e in entities):
        raise ApiError(422, "INVALID_SEED", "seed entities must be a list of strings")
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise ApiError(422, "INVALID_SEED", "seed labels must be a list of strings")
    try:
        return SeedTable(caption=caption, entities=tuple(entities), labels=tuple(labels))
    except ValueError as exc:
        raise ApiError(422, "INVALID_SEED", str(exc))


def _check_known_entities(seed: SeedTable, bundle: IndexBundle) -> None:
    unknown = sorted(e for e in seed.entities if bundle.entity(e) is None)
    if unknown:
        raise ApiError(
            422, "UNKNOWN_ENTITY", "seed references unknown entity ids", details=unknown
        )


def _suggestion_json(suggestion: Suggestion) -> dict:
    return {
        "target": suggestion.target,
        "score": suggestion.score,
        "components": dict(suggestion.components),
    }


def _abstract_snippet(abstract: str) -> str:
    if len(abstract) <= SNIPPET_CHARS:
        return abstract
    cut = abstract.rfind(" ", 0, SNIPPET_CHARS)
    return abstract[: cut if cut > 0 else SNIPPET_CHARS].rstrip() + "…"


def _match_quality(query: str, query_terms: list[str], name: str, name_terms: list[str]) -> Optional[int]:
    """0 exact, 1 whole-name prefix, 2 every query token is a prefix of some name token."""
    folded = name.casefold()
    if folded == query:
        return 0
    if folded.startswith(query):
        return 1
    if query_terms and all(
        any(token.startswith(term) for token in name_terms) for term in query_terms
    ):
        return 2
    return None


def create_app(bundle: IndexBundle, params: Optional[ScoringParams] = None) -> FastAPI:
    params = params or ScoringParams()
    app = FastAPI(title="tablecomplete", docs_url=None, redoc_url=None)

    label_counts = {
        norm: len(ids) for norm, ids in bundle.table_index.label_postings.items()
    }
    entity_names = [
        (entity_id, record.label, tokenize(record.label))
        for entity_id, record in sorted(bundle.entity_index.records.items())
    ]

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, exc: ApiError) -> JSONResponse:
        return _error_response(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(_: Request, exc: StarletteHTTPException) -> JSONResponse:
        return _error_response(exc.status_code, "HTTP_ERROR", str(exc.detail))

    @app.exception_handler(Exception)
    async def handle_unexpected(_: Request, exc: Exception) -> JSONResponse:
        return _error_response(500, "INTERNAL", "internal server error")

    async def _read_json_body(request: Request) -> dict:
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            raise ApiError(400, "MALFORMED_JSON", "request body is not valid JSON")
        if not isinstance(body, dict):
            raise ApiError(400, "MALFORMED_JSON", "request body must be a JSON object")
        return body

    @app.post("/v1/suggest/rows")
    async def handle_suggest_rows(request: Request) -> JSONResponse:
        body = await _read_json_body(request)
        limit = _parse_limit(body.get("limit"), source="body")
        seed = _parse_seed(body)
        if not seed.entities:
            raise ApiError(
                422, "EMPTY_SEED_ENTITIES", "row population requires at least one seed entity"
            )
        _check_known_entities(seed, bundle)
        started = time.perf_counter_ns()
        suggestions = suggest_rows(seed, bundle, params, limit)
        took_micros = (time.perf_counter_ns() - started) // 1000
        return JSONResponse(
            {
                "suggestions": [_suggestion_json(s) for s in suggestions],
                "tookMicros": took_micros,
            }
        )

    @app.post("/v1/suggest/columns")
    async def handle_suggest_columns(request: Request) -> JSONResponse:
        body = await _read_json_body(request)
        limit = _parse_limit(body.get("limit"), source="body")
        seed = _parse_seed(body)
        if not (seed.caption or seed.entities or seed.labels):
            raise ApiError(422, "EMPTY_SEED", "column population requires a non-empty seed")
        _check_known_entities(seed, bundle)
        started = time.perf_counter_ns()
        suggestions = suggest_columns(seed, bundle, params, limit)
        took_micros = (time.perf_counter_ns() - started) // 1000
        return JSONResponse(
            {
                "suggestions": [_suggestion_json(s) for s in suggestions],
                "tookMicros": took_micros,
            }
        )

    @app.get("/v1/entities/search")
    async def handle_entity_search(request: Request) -> JSONResponse:
        q = request.query_params.get("q", "")
        if not q.strip():
            raise ApiError(400, "EMPTY_QUERY", "query parameter 'q' must be non-empty")
        limit = _parse_limit(request.query_params.get("limit"), source="query")
        query = q.strip().casefold()
        query_terms = tokenize(query)
        matches: list[tuple[int, str]] = []
        for entity_id, name, name_terms in entity_names:
            quality = _match_quality(query, query_terms, name, name_terms)
            if quality is not None:
                matches.append((quality, entity_id))
        matches.sort()
        results = []
        for _, entity_id in matches[:limit]:
            record = bundle.entity(entity_id)
            results.append(
                {
                    "id": record.id,
                    "label": record.label,
                    "abstractSnippet": _abstract_snippet(record.abstract),
                }
            )
        return JSONResponse(results)

    @app.get("/v1/labels/search")
    async def handle_label_search(request: Request) -> JSONResponse:
        q = request.query_params.get("q", "")
        if not q.strip():
            raise ApiError(400, "EMPTY_QUERY", "query parameter 'q' must be non-empty")
        limit = _parse_limit(request.query_params.get("limit"), source="query")
        query = normalize_label(q)
        query_terms = tokenize(query)
        matches: list[tuple[int, str, str]] = []
        for norm, count in label_counts.items():
            tokens = norm.split()
            if norm.startswith(query) or (
                query_terms
                and all(any(t.startswith(term) for t in tokens) for term in query_terms)
            ):
                matches.append((-count, norm, bundle.label_display[norm]))
        matches.sort()
        return JSONResponse(
            [
                {"label": display, "tableCount": -neg_count}
                for neg_count, _, display in matches[:limit]
            ]
        )

    @app.get("/v1/entities/{entity_id}")
    async def handle_entity_get(entity_id: str) -> JSONResponse:
        record = bundle.entity(entity_id)
        if record is None:
            raise ApiError(404, "UNKNOWN_ENTITY", f"no entity with id {entity_id!r}")
        return JSONResponse(
            {
                "id": record.id,
                "label": record.label,
                "abstract": record.abstract,
                "categories": sorted(record.categories),
            }
        )

    @app.get("/v1/health")
    async def handle_health() -> JSONResponse:
        return JSONResponse(
            {
                "status": "ok",
                "tables": bundle.collection.table_count,
                "entities": len(bundle.entity_index.records),
            }
        )

    return app
