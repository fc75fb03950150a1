"""HTTP facade exposing a loaded retina.

Every endpoint is a thin adapter over the pure module functions; nothing
here mutates the retina.  The only cross-request state is the named
category-filter registry, guarded by a lock.

Request bodies are parsed by hand instead of through validation models so
that every malformed input maps to the documented {code, message, detail}
shape with status 400 (404 for unknown terms, 413 for oversized bodies).
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import asdict, dataclass

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import textops
from .errors import FormatError, SemfoldError, TermNotFound
from .fingerprint import Fingerprint, similarity
from .retina import Retina
from .textops import TEXT_SPARSITY, CategoryFilter

DEFAULT_MAX_BODY = 1_000_000


@dataclass(frozen=True)
class ServiceConfig:
    """Server settings; the retina itself is passed to :func:`create_app`."""

    host: str = "127.0.0.1"
    port: int = 8080
    target_sparsity: float = TEXT_SPARSITY
    max_body_bytes: int = DEFAULT_MAX_BODY


class _HttpError(Exception):
    """Internal carrier for a structured HTTP error response."""

    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


def _error_response(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _fp_dict(fp: Fingerprint) -> dict:
    return {"positions": list(fp.positions)}


async def _json_body(request: Request, limit: int) -> dict:
    declared = request.headers.get("content-length")
    if declared is not None and declared.isdigit() and int(declared) > limit:
        raise _HttpError(413, "body_too_large", f"request body exceeds {limit} bytes")
    raw = await request.body()
    if len(raw) > limit:
        raise _HttpError(413, "body_too_large", f"request body exceeds {limit} bytes")
    try:
        body = json.loads(raw)
    except ValueError as exc:
        raise _HttpError(400, "malformed_json", "request body is not valid JSON", str(exc))
    if not isinstance(body, dict):
        raise _HttpError(400, "malformed_body", "request body must be a JSON object")
    return body


def _require(body: dict, key: str, kind: type, what: str) -> object:
    value = body.get(key)
    if not isinstance(value, kind):
        raise _HttpError(400, "missing_field", f"field {key!r} must be a {what}")
    return value


def _int_field(body: dict, key: str, default: int, minimum: int) -> int:
    value = body.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise _HttpError(400, "bad_field", f"field {key!r} must be an integer >= {minimum}")
    return value


def _float_field(body: dict, key: str, default: float) -> float:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _HttpError(400, "bad_field", f"field {key!r} must be a number")
    return float(value)


def _resolve(source: object, retina: Retina, target_sparsity: float) -> Fingerprint:
    """Turn a term/text/positions leaf or operator tree into a fingerprint.

    The ``{"fingerprint": {"positions": [...]}}`` wrapper that the term
    endpoint emits is accepted anywhere a leaf is, so responses can be fed
    straight back in.
    """
    if isinstance(source, dict) and len(source) == 1 and "fingerprint" in source:
        source = source["fingerprint"]
    if not isinstance(source, dict):
        raise FormatError("fingerprint source must be a JSON object")
    return textops.resolve_fingerprint(source, retina, target_sparsity)


def create_app(retina: Retina, config: ServiceConfig | None = None) -> FastAPI:
    """Build the REST application around one immutable retina."""
    cfg = config or ServiceConfig()
    app = FastAPI(title="semantic fingerprint service", docs_url=None, redoc_url=None)

    registry_lock = threading.Lock()
    registry: dict[str, CategoryFilter] = {}

    @app.exception_handler(_HttpError)
    async def _on_http_error(request: Request, exc: _HttpError) -> JSONResponse:
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    @app.exception_handler(TermNotFound)
    async def _on_term_not_found(request: Request, exc: TermNotFound) -> JSONResponse:
        return _error_response(404, "term_not_found", str(exc), exc.detail)

    @app.exception_handler(SemfoldError)
    async def _on_domain_error(request: Request, exc: SemfoldError) -> JSONResponse:
        code = re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).lower()
        return _error_response(400, code, str(exc))

    @app.exception_handler(ValueError)
    async def _on_value_error(request: Request, exc: ValueError) -> JSONResponse:
        return _error_response(400, "bad_value", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error_response(400, "malformed_request", "request failed validation", str(exc))

    # -- retina ------------------------------------------------------------

    @app.get("/retina")
    async def retina_info() -> list[dict]:
        return [retina.info().to_dict()]

    @app.get("/terms")
    async def term_fingerprint(term: str = "") -> dict:
        if not term:
            raise _HttpError(400, "missing_field", "query parameter 'term' is required")
        fp = retina.get_fingerprint(term)
        return {"term": term, "fingerprint": _fp_dict(fp)}

    @app.post("/terms/similar_terms")
    async def similar_terms(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        k = _int_field(body, "k", 20, 1)
        source = {key: value for key, value in body.items() if key != "k"}
        if not source:
            raise _HttpError(400, "missing_field", "a fingerprint source is required")
        fp = _resolve(source, retina, cfg.target_sparsity)
        if len(fp) == 0:
            return {"terms": []}
        ranked = retina.similar_terms(fp, k=k)
        return {"terms": [{"term": t, "score": s} for t, s in ranked]}

    @app.get("/terms/contexts")
    async def term_contexts(term: str = "", max_contexts: int = 10) -> dict:
        if not term:
            raise _HttpError(400, "missing_field", "query parameter 'term' is required")
        found = textops.contexts(term, retina, max_contexts=max_contexts)
        return {
            "term": term,
            "contexts": [{"label": c.label, "terms": list(c.terms)} for c in found],
        }

    # -- text ----------------------------------------------------------------

    @app.post("/text")
    async def text_fp(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        text = _require(body, "text", str, "string")
        result = textops.text_fingerprint(text, retina, cfg.target_sparsity)
        return {
            "fingerprint": _fp_dict(result.fingerprint),
            "known_words": result.known_words,
            "skipped_words": result.skipped_words,
        }

    @app.post("/text/keywords")
    async def text_keywords(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        text = _require(body, "text", str, "string")
        max_k = _int_field(body, "max_k", 10, 1)
        return {"keywords": textops.keywords(text, retina, max_k=max_k)}

    @app.post("/text/slices")
    async def text_slices(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        text = _require(body, "text", str, "string")
        window = _int_field(body, "window_sentences", 1, 1)
        threshold = _float_field(body, "cut_threshold", 0.1)
        found = textops.slices(text, retina, window_sentences=window, cut_threshold=threshold)
        return {
            "slices": [
                {"text": s.text, "fingerprint": _fp_dict(s.fingerprint)} for s in found
            ]
        }

    @app.post("/expressions")
    async def expressions(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        fp = textops.evaluate_expression(body, retina, cfg.target_sparsity)
        return {"fingerprint": _fp_dict(fp)}

    # -- comparison ----------------------------------------------------------

    @app.post("/compare")
    async def compare(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        a = _resolve(_require(body, "a", dict, "object"), retina, cfg.target_sparsity)
        b = _resolve(_require(body, "b", dict, "object"), retina, cfg.target_sparsity)
        return asdict(similarity(a, b))

    @app.post("/image/compare")
    async def image_compare(request: Request) -> Response:
        body = await _json_body(request, cfg.max_body_bytes)
        a = _resolve(_require(body, "a", dict, "object"), retina, cfg.target_sparsity)
        b = _resolve(_require(body, "b", dict, "object"), retina, cfg.target_sparsity)
        scale = _int_field(body, "scale", 4, 1)
        data = textops.render_comparison_image(a, b, scale=scale)
        return Response(content=data, media_type="image/x-portable-pixmap")

    # -- classification --------------------------------------------------------

    @app.post("/classify/create_category_filter")
    async def create_filter(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        label = _require(body, "label", str, "string")
        positives = _require(body, "positive_texts", list, "list of strings")
        negatives = body.get("negative_texts", [])
        if not isinstance(negatives, list):
            raise _HttpError(400, "bad_field", "field 'negative_texts' must be a list")
        if not all(isinstance(t, str) for t in [*positives, *negatives]):
            raise _HttpError(400, "bad_field", "example texts must be strings")
        cutoff = _float_field(body, "cutoff", 0.5)
        cat = textops.create_category_filter(
            label, positives, retina, negative_texts=negatives, cutoff=cutoff,
            target_sparsity=cfg.target_sparsity,
        )
        with registry_lock:
            registry[label] = cat
        return {
            "label": cat.label,
            "fingerprint": _fp_dict(cat.fingerprint),
            "cutoff": cat.cutoff,
        }

    @app.post("/classify")
    async def classify_doc(request: Request) -> dict:
        body = await _json_body(request, cfg.max_body_bytes)
        doc = _resolve(_require(body, "doc", dict, "object"), retina, cfg.target_sparsity)
        labels = body.get("labels")
        with registry_lock:
            if labels is None:
                chosen = list(registry.values())
            else:
                if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                    raise _HttpError(400, "bad_field", "field 'labels' must be a list of strings")
                missing = [x for x in labels if x not in registry]
                if missing:
                    raise _HttpError(
                        404, "filter_not_found",
                        f"no category filter named {missing[0]!r}",
                    )
                chosen = [registry[x] for x in labels]
        results = textops.classify(doc, chosen)
        return {
            "results": [
                {"label": r.label, "score": r.score, "accepted": r.accepted}
                for r in results
            ]
        }

    return app


def serve(retina: Retina, config: ServiceConfig | None = None) -> None:
    """Run the service under uvicorn; blocks until interrupted."""
    import uvicorn

    cfg = config or ServiceConfig()
    uvicorn.run(create_app(retina, cfg), host=cfg.host, port=cfg.port, log_level="warning")
