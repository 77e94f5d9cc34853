"""HTTP face of the repair engine.

POST /repair is side-effect free: it parses, consults memory for feedback if
none came with the request, runs a corrector, and returns the edit plus the
repaired script. POST /feedback is the only writer. Memory writes are
persisted (append + flush) before the response is sent.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .config import Config
from .correctors import (
    CorrectionRequest,
    ExternalCorrectorError,
    ExternalModelCorrector,
    FeedbackSource,
    KeywordCorrector,
    NoopCorrector,
    RetrievalCorrector,
    correct,
)
from .edits import EditParseError, parse_edit, serialize_edit
from .engine import EditApplicationError, apply_edit
from .graph import ScriptError, parse_dot, serialize_dot
from .memory import FeedbackMemory, HashingEmbedder, HttpEmbedder


class RepairIn(BaseModel):
    script_dot: str
    feedback: str | None = None
    corrector: str | None = None


class RepairOut(BaseModel):
    edit: str
    repaired_dot: str
    feedback_source: str
    corrector: str
    similarity: float | None = None
    retrieved_id: int | None = None
    note: str | None = None


class FeedbackIn(BaseModel):
    script_dot: str
    feedback: str = Field(min_length=1)
    edit: str | None = None


class FeedbackOut(BaseModel):
    record_id: int


def _build_embedder(cfg: Config):
    if cfg.embedding_backend == "http":
        if not cfg.embedding_url:
            raise ValueError("embedding_backend=http needs embedding_url")
        return HttpEmbedder(cfg.embedding_url, cfg.embedding_dim, timeout=cfg.http_timeout)
    if cfg.embedding_backend != "hashing":
        raise ValueError(f"unknown embedding backend {cfg.embedding_backend!r}")
    return HashingEmbedder(cfg.embedding_dim)


def create_app(cfg: Config | None = None, memory: FeedbackMemory | None = None) -> FastAPI:
    cfg = cfg or Config()
    if memory is None:
        memory = FeedbackMemory(
            embedder=_build_embedder(cfg),
            threshold=cfg.similarity_threshold,
            path=cfg.memory_path,
        )

    correctors = {
        "noop": NoopCorrector(),
        "keyword": KeywordCorrector(),
        "retrieval": RetrievalCorrector(),
    }
    if cfg.external_corrector_url:
        correctors["external"] = ExternalModelCorrector(cfg.external_corrector_url, timeout=cfg.http_timeout)

    app = FastAPI(title="scriptfix", version="0.1.0")
    app.state.memory = memory
    app.state.config = cfg

    if cfg.cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def _parse_script(dot: str):
        try:
            return parse_dot(dot)
        except ScriptError as exc:
            raise HTTPException(status_code=400, detail=f"script does not parse: {exc}")

    @app.post("/repair", response_model=RepairOut)
    def repair(body: RepairIn) -> RepairOut:
        script = _parse_script(body.script_dot)
        name = body.corrector or cfg.default_corrector
        corrector = correctors.get(name)
        if corrector is None:
            raise HTTPException(status_code=400, detail=f"unknown corrector {name!r} (have: {sorted(correctors)})")

        similarity = None
        retrieved_id = None
        if body.feedback is not None and body.feedback.strip():
            request = CorrectionRequest(script, body.feedback, FeedbackSource.USER)
        else:
            hit = memory.lookup(script)
            if hit is not None:
                request = CorrectionRequest(script, hit.record.feedback, FeedbackSource.MEMORY, retrieved=hit)
                similarity = hit.similarity
                retrieved_id = hit.record.id
            else:
                request = CorrectionRequest(script)

        try:
            result = correct(request, corrector)
        except ExternalCorrectorError as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return RepairOut(
            edit=serialize_edit(result.edit),
            repaired_dot=serialize_dot(result.repaired),
            feedback_source=request.feedback_source.value,
            corrector=result.corrector_name,
            similarity=similarity,
            retrieved_id=retrieved_id,
            note=result.note,
        )

    @app.post("/feedback", response_model=FeedbackOut)
    def feedback(body: FeedbackIn) -> FeedbackOut:
        script = _parse_script(body.script_dot)
        gold = None
        if body.edit is not None and body.edit.strip():
            try:
                gold = parse_edit(body.edit)
            except EditParseError as exc:
                raise HTTPException(status_code=400, detail=f"edit does not parse: {exc}")
            try:
                apply_edit(script, gold)
            except EditApplicationError as exc:
                # nothing is written for an edit that cannot apply
                raise HTTPException(status_code=422, detail=f"edit does not apply: {exc}")
        record_id = memory.write(script, body.feedback, gold)
        return FeedbackOut(record_id=record_id)

    @app.get("/memory")
    def memory_index(
        query_dot: str | None = Query(default=None),
        k: int = Query(default=5, ge=1, le=100),
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=50, ge=1, le=500),
    ):
        def brief(rec, similarity=None):
            row = {
                "id": rec.id,
                "goal": rec.source_script.goal,
                "feedback": rec.feedback,
                "edit": serialize_edit(rec.gold_edit) if rec.gold_edit else None,
                "created_at": rec.created_at,
            }
            if similarity is not None:
                row["similarity"] = similarity
            return row

        if query_dot is not None:
            results = memory.lookup_k(_parse_script(query_dot), k)
            return {"total": len(memory), "records": [brief(r.record, r.similarity) for r in results]}
        records = memory.records()[offset : offset + limit]
        return {"total": len(memory), "records": [brief(r) for r in records]}

    @app.get("/memory/{record_id}")
    def memory_detail(record_id: int):
        try:
            rec = memory.get(record_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no record {record_id}")
        return {
            "id": rec.id,
            "goal": rec.source_script.goal,
            "script_dot": serialize_dot(rec.source_script),
            "feedback": rec.feedback,
            "edit": serialize_edit(rec.gold_edit) if rec.gold_edit else None,
            "created_at": rec.created_at,
        }

    @app.get("/healthz")
    def healthz():
        backend = memory.embedder
        reachable = backend.healthy() if hasattr(backend, "healthy") else True
        return {
            "status": "ok" if reachable else "degraded",
            "memory_size": len(memory),
            "embedding_backend": getattr(backend, "name", type(backend).__name__),
            "backend_reachable": reachable,
        }

    return app


def serve(cfg: Config) -> None:
    import uvicorn

    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="warning")
