"""HTTP gateway: a thin /v1 mapping onto engine operations.

No business logic lives here; every endpoint resolves to one engine call,
and every error body carries a stable machine-readable code.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .engine import Engine
from .errors import (
    BackendUnavailable,
    Busy,
    EmptyCorpus,
    EmptyMessage,
    SessionClosed,
    UnknownCitation,
    UnknownCorpus,
    UnknownPersona,
    UnknownSession,
    VocPersonaError,
)
from .reactions import ReactionStimulus

_STATUS_BY_ERROR = {
    UnknownCorpus: 404,
    UnknownPersona: 404,
    UnknownSession: 404,
    Busy: 409,
    EmptyMessage: 400,
    EmptyCorpus: 400,
    SessionClosed: 409,
    UnknownCitation: 400,
    BackendUnavailable: 503,
}


class CorpusBody(BaseModel):
    path: str | None = None
    jsonl: str | None = None
    corpus_id: str | None = None
    collection_methods: list[str] = Field(default_factory=lambda: ["unspecified"])
    platforms: list[str] = Field(default_factory=lambda: ["unspecified"])


class SessionBody(BaseModel):
    persona_id: str
    mode: str = "interview"


class MessageBody(BaseModel):
    text: str


class StimulusBody(BaseModel):
    kind: str
    title: str = ""
    content: str


class ReactionBody(BaseModel):
    stimulus: StimulusBody


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="vocpersona", version="0.1.0")

    @app.exception_handler(VocPersonaError)
    async def on_domain_error(request: Request, exc: VocPersonaError):
        status = 400
        for error_type, mapped in _STATUS_BY_ERROR.items():
            if isinstance(exc, error_type):
                status = mapped
                break
        return JSONResponse(status_code=status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        fields = [
            {"field": ".".join(str(part) for part in err["loc"]),
             "problem": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={
            "code": "bad_request",
            "message": "request body failed validation",
            "fields": fields,
        })

    @app.post("/v1/corpora")
    async def create_corpus(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            body = CorpusBody.model_validate_json(await request.body())
            if body.path:
                with open(body.path, encoding="utf-8") as fh:
                    lines = fh.read().splitlines()
            elif body.jsonl is not None:
                lines = body.jsonl.splitlines()
            else:
                return JSONResponse(status_code=400, content={
                    "code": "bad_request",
                    "message": "provide either path or jsonl",
                })
            corpus, diagnostics = engine.ingest(
                lines, body.corpus_id,
                collection_methods=body.collection_methods,
                platforms=body.platforms,
            )
        else:
            raw = (await request.body()).decode("utf-8")
            corpus, diagnostics = engine.ingest(
                raw.splitlines(),
                request.query_params.get("corpus_id"),
            )
        return {
            "corpus_id": corpus.corpus_id,
            "message_count": corpus.message_count,
            "author_count": corpus.author_count,
            "skipped": [str(d) for d in diagnostics],
        }

    @app.post("/v1/corpora/{corpus_id}/personas:derive")
    async def derive_personas_endpoint(corpus_id: str):
        personas = engine.derive(corpus_id)
        return {"personas": [p.to_record() for p in personas]}

    @app.get("/v1/personas")
    async def list_personas():
        return {"personas": [p.to_record() for p in engine.personas()]}

    @app.get("/v1/personas/{persona_id}")
    async def get_persona(persona_id: str):
        persona, _ = engine.persona(persona_id)
        return persona.to_record()

    @app.get("/v1/personas/{persona_id}/provenance")
    async def get_provenance(persona_id: str,
                             format: str = Query("json", pattern="^(json|markdown)$")):
        rendered = engine.rendered_card(persona_id, format)
        if format == "markdown":
            return PlainTextResponse(rendered, media_type="text/markdown")
        return JSONResponse(content=json.loads(rendered))

    @app.post("/v1/sessions")
    async def create_session(body: SessionBody):
        session = engine.open_session(body.persona_id, body.mode)
        return {"session_id": session.session_id,
                "persona_id": session.persona_id, "mode": session.mode}

    @app.post("/v1/sessions/{session_id}/messages")
    async def post_message(session_id: str, body: MessageBody):
        turn = engine.message(session_id, body.text)
        return turn.to_record()

    @app.post("/v1/sessions/{session_id}/reactions")
    async def post_reaction(session_id: str, body: ReactionBody):
        stimulus = ReactionStimulus(
            kind=body.stimulus.kind,
            title=body.stimulus.title,
            content=body.stimulus.content,
        )
        report = engine.react(session_id, stimulus)
        return report.to_record()

    @app.get("/v1/sessions/{session_id}/summary")
    async def get_summary(session_id: str):
        return engine.summary(session_id).to_record()

    @app.get("/v1/artifacts/{artifact_id}")
    async def get_artifact(artifact_id: str):
        for corpus_id in engine.corpus_ids():
            corpus = engine.corpus(corpus_id)
            try:
                return corpus.artifact_by_id(artifact_id).to_record()
            except KeyError:
                continue
        return JSONResponse(status_code=404, content={
            "code": "unknown_artifact",
            "message": f"no artifact {artifact_id!r}",
        })

    return app


def serve(engine: Engine) -> None:
    """Run the gateway under uvicorn at the configured listen address."""
    import uvicorn

    host, _, port = engine.config.listen.partition(":")
    uvicorn.run(create_app(engine), host=host or "127.0.0.1",
                port=int(port or 8841), log_level="info")
