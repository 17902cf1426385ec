"""HTTP+JSON API over the nanopublication store.

Endpoints mirror the store operations one-to-one; nanopublications travel as
TriG, everything else as JSON. Statement and nanopub URIs arrive
percent-encoded in the path.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .nanopub import StructureError, parse_trig
from .store import (
    Agent,
    AgentKind,
    ConflictingContentForUri,
    MalformedUri,
    NanopubStore,
    OpinionKind,
    SelfLink,
    UnknownAgent,
)
from .trig import TrigSyntaxError
from .validation import default_ruleset, validate

TRIG_MEDIA_TYPE = "application/trig"


class OpinionRequest(BaseModel):
    agent: str
    statement: str
    kind: str


class LinkRequest(BaseModel):
    agent: str
    a: str
    b: str
    relation: str


class AgentRequest(BaseModel):
    iri: str
    display_name: str
    kind: str = "Person"


class ValidateRequest(BaseModel):
    text: str


def create_app(store: NanopubStore | None = None) -> FastAPI:
    store = store if store is not None else NanopubStore()
    app = FastAPI(title="aidapub portal", version="0.1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def bad_request(exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(MalformedUri)
    @app.exception_handler(SelfLink)
    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: Exception):
        return bad_request(exc)

    @app.exception_handler(UnknownAgent)
    async def _unknown_agent(request: Request, exc: Exception):
        return bad_request(exc)

    @app.exception_handler(ConflictingContentForUri)
    async def _conflict(request: Request, exc: Exception):
        return JSONResponse(status_code=409, content={"error": "ConflictingContentForUri", "detail": str(exc)})

    @app.post("/nanopubs", status_code=201)
    async def post_nanopubs(request: Request):
        content_type = request.headers.get("content-type", "").split(";")[0].strip()
        if content_type not in ("", TRIG_MEDIA_TYPE, "text/plain", "text/turtle", "application/x-trig"):
            return JSONResponse(status_code=415, content={"error": "UnsupportedMediaType", "detail": content_type})
        body = await request.body()
        try:
            nanopubs = parse_trig(body)
        except (TrigSyntaxError, StructureError) as exc:
            return bad_request(exc)
        receipts = [store.publish(np).to_dict() for np in nanopubs]
        return {"receipts": receipts}

    @app.get("/statements/{uri:path}")
    async def get_statement(uri: str):
        return store.get_statement(uri).to_dict()

    @app.post("/opinions", status_code=201)
    async def post_opinion(body: OpinionRequest):
        kind = OpinionKind(body.kind)
        return store.post_opinion(body.agent, body.statement, kind).to_dict()

    @app.post("/links", status_code=201)
    async def post_link(body: LinkRequest):
        receipt = store.link_statements(body.agent, body.a, body.b, body.relation)
        return receipt.to_dict()

    @app.get("/search")
    async def search(q: str = "", limit: int = 10):
        results = store.search(q, limit=limit)
        return {"results": [{"uri": uri, "score": score} for uri, score in results]}

    @app.get("/nanopubs/{uri:path}")
    async def get_nanopub(uri: str):
        np = store.get_nanopub(uri)
        if np is None:
            return JSONResponse(status_code=404, content={"error": "NotFound", "detail": uri})
        from .nanopub import serialize_trig

        return Response(content=serialize_trig(np), media_type=TRIG_MEDIA_TYPE)

    @app.post("/agents", status_code=201)
    async def post_agent(body: AgentRequest):
        agent = Agent(body.iri, body.display_name, AgentKind(body.kind))
        return store.register_agent(agent).to_dict()

    @app.get("/agents")
    async def list_agents():
        return {"agents": [a.to_dict() for a in store.list_agents()]}

    @app.post("/validate")
    async def validate_text(body: ValidateRequest):
        return validate(body.text, default_ruleset()).to_dict()

    return app
