"""FastAPI service exposing guideline walkthrough sessions.

Endpoints:
    GET  /guidelines              tree names and subclasses
    POST /sessions                start a session on a named tree
    GET  /sessions/{id}           current state
    POST /sessions/{id}/answer    choose an answer label
    POST /sessions/{id}/undo      step back one answer
    GET  /sessions/{id}/report    single-session verdict report
    POST /reports                 aggregated report over several sessions

Unknown sessions and trees give 404, invalid labels 422 (listing the valid
labels), malformed bodies 400. All payloads carry a top-level "version".
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..errors import ValidationError
from ..guideline import (
    GuidelineTree,
    InvalidAnswer,
    Leaf,
    Question,
    Session,
    Xor,
    answer,
    load_guideline_file,
    report,
    start_session,
    undo,
    validate,
)
from .schemas import (
    API_VERSION,
    AnswerRequest,
    CreateSessionRequest,
    GuidelineInfo,
    GuidelineList,
    NodeView,
    OutcomeView,
    PathStep,
    ReportRequest,
    ReportView,
    SessionState,
    VerdictView,
)
from .store import DEFAULT_TTL_SECONDS, SessionStore, UnknownSession


def _session_state(session_id: str, session: Session) -> SessionState:
    node = None
    verdict = None
    if isinstance(session.current, Leaf):
        verdict = VerdictView(**session.current.verdict.to_dict())
    else:
        assert isinstance(session.current, Question)
        node = NodeView(
            kind="xor" if isinstance(session.current, Xor) else "question",
            prompt=session.current.prompt,
            labels=list(session.current.labels),
        )
    return SessionState(
        id=session_id,
        tree=session.tree_name,
        path=[PathStep(prompt=p, answer=a) for p, a in session.path],
        provisional=session.provisional,
        node=node,
        verdict=verdict,
    )


def _report_view(sessions: list[Session]) -> ReportView:
    try:
        result = report(sessions)
    except ValidationError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return ReportView(
        outcomes=[
            OutcomeView(
                tree=o.tree_name,
                verdict=VerdictView(**o.verdict.to_dict()),
                provisional=o.provisional,
                transcript=[PathStep(prompt=p, answer=a) for p, a in o.transcript],
                obligations=list(o.obligations),
            )
            for o in result.outcomes
        ],
        overall=result.overall.value,
        obligations=list(result.obligations),
    )


def create_app(
    trees: list[GuidelineTree] | None = None,
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
) -> FastAPI:
    if trees is None:
        trees = load_guideline_file()
    errors = [f for f in validate(trees) if f.severity == "error"]
    if errors:
        raise ValidationError(
            "guideline file has lint errors: "
            + "; ".join(f"{f.location}: {f.message}" for f in errors)
        )
    tree_index: dict[str, GuidelineTree] = {}
    for tree in trees:
        if tree.name in tree_index:
            raise ValidationError(f"duplicate guideline name {tree.name!r}")
        tree_index[tree.name] = tree

    app = FastAPI(title="ethics-triage guideline service", version=API_VERSION)
    # the browser UI is served from a different origin than the API
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(ttl_seconds=ttl_seconds)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"version": API_VERSION, "detail": exc.errors()}
        )

    @app.exception_handler(HTTPException)
    async def versioned_http_error(request: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code, content={"version": API_VERSION, "detail": exc.detail}
        )

    def _get_session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    @app.get("/guidelines", response_model=GuidelineList)
    def list_guidelines():
        return GuidelineList(
            guidelines=[
                GuidelineInfo(name=tree.name, subclasses=list(tree.subclasses))
                for tree in trees
            ]
        )

    @app.post("/sessions", response_model=SessionState, response_model_exclude_none=True)
    def create_session(body: CreateSessionRequest):
        tree = tree_index.get(body.tree)
        if tree is None:
            raise HTTPException(
                status_code=404,
                detail={"message": f"unknown guideline {body.tree!r}", "known": sorted(tree_index)},
            )
        session = start_session(tree)
        session_id = store.create(session)
        return _session_state(session_id, session)

    @app.get("/sessions/{session_id}", response_model=SessionState, response_model_exclude_none=True)
    def get_session(session_id: str):
        return _session_state(session_id, _get_session(session_id))

    @app.post(
        "/sessions/{session_id}/answer",
        response_model=SessionState,
        response_model_exclude_none=True,
    )
    def answer_session(session_id: str, body: AnswerRequest):
        _get_session(session_id)
        try:
            session = store.update(session_id, lambda s: answer(s, body.label))
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        except InvalidAnswer as exc:
            raise HTTPException(
                status_code=422,
                detail={"message": str(exc), "valid_labels": list(exc.valid_labels)},
            )
        except ValidationError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return _session_state(session_id, session)

    @app.post(
        "/sessions/{session_id}/undo",
        response_model=SessionState,
        response_model_exclude_none=True,
    )
    def undo_session(session_id: str):
        _get_session(session_id)
        try:
            session = store.update(session_id, undo)
        except UnknownSession:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        except ValidationError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return _session_state(session_id, session)

    @app.get("/sessions/{session_id}/report", response_model=ReportView)
    def session_report(session_id: str):
        return _report_view([_get_session(session_id)])

    @app.post("/reports", response_model=ReportView)
    def aggregated_report(body: ReportRequest):
        return _report_view([_get_session(session_id) for session_id in body.ids])

    return app
