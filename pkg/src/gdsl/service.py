"""HTTP API over the engine: sessions, compilation, editing, generation.

All request/response bodies are JSON; errors carry a machine-readable
code plus a human message. The SVG endpoint serves image/svg+xml.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .agents import DesignInput, MockAgent, RemoteAgent, keyword_mock_table, \
    run_generation_session
from .body import BodyMeasurements
from .edits import apply_edit, apply_pressure_feedback, format_edit_command, \
    parse_edit_instruction
from .errors import AgentError, EditError, GdslError, InvalidArgument, ParseError
from .pattern import pattern_stats, validate_pattern
from .schema import (
    DesignConfiguration,
    DesignSchema,
    default_config,
    schema_to_doc,
    validate_config,
)
from .sessions import Session, SessionStore
from .svg import export_svg


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    body = {"error": {"code": code, "message": message}}
    if details is not None:
        body["error"]["details"] = details
    return JSONResponse(status_code=status, content=body)


def _violations_payload(violations) -> list[dict]:
    return [{"path": v.path, "reason": v.reason, "message": v.message}
            for v in violations]


def session_view(session: Session) -> dict:
    stats = pattern_stats(session.pattern)
    report = validate_pattern(session.pattern)
    return {
        "id": session.id,
        "config": {"assignments": session.config.assignments},
        "stats": {
            "num_panels": stats.num_panels,
            "mean_edges_per_panel": stats.mean_edges_per_panel,
            "num_stitches": stats.num_stitches,
        },
        "validity": {
            "passed": report.passed,
            "violations": [{"code": v.code, "subject": v.subject,
                            "message": v.message} for v in report.violations],
        },
        "history": session.history,
        "created": session.created,
        "updated": session.updated,
    }


def default_agent_factory(name: str, design: DesignInput, schema: DesignSchema):
    if name == "mock":
        return MockAgent(keyword_mock_table(design, schema))
    if name == "remote":
        return RemoteAgent()
    raise InvalidArgument(f"unknown agent {name!r} (use 'mock' or 'remote')")


def create_app(store: SessionStore, agent_factory=default_agent_factory,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="gdsl", docs_url=None, redoc_url=None)
    schema = store.schema

    @app.exception_handler(GdslError)
    async def _gdsl_error(request: Request, exc: GdslError):
        if isinstance(exc, AgentError):
            return _error(502, "AGENT_ERROR", str(exc))
        return _error(422, type(exc).__name__, str(exc))

    def _get_session(session_id: str) -> Session | None:
        return store.get(session_id)

    @app.get("/schema")
    def get_schema():
        return schema_to_doc(schema)

    @app.post("/sessions", status_code=201)
    def create_session(body: dict | None = None):
        assignments = dict(default_config(schema).assignments)
        given = (body or {}).get("config", {}).get("assignments", {})
        assignments.update(given)
        config = DesignConfiguration(assignments)
        violations = validate_config(config, schema)
        if violations:
            return _error(422, "INVALID_CONFIG", "configuration rejected",
                          _violations_payload(violations))
        session = store.create(config, {"kind": "created",
                                        "given_paths": sorted(given)})
        return session_view(session)

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.ids()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        return session_view(session)

    @app.get("/sessions/{session_id}/pattern.svg")
    def get_pattern_svg(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        return Response(content=export_svg(session.pattern),
                        media_type="image/svg+xml")

    @app.get("/sessions/{session_id}/pattern.json")
    def get_pattern_doc(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        from .pattern import serialize_pattern
        return Response(content=serialize_pattern(session.pattern),
                        media_type="application/json")

    @app.patch("/sessions/{session_id}/config")
    def patch_config(session_id: str, updates: dict):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        with store.lock(session_id):
            merged = session.config.replace(updates)
            violations = validate_config(merged, schema)
            if violations:
                return _error(422, "INVALID_CONFIG", "patch rejected",
                              _violations_payload(violations))
            store.update(session, merged,
                         {"kind": "patch", "paths": sorted(updates)})
        return session_view(session)

    @app.post("/sessions/{session_id}/edit")
    def post_edit(session_id: str, body: dict):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        instruction = body.get("instruction", "")
        try:
            command = parse_edit_instruction(instruction)
        except ParseError as exc:
            return _error(422, "PARSE_ERROR", str(exc),
                          {"instruction": instruction})
        with store.lock(session_id):
            try:
                result = apply_edit(session.config, command, schema)
            except EditError as exc:
                return _error(422, "EDIT_ERROR", str(exc))
            if result.changed_paths:
                store.update(session, result.config, {
                    "kind": "edit",
                    "instruction": instruction,
                    "applied": format_edit_command(command),
                    "changed_paths": result.changed_paths,
                })
        return {"applied": format_edit_command(command),
                "changed_paths": result.changed_paths,
                "notices": result.notices,
                "session": session_view(session)}

    @app.post("/sessions/{session_id}/pressure")
    def post_pressure(session_id: str, body: dict):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "SESSION_NOT_FOUND", f"no session {session_id!r}")
        report = body.get("report", [])
        with store.lock(session_id):
            try:
                result = apply_pressure_feedback(session.config, report, schema)
            except EditError as exc:
                return _error(422, "EDIT_ERROR", str(exc))
            if result.changed_paths:
                store.update(session, result.config, {
                    "kind": "pressure",
                    "report": report,
                    "changed_paths": result.changed_paths,
                })
        return {"changed_paths": result.changed_paths,
                "notices": result.notices,
                "session": session_view(session)}

    @app.post("/generate", status_code=201)
    def post_generate(body: dict):
        input_doc = body.get("input", {})
        try:
            design = DesignInput(kind=input_doc.get("kind", "text"),
                                 payload=input_doc.get("payload", ""))
        except InvalidArgument as exc:
            return _error(422, "INVALID_INPUT", str(exc))
        agent_name = body.get("agent", "mock")
        try:
            agent = agent_factory(agent_name, design, schema)
        except InvalidArgument as exc:
            return _error(422, "INVALID_AGENT", str(exc))
        result = run_generation_session(design, agent, schema, store.body)
        session = store.create(result.config, {
            "kind": "generation",
            "agent": agent_name,
            "input": {"kind": design.kind, "payload": design.payload[:500]},
            "defaulted": result.transcript.defaulted,
            "rounds": len(result.transcript.rounds),
        })
        view = session_view(session)
        view["transcript"] = {
            "rounds": len(result.transcript.rounds),
            "defaulted": result.transcript.defaulted,
            "notes": result.transcript.notes,
        }
        return view

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
