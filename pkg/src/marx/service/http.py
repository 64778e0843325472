"""HTTP API over a loaded workspace.

Endpoints (all JSON):
  GET  /api/env           agents and tasks, for query builders
  GET  /api/plan          summarized plan of the abstraction
  GET  /api/mmdp/summary  abstraction statistics
  POST /api/query         {"query": "...", "seed": optional} -> verdict

Parse and validation failures return 400 {error, detail}; a query arriving
while another one holds the write turn returns 409 unless the config asks
for queueing.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import MarxError, NoCompletePath
from ..abstraction import summarize_plan
from ..querylang import parse_query, render_query, validate
from .core import Workspace


class QueryRequest(BaseModel):
    query: str
    seed: int | None = None


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": error, "detail": detail})


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="marx", version="0.1.0")
    naming = workspace.mmdp.naming

    @app.get("/api/env")
    def get_env():
        cfg = workspace.env_config
        return {
            "numAgents": cfg.num_agents,
            "agents": [
                {"id": i, "shortName": f"r{i}", "atom": naming.atom(i),
                 "display": naming.display(i)}
                for i in range(1, cfg.num_agents + 1)
            ],
            "tasks": [
                {"name": t.name, "cell": list(t.cell),
                 "coalitionSize": t.coalition_size}
                for t in cfg.tasks
            ],
            "grid": {"w": cfg.grid_width, "h": cfg.grid_height},
        }

    @app.get("/api/plan")
    def get_plan():
        with workspace.lock:
            try:
                plan = summarize_plan(workspace.mmdp)
            except NoCompletePath as exc:
                return _error(400, "NoCompletePath", str(exc))
        return {"agents": list(range(1, workspace.mmdp.num_agents + 1)),
                **plan.to_dict()}

    @app.get("/api/mmdp/summary")
    def get_summary():
        with workspace.lock:
            mmdp = workspace.mmdp
            return {
                "numStates": len(mmdp.states),
                "numTransitions": mmdp.num_transitions(),
                "numAgents": mmdp.num_agents,
                "tasks": list(mmdp.tasks),
                "initial": mmdp.initial,
                "totalVisits": sum(mmdp.visit_counts.values()),
            }

    @app.post("/api/query")
    def post_query(request: QueryRequest):
        try:
            query = parse_query(request.query, workspace.mmdp)
        except MarxError as exc:
            return _error(400, type(exc).__name__, str(exc))
        violations = validate(query, workspace.mmdp)
        if violations:
            return _error(400, "ValidationError",
                          "; ".join(v.message for v in violations))
        if not workspace.lock.acquire(blocking=workspace.config.queue_writes):
            return _error(409, "Busy",
                          "another query holds the write turn; retry")
        try:
            answer = workspace.answer(query, seed=request.seed)
        finally:
            workspace.lock.release()
        body = answer.to_dict()
        body["query"] = render_query(query)
        return body

    ui_dir = workspace.config.ui_dir
    if ui_dir and ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
