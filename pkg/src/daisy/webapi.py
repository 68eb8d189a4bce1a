"""HTTP API over the curation service.

JSON endpoints for submitting requests, polling status, downloading artifacts,
running proteomes, and reading the taxonomy. Errors use a structured
{code, message} body with 400/404/503 semantics.
"""

from __future__ import annotations

from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .service import (
    Engine,
    InvalidAccession,
    InvalidRequest,
    InvalidSubclass,
    JobService,
    RequestMode,
    RequestStatus,
    ServiceError,
    ServiceUnavailable,
    UnknownRun,
    UnknownToken,
    list_proteome_results,
)
from .structmodel import Source


class SubmitBody(BaseModel):
    accession: str
    email: str
    mode: str = "BASIC"
    subclasses: list[str] | None = None


class ProteomeBody(BaseModel):
    proteome_id: str
    email: str = "batch@local"
    parallelism: int | None = None


_ERROR_STATUS = {
    InvalidAccession: 400,
    InvalidSubclass: 400,
    InvalidRequest: 400,
    UnknownToken: 404,
    UnknownRun: 404,
    ServiceUnavailable: 503,
}


def _error_response(exc: ServiceError) -> JSONResponse:
    status = _ERROR_STATUS.get(type(exc), 400)
    return JSONResponse(status_code=status,
                        content={"code": type(exc).__name__, "message": str(exc)})


def create_app(engine: Engine, jobs: JobService | None = None,
               static_dir: Path | None = None) -> FastAPI:
    """Application factory; `jobs` defaults to a worker pool owned by the app
    lifecycle (started on startup, drained on shutdown)."""
    owns_jobs = jobs is None
    jobs = jobs or JobService(engine)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if owns_jobs:
            jobs.start()
        yield
        if owns_jobs:
            jobs.shutdown()

    app = FastAPI(title="daisy", version="0.1.0", lifespan=lifespan)

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return _error_response(exc)

    @app.post("/api/requests")
    def submit_request(body: SubmitBody):
        try:
            mode = RequestMode(body.mode.upper())
        except ValueError:
            raise InvalidRequest(f"unknown mode {body.mode!r}")
        request = engine.submit_request(body.accession, body.email, mode, body.subclasses)
        jobs.submit(request.id)
        return {"id": request.id}

    @app.get("/api/requests/{token}")
    def get_request(token: str):
        request, bundle = engine.get_request(token)
        payload = {
            "id": request.id,
            "status": request.status.value,
            "accession": request.accession.value,
            "accession_kind": request.accession.kind.value,
            "mode": request.mode.value,
            "selected_subclasses": list(request.selected_subclasses),
            "submitted_at": request.submitted_at,
            "finished_at": request.finished_at,
            "error": request.error,
        }
        if bundle is not None:
            payload["result"] = bundle.to_dict()
        if request.mode is RequestMode.PROTEOME and request.status is RequestStatus.DONE:
            payload["run_id"] = request.id
        return payload

    @app.get("/api/requests/{token}/outputs/{path:path}")
    def get_output(token: str, path: str):
        engine.store.load_request(token)  # 404 on unknown token
        root = engine.store.artifact_dir(token).resolve()
        target = (root / path).resolve()
        if not str(target).startswith(str(root) + "/") and target != root:
            raise UnknownToken(f"no artifact {path!r}")
        if not target.is_file():
            raise UnknownToken(f"no artifact {path!r}")
        return FileResponse(target)

    @app.post("/api/proteomes")
    def submit_proteome(body: ProteomeBody):
        request = engine.submit_request(body.proteome_id, body.email, RequestMode.PROTEOME)
        jobs.submit(request.id)
        return {"run_id": request.id}

    def _load_finished_run(run_id: str):
        try:
            return engine.store.load_run(run_id)
        except UnknownRun:
            # surface queued/running proteome requests as not-ready
            try:
                request = engine.store.load_request(run_id)
            except UnknownToken:
                raise UnknownRun(run_id)
            if request.mode is RequestMode.PROTEOME and request.status in (
                    RequestStatus.QUEUED, RequestStatus.RUNNING):
                raise ServiceUnavailable(f"run {run_id} is not finished")
            raise UnknownRun(run_id)

    @app.get("/api/proteomes/{run_id}/results")
    def proteome_results(run_id: str, db: str | None = None,
                         has_trr: bool | None = None,
                         component: str | None = None,
                         order_by: str | None = None,
                         dir: str = "asc"):
        run = _load_finished_run(run_id)
        source = None
        if db is not None:
            try:
                source = Source(db.upper())
            except ValueError:
                raise InvalidRequest(f"unknown db {db!r}")
        if order_by is not None and order_by not in ("exec_seconds", "component", "db"):
            raise InvalidRequest(f"unknown order_by {order_by!r}")
        if dir not in ("asc", "desc"):
            raise InvalidRequest(f"unknown dir {dir!r}")
        entries = list_proteome_results(run, db=source, has_trr=has_trr,
                                        component=component, order_by=order_by,
                                        direction=dir)
        return {"run_id": run.run_id, "proteome_id": run.proteome_id,
                "entries": [e.to_dict() for e in entries]}

    @app.get("/api/proteomes/{run_id}/stats")
    def proteome_stats(run_id: str):
        run = _load_finished_run(run_id)
        return {"run_id": run.run_id, "proteome_id": run.proteome_id,
                "stats": run.stats.to_dict() if run.stats else None,
                "skipped_components": [list(s) for s in run.skipped_components]}

    @app.get("/api/taxonomy")
    def taxonomy():
        by_class = engine.taxonomy.by_class()
        class_names = {"3": "Class III (elongated)", "4": "Class IV (closed)",
                       "5": "Class V (beads on a string)"}
        return {
            "classes": [
                {
                    "id": cls,
                    "name": class_names.get(cls, f"Class {cls}"),
                    "subclasses": [{"id": sid, "name": name} for sid, name in subs],
                }
                for cls, subs in sorted(by_class.items())
            ]
        }

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
