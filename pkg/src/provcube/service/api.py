"""HTTP+JSON surface over the job service (openEO-shaped paths).

POST /jobs                submit a process graph
POST /jobs/{id}/results   start processing
GET  /jobs/{id}           status snapshot
GET  /jobs/{id}/results   signed URLs + STAC items + provenance href
GET  /jobs/{id}/logs      processing logs
GET  /download/{path}     signed-URL download of any result file
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse

from ..errors import (
    GraphParseError,
    InvalidTransition,
    IoFailure,
    NotFinished,
    NotFound,
    ValidationFailed,
)
from .jobs import JobService
from .signing import verify_signed_url

_MEDIA_BY_SUFFIX = {".json": "application/json", ".csv": "text/csv"}


def create_app(service: JobService) -> FastAPI:
    app = FastAPI(title="provcube back-end", version="0.1.0")
    app.state.service = service
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(NotFound)
    async def _not_found(_req, exc: NotFound):
        return JSONResponse(status_code=404, content={"error": "not_found", "message": str(exc)})

    @app.exception_handler(InvalidTransition)
    async def _invalid_transition(_req, exc: InvalidTransition):
        return JSONResponse(
            status_code=409, content={"error": "invalid_transition", "message": str(exc)}
        )

    @app.exception_handler(NotFinished)
    async def _not_finished(_req, exc: NotFinished):
        return JSONResponse(
            status_code=409, content={"error": "not_finished", "message": str(exc)}
        )

    @app.post("/jobs", status_code=201)
    async def create_job(request: Request):
        body = await request.body()
        try:
            job_id = service.create_job(body)
        except GraphParseError as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "parse", "message": str(exc)},
            )
        except ValidationFailed as exc:
            findings = [
                {"kind": f.kind, "node": f.node_path, "message": f.message}
                for f in exc.findings
            ]
            return JSONResponse(
                status_code=400,
                content={"error": "validation", "findings": findings},
            )
        return {"id": job_id, "status": service.get_job(job_id)["status"]}

    @app.post("/jobs/{job_id}/results", status_code=202)
    async def start_job(job_id: str):
        return service.start_job(job_id)

    @app.get("/jobs/{job_id}")
    async def get_job(job_id: str):
        return service.get_job(job_id)

    @app.get("/jobs/{job_id}/results")
    async def list_results(job_id: str):
        return service.list_results(job_id)

    @app.get("/jobs/{job_id}/logs")
    async def get_logs(job_id: str):
        return {"logs": service.get_logs(job_id)}

    @app.get("/download/{logical_path:path}")
    async def download(logical_path: str, request: Request):
        query = request.url.query
        url = f"/download/{logical_path}" + (f"?{query}" if query else "")
        if not verify_signed_url(url, service.config.secret, time.time()):
            return JSONResponse(
                status_code=403,
                content={"error": "forbidden", "message": "invalid or expired signature"},
            )
        try:
            target = service.resolve_download(logical_path)
        except IoFailure as exc:
            return JSONResponse(status_code=404, content={"error": "not_found", "message": str(exc)})
        media = _MEDIA_BY_SUFFIX.get(target.suffix, "application/octet-stream")
        return FileResponse(target, media_type=media)

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    return app
