"""In-memory job store with a worker pool and optional restart journal.

Lifecycle is a strict one-way machine: created -> queued -> running ->
{finished | error}. Transitions are atomic compare-and-set under the
store lock; execution happens on worker threads off the request path.
The append-only journal replays on startup, and jobs that were queued or
running when the process died come back as error("interrupted").
"""

from __future__ import annotations

import json
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable

from ..cube.engine import run_with_provenance
from ..cube.processes import EngineSettings, ProcessRegistry, default_registry
from ..errors import (
    InvalidTransition,
    IoFailure,
    NotFinished,
    NotFound,
    PendingActivity,
    ValidationFailed,
)
from ..graph.model import ProcessGraph
from ..graph.parser import parse_process_graph
from ..graph.validation import validate
from ..prov.jsonio import to_prov_json
from ..prov.model import format_ts, truncate_ms
from .signing import SignedUrl, sign_url
from .stac import make_stac_item


class JobStatus(str, Enum):
    CREATED = "created"
    QUEUED = "queued"
    RUNNING = "running"
    FINISHED = "finished"
    ERROR = "error"


_ALLOWED_TRANSITIONS: dict[JobStatus, set[JobStatus]] = {
    JobStatus.CREATED: {JobStatus.QUEUED},
    JobStatus.QUEUED: {JobStatus.RUNNING, JobStatus.ERROR},
    JobStatus.RUNNING: {JobStatus.FINISHED, JobStatus.ERROR},
    JobStatus.FINISHED: set(),
    JobStatus.ERROR: set(),
}

PROVENANCE_FILENAME = "provenance.json"


@dataclass
class ResultAsset:
    name: str
    path: str  # logical storage path, e.g. "jobs/<id>/out.json"
    media_type: str
    format: str

    def to_json_obj(self) -> dict[str, str]:
        return {
            "name": self.name,
            "path": self.path,
            "media_type": self.media_type,
            "format": self.format,
        }


@dataclass
class Job:
    id: str
    graph: ProcessGraph
    graph_doc: Any
    status: JobStatus = JobStatus.CREATED
    created_at: datetime | None = None
    started_at: datetime | None = None
    finished_at: datetime | None = None
    results: list[ResultAsset] = field(default_factory=list)
    logs: list[dict[str, str]] = field(default_factory=list)
    error: str | None = None
    history: list[JobStatus] = field(default_factory=list)
    spatial_extent: dict | None = None


@dataclass
class ServiceConfig:
    secret: str
    storage_root: Path
    workers: int = 1
    grid_step: float = 0.5
    allow_nonfinite: bool = True
    journal_path: Path | None = None
    url_ttl: int = 3600


class JobService:
    """The simulated remote back-end behind the HTTP surface."""

    def __init__(
        self,
        config: ServiceConfig,
        registry: ProcessRegistry | None = None,
        clock: Callable[[], float] | None = None,
    ):
        self.config = config
        self.registry = registry or default_registry()
        self._clock = clock or time.time
        self._lock = threading.RLock()
        self._jobs: dict[str, Job] = {}
        self._queue: "queue.Queue[str | None]" = queue.Queue()
        self._journal_file = None
        config.storage_root.mkdir(parents=True, exist_ok=True)
        if config.journal_path is not None:
            self._replay_journal(config.journal_path)
            config.journal_path.parent.mkdir(parents=True, exist_ok=True)
            self._journal_file = open(config.journal_path, "a", encoding="utf-8")
        self._workers = [
            threading.Thread(target=self._worker_loop, name=f"job-worker-{i}", daemon=True)
            for i in range(max(1, config.workers))
        ]
        for worker in self._workers:
            worker.start()

    # ------------------------------------------------------------------ #
    # API operations
    # ------------------------------------------------------------------ #

    def create_job(self, graph_bytes: bytes | str) -> str:
        """Parse, validate, and store a new job. Raises GraphParseError or
        ValidationFailed (with the finding list) on bad input."""
        graph = parse_process_graph(graph_bytes)
        report = validate(graph, self.registry.signatures())
        if report.has_errors:
            raise ValidationFailed(report.errors)
        job_id = uuid.uuid4().hex[:12]
        job = Job(
            id=job_id,
            graph=graph,
            graph_doc=graph.to_json_obj(),
            created_at=self._now(),
            spatial_extent=_extract_spatial_extent(graph),
        )
        job.history.append(JobStatus.CREATED)
        with self._lock:
            self._jobs[job_id] = job
            self._journal({"event": "created", "job": job_id,
                           "time": format_ts(job.created_at), "graph": job.graph_doc})
        return job_id

    def start_job(self, job_id: str) -> dict[str, str]:
        job = self._get(job_id)
        self._transition(job, JobStatus.CREATED, JobStatus.QUEUED)
        self._queue.put(job_id)
        return {"id": job_id, "status": job.status.value}

    def get_job(self, job_id: str) -> dict[str, Any]:
        job = self._get(job_id)
        with self._lock:
            snapshot: dict[str, Any] = {
                "id": job.id,
                "status": job.status.value,
                "created_at": _iso_or_none(job.created_at),
                "started_at": _iso_or_none(job.started_at),
                "finished_at": _iso_or_none(job.finished_at),
            }
            if job.error is not None:
                snapshot["error"] = job.error
            if job.status in (JobStatus.FINISHED, JobStatus.ERROR):
                prov = self._job_dir(job.id) / PROVENANCE_FILENAME
                if prov.exists():
                    snapshot["provenance_href"] = str(self._sign(self._logical(job, PROVENANCE_FILENAME)))
        return snapshot

    def list_results(self, job_id: str) -> dict[str, Any]:
        job = self._get(job_id)
        with self._lock:
            if job.status != JobStatus.FINISHED:
                raise NotFinished(job_id, job.status.value)
            results = list(job.results)
            finished_at = job.finished_at
            extent = job.spatial_extent
        now = self._clock()
        provenance_url = self._sign(self._logical(job, PROVENANCE_FILENAME))
        assets = []
        stac_items = []
        for k, asset in enumerate(results):
            url = self._sign(asset.path)
            assets.append(str(url))
            stac_items.append(
                make_stac_item(
                    item_id=f"{job_id}-{k}",
                    asset_name=asset.name,
                    asset_url=url,
                    media_type=asset.media_type,
                    provenance_url=provenance_url,
                    spatial_extent=extent,
                    temporal_instant=format_ts(finished_at),
                    secret=self.config.secret,
                    now=now,
                )
            )
        return {
            "assets": assets,
            "stac_items": stac_items,
            "provenance_href": str(provenance_url),
        }

    def get_logs(self, job_id: str) -> list[dict[str, str]]:
        job = self._get(job_id)
        with self._lock:
            return [dict(line) for line in job.logs]

    def job_history(self, job_id: str) -> list[str]:
        job = self._get(job_id)
        with self._lock:
            return [status.value for status in job.history]

    def resolve_download(self, logical_path: str) -> Path:
        """Map a verified logical path onto the storage root (no escapes)."""
        root = self.config.storage_root.resolve()
        candidate = (root / logical_path).resolve()
        if not candidate.is_relative_to(root):
            raise IoFailure(f"path {logical_path!r} escapes storage root")
        if not candidate.is_file():
            raise IoFailure(f"no such file {logical_path!r}")
        return candidate

    def shutdown(self) -> None:
        """Stop workers and flush/close the journal."""
        for _ in self._workers:
            self._queue.put(None)
        for worker in self._workers:
            worker.join(timeout=10)
        with self._lock:
            if self._journal_file is not None:
                self._journal_file.flush()
                self._journal_file.close()
                self._journal_file = None

    # ------------------------------------------------------------------ #
    # internals
    # ------------------------------------------------------------------ #

    def _worker_loop(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            try:
                self._execute_job(job_id)
            except Exception as exc:  # defensive: a worker must never die
                try:
                    job = self._get(job_id)
                    with self._lock:
                        if job.status in (JobStatus.QUEUED, JobStatus.RUNNING):
                            job.error = f"internal error: {exc}"
                            self._force_status(job, JobStatus.ERROR)
                except Exception:
                    pass

    def _execute_job(self, job_id: str) -> None:
        job = self._get(job_id)
        try:
            self._transition(job, JobStatus.QUEUED, JobStatus.RUNNING)
        except InvalidTransition:
            return  # raced or replayed; nothing to run
        self._log(job, "info", f"job {job_id} started")
        workdir = self._job_dir(job_id)
        workdir.mkdir(parents=True, exist_ok=True)
        settings = EngineSettings(
            grid_step=self.config.grid_step,
            allow_nonfinite=self.config.allow_nonfinite,
            output_root=workdir,
        )
        result = run_with_provenance(
            job.graph,
            self.registry,
            settings=settings,
            listener=lambda event, info: self._on_engine_event(job, event, info),
        )
        try:
            (workdir / PROVENANCE_FILENAME).write_bytes(
                to_prov_json(result.recorder.document)
            )
        except (PendingActivity, OSError) as exc:
            self._log(job, "error", f"could not persist provenance: {exc}")
        if result.ok:
            with self._lock:
                job.results = [
                    ResultAsset(
                        name=Path(asset.path).name,
                        path=self._logical(job, asset.path),
                        media_type=asset.media_type,
                        format=asset.format,
                    )
                    for asset in result.assets
                ]
            self._transition(job, JobStatus.RUNNING, JobStatus.FINISHED)
            self._log(job, "info", f"job {job_id} finished")
        else:
            failing_node = getattr(result.error, "node_id", None)
            with self._lock:
                job.error = str(result.error)
            self._transition(job, JobStatus.RUNNING, JobStatus.ERROR)
            self._log(job, "error", f"job failed at node {failing_node}: {result.error}")

    def _on_engine_event(self, job: Job, event: str, info: dict) -> None:
        if event == "task_started":
            self._log(job, "info", f"node started: {info['node_id']} ({info['process_id']})")
        elif event == "task_ended":
            if info["status"] == "finished":
                self._log(job, "info", f"node finished: {info['node_id']}")
            else:
                self._log(job, "error", f"node failed: {info['node_id']}")

    def _get(self, job_id: str) -> Job:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise NotFound(job_id)
        return job

    def _transition(self, job: Job, expected: JobStatus, new: JobStatus) -> None:
        with self._lock:
            if job.status != expected or new not in _ALLOWED_TRANSITIONS[job.status]:
                raise InvalidTransition(job.id, job.status.value, new.value)
            self._apply_status(job, new)

    def _force_status(self, job: Job, new: JobStatus) -> None:
        with self._lock:
            self._apply_status(job, new)

    def _apply_status(self, job: Job, new: JobStatus) -> None:
        job.status = new
        job.history.append(new)
        now = self._now()
        if new == JobStatus.RUNNING:
            job.started_at = _clamp(now, job.created_at)
        elif new in (JobStatus.FINISHED, JobStatus.ERROR):
            job.finished_at = _clamp(now, job.started_at or job.created_at)
        record: dict[str, Any] = {
            "event": "transition",
            "job": job.id,
            "status": new.value,
            "time": format_ts(now),
        }
        if job.error is not None:
            record["error"] = job.error
        if new == JobStatus.FINISHED:
            record["results"] = [asset.to_json_obj() for asset in job.results]
        self._journal(record)

    def _log(self, job: Job, level: str, message: str) -> None:
        with self._lock:
            job.logs.append(
                {"time": format_ts(self._now()), "level": level, "message": message}
            )

    def _journal(self, record: dict[str, Any]) -> None:
        if self._journal_file is not None:
            self._journal_file.write(json.dumps(record, sort_keys=True) + "\n")
            self._journal_file.flush()

    def _replay_journal(self, path: Path) -> None:
        """Rebuild job state from the journal; unfinished work becomes
        error("interrupted") because execution cannot resume."""
        if not path.exists():
            return
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if record["event"] == "created":
                graph = parse_process_graph(json.dumps(record["graph"]))
                job = Job(
                    id=record["job"],
                    graph=graph,
                    graph_doc=record["graph"],
                    created_at=_parse_iso(record["time"]),
                    spatial_extent=_extract_spatial_extent(graph),
                )
                job.history.append(JobStatus.CREATED)
                self._jobs[job.id] = job
            elif record["event"] == "transition":
                job = self._jobs.get(record["job"])
                if job is None:
                    continue
                status = JobStatus(record["status"])
                job.status = status
                job.history.append(status)
                moment = _parse_iso(record["time"])
                if status == JobStatus.RUNNING:
                    job.started_at = moment
                elif status in (JobStatus.FINISHED, JobStatus.ERROR):
                    job.finished_at = moment
                    job.error = record.get("error")
                if status == JobStatus.FINISHED:
                    job.results = [
                        ResultAsset(**asset) for asset in record.get("results", [])
                    ]
        for job in self._jobs.values():
            if job.status in (JobStatus.QUEUED, JobStatus.RUNNING):
                job.status = JobStatus.ERROR
                job.error = "interrupted"
                job.history.append(JobStatus.ERROR)
                job.finished_at = job.finished_at or job.started_at or job.created_at

    def _job_dir(self, job_id: str) -> Path:
        return self.config.storage_root / "jobs" / job_id

    def _logical(self, job: Job, rel_path: str) -> str:
        return f"jobs/{job.id}/{rel_path}"

    def _sign(self, logical_path: str) -> SignedUrl:
        signed = sign_url(
            f"/download/{logical_path}",
            self.config.url_ttl,
            self.config.secret,
            self._clock(),
        )
        return signed

    def _now(self) -> datetime:
        return truncate_ms(datetime.fromtimestamp(self._clock(), tz=timezone.utc))


def _extract_spatial_extent(graph: ProcessGraph) -> dict | None:
    for node in graph.nodes.values():
        if node.process_id in ("load_collection", "load_stac"):
            extent = node.arguments.get("spatial_extent")
            if isinstance(extent, dict):
                return extent
    return None


def _iso_or_none(moment: datetime | None) -> str | None:
    return None if moment is None else format_ts(moment)


def _parse_iso(text: str) -> datetime:
    from ..prov.model import parse_ts

    return parse_ts(text)


def _clamp(moment: datetime, floor: datetime | None) -> datetime:
    if floor is not None and moment < floor:
        return floor
    return moment
