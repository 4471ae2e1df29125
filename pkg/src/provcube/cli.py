"""Command-line entry point: local runs, validation, the back-end service,
and provenance-file utilities.

Exit codes are stable: 0 success, 2 parse errors, 3 validation errors,
4 execution failures, 5 I/O and bind failures.
"""

from __future__ import annotations

import json
import os
import socket
import sys
import uuid
from pathlib import Path

import click

from ._version import __version__
from .cube.engine import run_with_provenance
from .cube.io import cube_to_csv_bytes, cube_to_json_bytes
from .cube.model import DataCube
from .cube.processes import EngineSettings, SavedResult, default_registry
from .errors import GraphParseError, IoFailure, ProvCubeError
from .graph.parser import parse_process_graph
from .graph.validation import validate as validate_graph
from .prov.dot import to_dot
from .prov.jsonio import read_prov_json, to_prov_json
from .prov.stats import stats as prov_stats

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATE = 3
EXIT_EXECUTE = 4
EXIT_IO = 5


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Provenance-aware workflow engine for openEO-style process graphs."""


def _read_graph(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _parse(raw: bytes):
    try:
        return parse_process_graph(raw)
    except GraphParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Result file; .csv extension selects csv, anything else cube-json.")
@click.option("--prov-out", type=click.Path(path_type=Path), default=None)
@click.option("--dot-out", type=click.Path(path_type=Path), default=None)
@click.option("--grid-step", type=float, default=0.5, show_default=True)
@click.option("--allow-nonfinite/--no-allow-nonfinite", default=True, show_default=True)
@click.option("--workflow-name", default=None, help="Override the content-derived run name.")
@click.option("-v", "--verbose", is_flag=True)
def run(graph_path: Path, out_path: Path | None, prov_out: Path | None,
        dot_out: Path | None, grid_step: float, allow_nonfinite: bool,
        workflow_name: str | None, verbose: bool) -> None:
    """Parse, validate, and execute a process graph locally."""
    raw = _read_graph(graph_path)
    graph = _parse(raw)

    report = validate_graph(graph, default_registry().signatures())
    for finding in report.findings:
        click.echo(f"{finding.severity}: {finding.node_path}: {finding.message}", err=True)
    if report.has_errors:
        sys.exit(EXIT_VALIDATE)

    out_path = out_path or _derived(graph_path, ".result.json")
    prov_out = prov_out or _derived(graph_path, ".prov.json")

    listener = None
    if verbose:
        def listener(event: str, info: dict) -> None:
            click.echo(f"[{event}] {info.get('node_id') or info.get('name', '')}", err=True)

    settings = EngineSettings(
        grid_step=grid_step,
        allow_nonfinite=allow_nonfinite,
        output_root=out_path.parent,
    )
    result = run_with_provenance(
        graph, default_registry(), settings=settings,
        workflow_name=workflow_name, listener=listener,
    )

    try:
        prov_out.parent.mkdir(parents=True, exist_ok=True)
        prov_out.write_bytes(to_prov_json(result.recorder.document))
        if dot_out is not None:
            dot_out.write_text(to_dot(result.recorder.document), encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write provenance: {exc}", err=True)
        sys.exit(EXIT_IO)

    if not result.ok:
        click.echo(f"execution failed: {result.error}", err=True)
        sys.exit(EXIT_EXECUTE)

    try:
        _write_result(result.value, out_path)
    except (IoFailure, OSError) as exc:
        click.echo(f"error: cannot write result: {exc}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"result: {out_path}")
    click.echo(f"provenance: {prov_out}")


def _derived(graph_path: Path, suffix: str) -> Path:
    return graph_path.parent / (graph_path.stem + suffix)


def _write_result(value, out_path: Path) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(value, DataCube):
        if out_path.suffix == ".csv":
            out_path.write_bytes(cube_to_csv_bytes(value))
        else:
            out_path.write_bytes(cube_to_json_bytes(value))
    elif isinstance(value, SavedResult):
        out_path.write_text(
            json.dumps({"type": "file", "path": value.path, "format": value.format},
                       indent=2),
            encoding="utf-8",
        )
    else:
        out_path.write_text(json.dumps({"value": value}, indent=2), encoding="utf-8")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(path_type=Path))
def validate(graph_path: Path) -> None:
    """Validate a process graph without executing it."""
    raw = _read_graph(graph_path)
    graph = _parse(raw)
    report = validate_graph(graph, default_registry().signatures())
    for finding in report.findings:
        click.echo(f"{finding.severity}: {finding.node_path}: {finding.message}")
    if report.has_errors:
        sys.exit(EXIT_VALIDATE)
    click.echo("valid" + (" (with warnings)" if report.warnings else ""))


@main.command()
@click.option("--port", type=int, default=lambda: int(os.environ.get("PROVCUBE_PORT", "8080")))
@click.option("--workers", type=int, default=lambda: int(os.environ.get("PROVCUBE_WORKERS", "1")))
@click.option("--grid-step", type=float,
              default=lambda: float(os.environ.get("PROVCUBE_GRID_STEP", "0.5")))
@click.option("--secret-env", default="PROVCUBE_SECRET", show_default=True,
              help="Name of the environment variable holding the signing secret.")
@click.option("--storage", type=click.Path(path_type=Path),
              default=lambda: Path(os.environ.get("PROVCUBE_STORAGE", "provcube-data")))
@click.option("--journal", type=click.Path(path_type=Path), default=None,
              help="Append-only journal for restart recovery.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: int, workers: int, grid_step: float, secret_env: str,
          storage: Path, journal: Path | None, host: str) -> None:
    """Run the simulated remote back-end service."""
    import uvicorn

    from .service.api import create_app
    from .service.jobs import JobService, ServiceConfig

    secret = os.environ.get(secret_env)
    if not secret:
        secret = uuid.uuid4().hex
        click.echo(
            f"warning: {secret_env} not set; using a random secret (URLs will not "
            "survive a restart)", err=True,
        )
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(EXIT_IO)

    config = ServiceConfig(
        secret=secret,
        storage_root=storage,
        workers=workers,
        grid_step=grid_step,
        journal_path=journal,
    )
    service = JobService(config)
    app = create_app(service)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    finally:
        service.shutdown()


@main.group()
def prov() -> None:
    """Inspect PROV-JSON documents."""


@prov.command("stats")
@click.argument("prov_file", type=click.Path(path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")
def prov_stats_cmd(prov_file: Path, as_json: bool) -> None:
    """Print summary statistics for a provenance document."""
    document = _read_prov(prov_file)
    values = prov_stats(document)
    if as_json:
        click.echo(json.dumps(values, indent=2, sort_keys=True))
        return
    click.echo(f"activities:     {values['activity_count']}")
    click.echo(f"entities:       {values['entity_count']}")
    click.echo(f"agents:         {values['agent_count']}")
    for kind, count in sorted(values["relation_count_by_kind"].items()):
        click.echo(f"  {kind}: {count}")
    click.echo(f"total duration: {values['total_duration_s']:.3f}s")
    click.echo(f"critical path:  {values['critical_path_len']}")


@prov.command("export-dot")
@click.argument("prov_file", type=click.Path(path_type=Path))
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
def prov_export_dot(prov_file: Path, out_path: Path | None) -> None:
    """Render a provenance document to Graphviz DOT."""
    document = _read_prov(prov_file)
    out_path = out_path or prov_file.with_suffix(".dot")
    try:
        out_path.write_text(to_dot(document), encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write {out_path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    click.echo(str(out_path))


def _read_prov(path: Path):
    try:
        raw = path.read_bytes()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    try:
        return read_prov_json(raw)
    except ProvCubeError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE)


if __name__ == "__main__":
    main()
