from __future__ import annotations

import json
import time

import pytest
from fastapi.testclient import TestClient
from helpers import constant_graph, three_step_doc

from provcube.service.api import create_app
from provcube.service.jobs import JobService, ServiceConfig

SECRET = "api-test-secret"


@pytest.fixture
def client(tmp_path):
    service = JobService(ServiceConfig(secret=SECRET, storage_root=tmp_path / "store"))
    with TestClient(create_app(service)) as test_client:
        yield test_client
    service.shutdown()


def poll_terminal(client: TestClient, job_id: str, timeout: float = 10.0) -> str:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        status = client.get(f"/jobs/{job_id}").json()["status"]
        if status in ("finished", "error"):
            return status
        time.sleep(0.005)
    raise TimeoutError(job_id)


def test_submit_start_poll_download_cycle(client):
    # end-to-end: POST graph, start, poll, results, download asset + provenance
    response = client.post("/jobs", content=json.dumps(three_step_doc("out.json")))
    assert response.status_code == 201
    job_id = response.json()["id"]
    assert response.json()["status"] == "created"

    started = client.post(f"/jobs/{job_id}/results")
    assert started.status_code == 202

    assert poll_terminal(client, job_id) == "finished"

    results = client.get(f"/jobs/{job_id}/results")
    assert results.status_code == 200
    payload = results.json()
    assert len(payload["assets"]) == 1
    assert payload["stac_items"][0]["stac_version"] == "1.0.0"

    asset = client.get(payload["assets"][0])
    assert asset.status_code == 200
    cube_doc = asset.json()
    assert "dimensions" in cube_doc and "values" in cube_doc

    prov = client.get(payload["provenance_href"])
    assert prov.status_code == 200
    prov_doc = prov.json()
    assert set(prov_doc) >= {"activity", "entity", "agent", "used"}


def test_invalid_graph_rejected_400(client):
    response = client.post("/jobs", content=b"this is not json")
    assert response.status_code == 400
    assert response.json()["error"] == "parse"

    bad = {"n": {"process_id": "bogus", "arguments": {}, "result": True}}
    response = client.post("/jobs", content=json.dumps(bad))
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "validation"
    assert body["findings"][0]["kind"] == "unknown_process"


def test_unknown_job_404(client):
    assert client.get("/jobs/nope").status_code == 404
    assert client.post("/jobs/nope/results").status_code == 404
    assert client.get("/jobs/nope/logs").status_code == 404


def test_results_before_finished_409(client):
    job_id = client.post("/jobs", content=constant_graph()).json()["id"]
    response = client.get(f"/jobs/{job_id}/results")
    assert response.status_code == 409
    assert response.json()["error"] == "not_finished"


def test_double_start_409(client):
    job_id = client.post("/jobs", content=constant_graph()).json()["id"]
    assert client.post(f"/jobs/{job_id}/results").status_code == 202
    poll_terminal(client, job_id)
    assert client.post(f"/jobs/{job_id}/results").status_code == 409


def test_download_rejects_bad_signature(client):
    job_id = client.post("/jobs", content=json.dumps(three_step_doc("o.json"))).json()["id"]
    client.post(f"/jobs/{job_id}/results")
    poll_terminal(client, job_id)
    url = client.get(f"/jobs/{job_id}/results").json()["assets"][0]
    # flip one signature hex digit
    tampered = url[:-1] + ("0" if url[-1] != "0" else "1")
    assert client.get(tampered).status_code == 403
    # unsigned access denied
    assert client.get(url.split("?")[0]).status_code == 403


def test_logs_over_http(client):
    job_id = client.post("/jobs", content=json.dumps(three_step_doc("o.json"))).json()["id"]
    client.post(f"/jobs/{job_id}/results")
    poll_terminal(client, job_id)
    logs = client.get(f"/jobs/{job_id}/logs").json()["logs"]
    assert any("node started" in line["message"] for line in logs)
    assert all({"time", "level", "message"} <= set(line) for line in logs)


def test_real_socket_round_trip(tmp_path):
    """Drive the service over an actual TCP socket with uvicorn."""
    import socket
    import threading

    import httpx
    import uvicorn

    service = JobService(ServiceConfig(secret=SECRET, storage_root=tmp_path / "store"))
    app = create_app(service)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(
        target=server.run, kwargs={"sockets": [sock]}, daemon=True
    )
    thread.start()
    try:
        deadline = time.monotonic() + 10
        while not server.started and time.monotonic() < deadline:
            time.sleep(0.01)
        assert server.started
        base = f"http://127.0.0.1:{port}"
        job_id = httpx.post(f"{base}/jobs", content=constant_graph()).json()["id"]
        httpx.post(f"{base}/jobs/{job_id}/results")
        deadline = time.monotonic() + 10
        status = "created"
        while time.monotonic() < deadline:
            status = httpx.get(f"{base}/jobs/{job_id}").json()["status"]
            if status in ("finished", "error"):
                break
            time.sleep(0.01)
        assert status == "finished"
    finally:
        server.should_exit = True
        thread.join(timeout=10)
        service.shutdown()
