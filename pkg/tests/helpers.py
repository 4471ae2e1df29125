"""Shared test utilities: fake clock, graph builders, document checkers."""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone

from provcube.prov.model import EntityRole, ProvDocument, RelationKind


class FakeClock:
    """Deterministic advancing clock for recorder tests."""

    def __init__(self, start: datetime | None = None, step_ms: int = 10):
        self.current = start or datetime(2024, 5, 1, 12, 0, 0, tzinfo=timezone.utc)
        self.step = timedelta(milliseconds=step_ms)

    def __call__(self) -> datetime:
        now = self.current
        self.current = now + self.step
        return now


def constant_graph(value: float = 7) -> bytes:
    return json.dumps(
        {"c": {"process_id": "constant", "arguments": {"x": value}, "result": True}}
    ).encode()


def water_backscatter_doc(slope: float = 2.0, intercept: float = 3.0) -> dict:
    """The four-step chain: load -> apply(affine) -> reduce(time, mean) -> add_dimension."""
    return {
        "load1": {
            "process_id": "load_collection",
            "arguments": {
                "id": "plia_dc",
                "spatial_extent": {"west": 10.0, "south": 45.0, "east": 11.0, "north": 46.0},
                "temporal_extent": ["2023-01-01", "2023-01-03"],
            },
        },
        "apply1": {
            "process_id": "apply",
            "arguments": {
                "data": {"from_node": "load1"},
                "process": {
                    "process_graph": {
                        "mul": {
                            "process_id": "multiply",
                            "arguments": {"x": {"from_parameter": "x"}, "y": slope},
                        },
                        "add": {
                            "process_id": "add",
                            "arguments": {"x": {"from_node": "mul"}, "y": intercept},
                            "result": True,
                        },
                    }
                },
            },
        },
        "reduce1": {
            "process_id": "reduce_dimension",
            "arguments": {
                "data": {"from_node": "apply1"},
                "dimension": "time",
                "reducer": {
                    "process_graph": {
                        "mean1": {
                            "process_id": "mean",
                            "arguments": {"data": {"from_parameter": "data"}},
                            "result": True,
                        }
                    }
                },
            },
        },
        "add_dim1": {
            "process_id": "add_dimension",
            "arguments": {
                "data": {"from_node": "reduce1"},
                "name": "bands",
                "label": "wbsc",
                "type": "bands",
            },
            "result": True,
        },
    }


def three_step_doc(save_path: str = "three_step_result.json") -> dict:
    """load_stac -> reduce_dimension -> save_result."""
    return {
        "load": {
            "process_id": "load_stac",
            "arguments": {
                "url": "https://example.com/stac/sentinel-s1",
                "spatial_extent": {"west": 10.0, "south": 45.0, "east": 11.0, "north": 46.0},
                "temporal_extent": ["2023-01-01", "2023-01-03"],
            },
        },
        "reduce": {
            "process_id": "reduce_dimension",
            "arguments": {
                "data": {"from_node": "load"},
                "dimension": "time",
                "reducer": {
                    "process_graph": {
                        "mean1": {
                            "process_id": "mean",
                            "arguments": {"data": {"from_parameter": "data"}},
                            "result": True,
                        }
                    }
                },
            },
        },
        "save": {
            "process_id": "save_result",
            "arguments": {
                "data": {"from_node": "reduce"},
                "format": "cube-json",
                "path": save_path,
            },
            "result": True,
        },
    }


def check_document_invariants(document: ProvDocument) -> None:
    """Structural PROV invariants every completed run must satisfy."""
    missing = document.check_references()
    assert not missing, f"dangling relation references: {missing}"
    assert document.is_dependency_acyclic(), "dependency graph has a cycle"

    generated = [
        r for r in document.relations if r.kind == RelationKind.WAS_GENERATED_BY
    ]
    non_source = [
        e for e in document.entities.values() if e.role != EntityRole.SOURCE
    ]
    assert len(generated) == len(non_source), (
        f"{len(generated)} wasGeneratedBy relations for {len(non_source)} "
        "non-source entities"
    )

    for relation in document.relations:
        if relation.kind != RelationKind.WAS_INFORMED_BY:
            continue
        informed = document.activities[relation.source]
        informant = document.activities[relation.target]
        assert informant.end_time <= informed.end_time, (
            f"{informant.id} ended after downstream {informed.id}"
        )

    root_id = document.workflow_activity
    if root_id is not None:
        root = document.activities[root_id]
        for activity in document.activities.values():
            assert activity.start_time >= root.start_time


def erase_volatile(obj: dict) -> dict:
    """Strip timestamps, durations, and run-scoped prefixes from a PROV-JSON
    object so two runs of the same graph compare equal."""
    out = json.loads(json.dumps(obj))  # deep copy
    out.pop("prefix", None)
    for section in ("activity", "entity", "agent"):
        for attrs in out.get(section, {}).values():
            for key in ("prov:startTime", "prov:endTime", "pc:duration_s"):
                attrs.pop(key, None)
    for kind in ("used", "wasGeneratedBy", "wasAssociatedWith", "wasInformedBy",
                 "wasDerivedFrom"):
        records = out.get(kind, {})
        normalized = []
        for record in records.values():
            record.pop("prov:time", None)
            normalized.append(tuple(sorted(record.items())))
        out[kind] = sorted(normalized)
    return out
