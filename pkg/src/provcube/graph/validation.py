"""Static validation of process graphs against a registry signature map.

Findings never raise; callers inspect the report. Unknown processes and
missing required arguments are errors, unreachable nodes are warnings
(the engine skips them silently).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .dag import build_dag
from .model import ChildGraph, ProcessGraph


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    kind: str  # "unknown_process" | "missing_argument" | "unreachable_node"
    node_path: str
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)

    def is_empty(self) -> bool:
        return not self.findings


def validate(
    graph: ProcessGraph, registry_signatures: Mapping[str, frozenset[str] | set[str]]
) -> ValidationReport:
    """Check process ids, required arguments, and reachability, recursively."""
    report = ValidationReport()
    _validate_scope(graph, registry_signatures, "$", report)
    return report


def _validate_scope(
    graph: ProcessGraph,
    signatures: Mapping[str, frozenset[str] | set[str]],
    path: str,
    report: ValidationReport,
) -> None:
    dag = build_dag(graph)
    reachable = dag.ancestors(graph.result_node) | {graph.result_node}

    for node_id, node in graph.nodes.items():
        node_path = f"{path}.{node_id}"
        if node.process_id not in signatures:
            report.findings.append(
                Finding(
                    "error",
                    "unknown_process",
                    node_path,
                    f"unknown process {node.process_id!r}",
                )
            )
        else:
            missing = set(signatures[node.process_id]) - set(node.arguments)
            for name in sorted(missing):
                report.findings.append(
                    Finding(
                        "error",
                        "missing_argument",
                        node_path,
                        f"process {node.process_id!r} requires argument {name!r}",
                    )
                )
        if node_id not in reachable:
            report.findings.append(
                Finding(
                    "warning",
                    "unreachable_node",
                    node_path,
                    "node has no path to the result node and will be skipped",
                )
            )
        for arg_name, arg in node.arguments.items():
            if isinstance(arg, ChildGraph):
                _validate_scope(arg.graph, signatures, f"{node_path}.{arg_name}", report)
