"""Process-graph parsing, validation, and DAG construction."""

from .dag import Dag, build_dag
from .model import Argument, ChildGraph, NodeRef, ParameterRef, ProcessGraph, ProcessNode
from .parser import parse_process_graph, serialize_process_graph
from .validation import Finding, ValidationReport, validate

__all__ = [
    "Argument",
    "ChildGraph",
    "Dag",
    "Finding",
    "NodeRef",
    "ParameterRef",
    "ProcessGraph",
    "ProcessNode",
    "ValidationReport",
    "build_dag",
    "parse_process_graph",
    "serialize_process_graph",
    "validate",
]
