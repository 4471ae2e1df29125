"""Parse process-graph JSON documents into validated ProcessGraph values.

The accepted wire shape is a JSON object mapping node-id to node object
(``process_id``, ``arguments``, optional ``result`` / ``description``).
Argument objects carrying ``from_node`` / ``from_parameter`` /
``process_graph`` become references; every other object or array is a
plain literal (bounding boxes, extent arrays, ...). A top-level
``{"process_graph": {...}}`` wrapper, as emitted by openEO clients, is
unwrapped transparently.

Parsing enforces all structural invariants: exactly one result node per
(sub-)graph, no dangling node references, no reference cycles, and a
nesting depth limit.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import (
    CycleDetected,
    DanglingReference,
    MalformedDocument,
    MissingProcessId,
    ResultCountError,
)
from .model import Argument, ChildGraph, NodeRef, ParameterRef, ProcessGraph, ProcessNode

MAX_NESTING_DEPTH = 16

_REF_KEYS = ("from_node", "from_parameter", "process_graph")


def parse_process_graph(text: bytes | str) -> ProcessGraph:
    """Parse UTF-8 JSON bytes (or str) into a ProcessGraph.

    Raises:
        MalformedDocument: not JSON, wrong top-level shape, duplicate keys,
            or nesting deeper than MAX_NESTING_DEPTH.
        MissingProcessId, ResultCountError, DanglingReference, CycleDetected:
            structural violations, reported with the offending subgraph path.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"document is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be a JSON object of nodes")
    doc = _unwrap_top_level(doc)
    return _parse_graph(doc, path="$", depth=0)


def serialize_process_graph(graph: ProcessGraph) -> bytes:
    """Inverse of parse_process_graph (round-trips structurally)."""
    return json.dumps(graph.to_json_obj(), indent=2, sort_keys=True).encode("utf-8")


def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    obj: dict[str, Any] = {}
    for key, value in pairs:
        if key in obj:
            raise MalformedDocument(f"duplicate key {key!r} in document")
        obj[key] = value
    return obj


def _unwrap_top_level(doc: dict[str, Any]) -> dict[str, Any]:
    # openEO clients export {"process_graph": {...}}; a genuine node object
    # would carry a process_id, so the wrapper is unambiguous.
    if set(doc) == {"process_graph"}:
        inner = doc["process_graph"]
        if isinstance(inner, dict) and "process_id" not in inner:
            return inner
    return doc


def _parse_graph(obj: dict[str, Any], path: str, depth: int) -> ProcessGraph:
    if depth > MAX_NESTING_DEPTH:
        raise MalformedDocument(
            f"subgraph {path!r} exceeds maximum nesting depth {MAX_NESTING_DEPTH}"
        )
    nodes: dict[str, ProcessNode] = {}
    result_nodes: list[str] = []
    for node_id, raw in obj.items():
        if not isinstance(raw, dict):
            raise MalformedDocument(f"node {path}.{node_id} is not an object")
        node = _parse_node(node_id, raw, path, depth)
        nodes[node_id] = node
        if node.result:
            result_nodes.append(node_id)

    if len(result_nodes) != 1:
        raise ResultCountError(path, len(result_nodes))

    for node_id, node in nodes.items():
        for arg_name, arg in node.arguments.items():
            if isinstance(arg, NodeRef) and arg.node_id not in nodes:
                raise DanglingReference(node_id, arg_name, arg.node_id)

    _check_acyclic(nodes, path)
    return ProcessGraph(nodes=nodes, result_node=result_nodes[0])


def _parse_node(node_id: str, raw: dict[str, Any], path: str, depth: int) -> ProcessNode:
    node_path = f"{path}.{node_id}"
    process_id = raw.get("process_id")
    if not isinstance(process_id, str) or not process_id:
        raise MissingProcessId(node_path)

    raw_args = raw.get("arguments", {})
    if not isinstance(raw_args, dict):
        raise MalformedDocument(f"node {node_path} 'arguments' must be an object")
    result = raw.get("result", False)
    if not isinstance(result, bool):
        raise MalformedDocument(f"node {node_path} 'result' must be a boolean")
    description = raw.get("description")
    if description is not None and not isinstance(description, str):
        raise MalformedDocument(f"node {node_path} 'description' must be a string")

    arguments = {
        name: _parse_argument(value, f"{node_path}.{name}", depth)
        for name, value in raw_args.items()
    }
    return ProcessNode(
        process_id=process_id, arguments=arguments, result=result, description=description
    )


def _parse_argument(value: Any, path: str, depth: int) -> Argument:
    if not isinstance(value, dict):
        return value
    markers = [k for k in _REF_KEYS if k in value]
    if not markers:
        return value  # structured literal (extent objects etc.)
    if len(markers) > 1:
        raise MalformedDocument(f"argument {path} mixes {markers}")
    marker = markers[0]
    inner = value[marker]
    if marker == "from_node":
        if not isinstance(inner, str):
            raise MalformedDocument(f"argument {path} 'from_node' must be a string")
        return NodeRef(inner)
    if marker == "from_parameter":
        if not isinstance(inner, str):
            raise MalformedDocument(f"argument {path} 'from_parameter' must be a string")
        return ParameterRef(inner)
    if not isinstance(inner, dict):
        raise MalformedDocument(f"argument {path} 'process_graph' must be an object")
    return ChildGraph(_parse_graph(inner, path=path, depth=depth + 1))


def _check_acyclic(nodes: dict[str, ProcessNode], path: str) -> None:
    """DFS cycle check over NodeRef edges; reports one cycle's node ids."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {node_id: WHITE for node_id in nodes}
    stack: list[str] = []

    def visit(node_id: str) -> None:
        color[node_id] = GREY
        stack.append(node_id)
        for target in nodes[node_id].node_refs():
            if color[target] == GREY:
                cycle = stack[stack.index(target):] + [target]
                raise CycleDetected(cycle)
            if color[target] == WHITE:
                visit(target)
        stack.pop()
        color[node_id] = BLACK

    for node_id in nodes:
        if color[node_id] == WHITE:
            visit(node_id)
