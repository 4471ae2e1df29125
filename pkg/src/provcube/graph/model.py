"""Data model for openEO-style process graphs.

A graph maps node ids to process nodes; argument values are either plain
JSON literals or one of three reference variants (node output, bound
parameter, nested callable graph). Instances are treated as immutable
after parsing and are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass(frozen=True)
class NodeRef:
    """Reference to the output of another node in the same (sub-)graph."""

    node_id: str


@dataclass(frozen=True)
class ParameterRef:
    """Reference to a parameter bound by the enclosing scope."""

    name: str


@dataclass(frozen=True)
class ChildGraph:
    """A nested process graph used as a callable (reducer/applier)."""

    graph: "ProcessGraph"


#: An argument is one of the three reference variants above or a raw JSON
#: literal (None, bool, number, string, list, dict).
Argument = Any


@dataclass
class ProcessNode:
    process_id: str
    arguments: dict[str, Argument] = field(default_factory=dict)
    result: bool = False
    description: str | None = None

    def node_refs(self) -> list[str]:
        """Node ids referenced by this node's arguments, in argument order."""
        return [a.node_id for a in self.arguments.values() if isinstance(a, NodeRef)]

    def child_graphs(self) -> list["ProcessGraph"]:
        return [a.graph for a in self.arguments.values() if isinstance(a, ChildGraph)]


@dataclass
class ProcessGraph:
    nodes: dict[str, ProcessNode]
    result_node: str

    def __iter__(self) -> Iterator[str]:
        return iter(self.nodes)

    def to_json_obj(self) -> dict[str, Any]:
        """Wire-format object; parsing it back yields an equal graph."""
        out: dict[str, Any] = {}
        for node_id, node in self.nodes.items():
            entry: dict[str, Any] = {
                "process_id": node.process_id,
                "arguments": {
                    name: _encode_argument(arg) for name, arg in node.arguments.items()
                },
            }
            if node.result:
                entry["result"] = True
            if node.description is not None:
                entry["description"] = node.description
            out[node_id] = entry
        return out


def _encode_argument(arg: Argument) -> Any:
    if isinstance(arg, NodeRef):
        return {"from_node": arg.node_id}
    if isinstance(arg, ParameterRef):
        return {"from_parameter": arg.name}
    if isinstance(arg, ChildGraph):
        return {"process_graph": arg.graph.to_json_obj()}
    return arg
