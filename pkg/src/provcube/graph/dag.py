"""Executable DAG view of a parsed process graph.

Child graphs are not flattened: they execute as nested scopes, so the DAG
covers only the top-level nodes and the data-flow edges between them.
Topological order is deterministic (lexicographic tie-break) so repeated
runs produce identical provenance documents.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..errors import CycleDetected
from .model import ProcessGraph


@dataclass(frozen=True)
class Dag:
    node_ids: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    topo_order: tuple[str, ...]

    def predecessors(self, node_id: str) -> list[str]:
        return sorted(src for src, dst in self.edges if dst == node_id)

    def ancestors(self, node_id: str) -> set[str]:
        """All nodes with a path to ``node_id`` (excluding itself)."""
        incoming: dict[str, list[str]] = {}
        for src, dst in self.edges:
            incoming.setdefault(dst, []).append(src)
        seen: set[str] = set()
        frontier = [node_id]
        while frontier:
            current = frontier.pop()
            for parent in incoming.get(current, ()):
                if parent not in seen:
                    seen.add(parent)
                    frontier.append(parent)
        return seen


def build_dag(graph: ProcessGraph) -> Dag:
    """Build the top-level DAG: one edge per NodeRef argument.

    An edge (a, b) means b consumes the output of a.
    """
    edges = {
        (target, node_id)
        for node_id, node in graph.nodes.items()
        for target in node.node_refs()
    }
    topo = _topo_sort(tuple(graph.nodes), edges)
    return Dag(node_ids=tuple(graph.nodes), edges=frozenset(edges), topo_order=topo)


def _topo_sort(node_ids: tuple[str, ...], edges: set[tuple[str, str]]) -> tuple[str, ...]:
    """Kahn's algorithm with a min-heap for lexicographic tie-breaking."""
    indegree = {node_id: 0 for node_id in node_ids}
    outgoing: dict[str, list[str]] = {node_id: [] for node_id in node_ids}
    for src, dst in edges:
        indegree[dst] += 1
        outgoing[src].append(dst)

    ready = [node_id for node_id, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        node_id = heapq.heappop(ready)
        order.append(node_id)
        for succ in outgoing[node_id]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)

    if len(order) != len(node_ids):
        # Defensive: parsing already rejects cycles.
        remaining = [n for n in node_ids if n not in set(order)]
        raise CycleDetected(remaining)
    return tuple(order)
