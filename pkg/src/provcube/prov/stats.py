"""Summary statistics over a provenance document."""

from __future__ import annotations

from typing import Any

from .model import ProvDocument, RelationKind


def stats(document: ProvDocument) -> dict[str, Any]:
    """Counts, total run duration, and the longest dependency chain.

    critical_path_len counts the activities on the longest wasInformedBy
    chain; a document with no wasInformedBy edges scores 0.
    """
    by_kind = {kind.value: 0 for kind in RelationKind}
    for relation in document.relations:
        by_kind[relation.kind.value] += 1

    root = document.workflow_activity
    total = 0.0
    if root is not None and root in document.activities:
        total = document.activities[root].duration_s or 0.0

    return {
        "activity_count": len(document.activities),
        "entity_count": len(document.entities),
        "agent_count": len(document.agents),
        "relation_count_by_kind": by_kind,
        "total_duration_s": total,
        "critical_path_len": _critical_path_len(document),
    }


def _critical_path_len(document: ProvDocument) -> int:
    edges = [
        (rel.target, rel.source)  # informant -> informed
        for rel in document.relations
        if rel.kind == RelationKind.WAS_INFORMED_BY
    ]
    if not edges:
        return 0
    outgoing: dict[str, list[str]] = {}
    nodes: set[str] = set()
    for src, dst in edges:
        outgoing.setdefault(src, []).append(dst)
        nodes.update((src, dst))

    # Longest chain in activities via memoized DFS (the dependency graph is
    # acyclic by document invariant).
    memo: dict[str, int] = {}

    def longest_from(node: str) -> int:
        if node in memo:
            return memo[node]
        best = 1
        for succ in outgoing.get(node, ()):
            best = max(best, 1 + longest_from(succ))
        memo[node] = best
        return best

    return max(longest_from(node) for node in nodes)
