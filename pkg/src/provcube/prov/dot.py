"""Graphviz DOT rendering of provenance documents.

Visual grammar: activities are filled blue rectangles, entities filled
yellow ovals, agents houses. Every activity and entity gets a white
info rectangle (timing/status, or type/dimensions) attached by a dotted
link. Relation edges carry their kind as label.
"""

from __future__ import annotations

from .model import ProvActivity, ProvDocument, ProvEntity, format_ts

ACTIVITY_FILL = "#9FB1FC"
ENTITY_FILL = "#FFFC87"
AGENT_FILL = "#FED37F"
INFO_FILL = "#FFFFFF"


def to_dot(document: ProvDocument) -> str:
    lines = [
        "digraph provenance {",
        "  rankdir=TB;",
        '  node [fontname="Helvetica", fontsize=10];',
        '  edge [fontname="Helvetica", fontsize=8];',
    ]
    for activity in document.activities.values():
        lines.append(_node(activity.id, activity.label, "box", ACTIVITY_FILL))
        lines.append(_info_node(activity.id, _activity_info(activity)))
        lines.append(_info_edge(activity.id))
    for entity in document.entities.values():
        lines.append(_node(entity.id, entity.label, "ellipse", ENTITY_FILL))
        lines.append(_info_node(entity.id, _entity_info(entity)))
        lines.append(_info_edge(entity.id))
    for agent in document.agents.values():
        lines.append(_node(agent.id, agent.name, "house", AGENT_FILL))
    for relation in document.relations:
        lines.append(
            f'  "{_esc(relation.source)}" -> "{_esc(relation.target)}"'
            f' [label="{relation.kind.value}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node(node_id: str, label: str, shape: str, fill: str) -> str:
    return (
        f'  "{_esc(node_id)}" [label="{_esc(label)}", shape={shape},'
        f' style=filled, fillcolor="{fill}"];'
    )


def _info_node(node_id: str, text: str) -> str:
    return (
        f'  "{_esc(node_id)}/info" [label="{text}", shape=box, style=filled,'
        f' fillcolor="{INFO_FILL}", fontsize=8];'
    )


def _info_edge(node_id: str) -> str:
    return f'  "{_esc(node_id)}/info" -> "{_esc(node_id)}" [style=dotted, dir=none];'


def _activity_info(activity: ProvActivity) -> str:
    parts = [f"start: {format_ts(activity.start_time)}"]
    if activity.duration_s is not None:
        parts.append(f"duration: {activity.duration_s:.3f}s")
    parts.append(f"status: {activity.status.value if activity.status else 'pending'}")
    return "\\n".join(_esc(p) for p in parts)


def _entity_info(entity: ProvEntity) -> str:
    parts = [f"type: {entity.value_type}"]
    if entity.dimensions_summary:
        parts.append("dims: " + ", ".join(entity.dimensions_summary))
    return "\\n".join(_esc(p) for p in parts)


def _esc(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')
