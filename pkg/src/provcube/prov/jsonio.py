"""PROV-JSON serialization (writer and reader).

Layout: one top-level object with keys "prefix", "activity", "entity",
"agent", and one map per relation kind. Relation maps key blank-node ids
"_:n<k>" (assigned in recording order) to objects using the standard
role keys. Keys are emitted sorted, so serializing one document twice is
byte-identical.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import MalformedDocument, PendingActivity
from .model import (
    ActivityStatus,
    AgentKind,
    EntityRole,
    ProvActivity,
    ProvAgent,
    ProvDocument,
    ProvEntity,
    Relation,
    RelationKind,
    format_ts,
    parse_ts,
)

_ROLE_KEYS: dict[RelationKind, tuple[str, str]] = {
    RelationKind.USED: ("prov:activity", "prov:entity"),
    RelationKind.WAS_GENERATED_BY: ("prov:entity", "prov:activity"),
    RelationKind.WAS_ASSOCIATED_WITH: ("prov:activity", "prov:agent"),
    RelationKind.WAS_INFORMED_BY: ("prov:informed", "prov:informant"),
    RelationKind.WAS_DERIVED_FROM: ("prov:generatedEntity", "prov:usedEntity"),
}

_TIMED = {RelationKind.USED, RelationKind.WAS_GENERATED_BY}

_AGENT_TYPES = {
    AgentKind.SOFTWARE: "prov:SoftwareAgent",
    AgentKind.PERSON: "prov:Person",
}


def to_prov_json(document: ProvDocument) -> bytes:
    """Serialize a completed document; raises PendingActivity if a task never ended."""
    for activity_id, activity in document.activities.items():
        if not activity.ended:
            raise PendingActivity(activity_id)
    return json.dumps(document_to_obj(document), indent=2, sort_keys=True).encode("utf-8")


def document_to_obj(document: ProvDocument) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "prefix": dict(document.prefixes),
        "activity": {
            aid: _activity_attrs(a, root=(aid == document.workflow_activity))
            for aid, a in document.activities.items()
        },
        "entity": {eid: _entity_attrs(e) for eid, e in document.entities.items()},
        "agent": {
            gid: {"prov:type": _AGENT_TYPES[g.kind], "prov:label": g.name}
            for gid, g in document.agents.items()
        },
    }
    for kind in RelationKind:
        obj[kind.value] = {}
    for k, relation in enumerate(document.relations, start=1):
        src_key, tgt_key = _ROLE_KEYS[relation.kind]
        record = {src_key: relation.source, tgt_key: relation.target}
        if relation.time is not None and relation.kind in _TIMED:
            record["prov:time"] = format_ts(relation.time)
        obj[relation.kind.value][f"_:n{k}"] = record
    return obj


def _activity_attrs(activity: ProvActivity, root: bool) -> dict[str, Any]:
    attrs: dict[str, Any] = {
        "prov:startTime": format_ts(activity.start_time),
        "prov:endTime": format_ts(activity.end_time),
        "prov:label": activity.label,
        "pc:status": activity.status.value,
        "pc:duration_s": activity.duration_s,
        "pc:role": "workflow" if root else "task",
    }
    if activity.node_id is not None:
        attrs["pc:node_id"] = activity.node_id
    if activity.scope_path:
        attrs["pc:scope_path"] = "/".join(activity.scope_path)
    for key, value in activity.attributes.items():
        attrs[f"pc:{key}"] = value
    return attrs


def _entity_attrs(entity: ProvEntity) -> dict[str, Any]:
    attrs: dict[str, Any] = {
        "prov:label": entity.label,
        "pc:type": entity.value_type,
        "pc:dimensions": list(entity.dimensions_summary),
        "pc:role": entity.role.value,
    }
    for key, value in entity.attributes.items():
        attrs[f"pc:{key}"] = value
    return attrs


# --------------------------------------------------------------------------- #
# reader
# --------------------------------------------------------------------------- #


def read_prov_json(raw: bytes | str) -> ProvDocument:
    """Parse the PROV-JSON layout back into a ProvDocument."""
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid PROV-JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedDocument("PROV-JSON top level must be an object")
    document = ProvDocument(prefixes=dict(obj.get("prefix", {})))

    for aid, attrs in obj.get("activity", {}).items():
        try:
            activity = ProvActivity(
                id=aid,
                label=attrs.get("prov:label", ""),
                node_id=attrs.get("pc:node_id"),
                start_time=parse_ts(attrs["prov:startTime"]),
                end_time=parse_ts(attrs["prov:endTime"]),
                duration_s=float(attrs["pc:duration_s"]),
                status=ActivityStatus(attrs["pc:status"]),
                scope_path=tuple(
                    p for p in attrs.get("pc:scope_path", "").split("/") if p
                ),
                attributes=_extra_attrs(attrs, known=("pc:status", "pc:duration_s",
                                                      "pc:node_id", "pc:scope_path",
                                                      "pc:role")),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise MalformedDocument(f"bad activity record {aid!r}: {exc}") from exc
        document.activities[aid] = activity
        if attrs.get("pc:role") == "workflow" and document.workflow_activity is None:
            document.workflow_activity = aid

    for eid, attrs in obj.get("entity", {}).items():
        try:
            entity = ProvEntity(
                id=eid,
                label=attrs.get("prov:label", ""),
                role=EntityRole(attrs.get("pc:role", "intermediate")),
                value_type=attrs.get("pc:type", ""),
                dimensions_summary=list(attrs.get("pc:dimensions", [])),
                attributes=_extra_attrs(attrs, known=("pc:type", "pc:dimensions",
                                                      "pc:role")),
            )
        except ValueError as exc:
            raise MalformedDocument(f"bad entity record {eid!r}: {exc}") from exc
        document.entities[eid] = entity

    for gid, attrs in obj.get("agent", {}).items():
        kind = (
            AgentKind.PERSON
            if attrs.get("prov:type") == "prov:Person"
            else AgentKind.SOFTWARE
        )
        document.agents[gid] = ProvAgent(id=gid, kind=kind, name=attrs.get("prov:label", ""))

    numbered: list[tuple[int, Relation]] = []
    for kind in RelationKind:
        src_key, tgt_key = _ROLE_KEYS[kind]
        for blank_id, record in obj.get(kind.value, {}).items():
            try:
                relation = Relation(
                    kind=kind,
                    source=record[src_key],
                    target=record[tgt_key],
                    time=parse_ts(record["prov:time"]) if "prov:time" in record else None,
                )
            except (KeyError, ValueError) as exc:
                raise MalformedDocument(
                    f"bad {kind.value} record {blank_id!r}: {exc}"
                ) from exc
            numbered.append((_blank_index(blank_id), relation))
    numbered.sort(key=lambda pair: pair[0])
    document.relations = [relation for _, relation in numbered]
    return document


def _blank_index(blank_id: str) -> int:
    try:
        return int(blank_id.removeprefix("_:n"))
    except ValueError:
        return 0


def _extra_attrs(attrs: dict[str, Any], known: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for key, value in attrs.items():
        if key.startswith("pc:") and key not in known:
            out[key.removeprefix("pc:")] = value
    return out
