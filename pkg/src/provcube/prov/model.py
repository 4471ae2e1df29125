"""W3C-PROV document model: activities, entities, agents, relations.

The model stays inside the core PROV vocabulary (Entity, Activity, Agent;
used, wasGeneratedBy, wasAssociatedWith, wasInformedBy, wasDerivedFrom)
so generic tooling can consume the output. Workflow-specific metadata
(status, duration, node id, dimensions) travels as namespaced attributes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum


class ActivityStatus(str, Enum):
    FINISHED = "finished"
    ERROR = "error"


class EntityRole(str, Enum):
    SOURCE = "source"
    INTERMEDIATE = "intermediate"
    RESULT = "result"


class AgentKind(str, Enum):
    SOFTWARE = "software"
    PERSON = "person"


class RelationKind(str, Enum):
    USED = "used"
    WAS_GENERATED_BY = "wasGeneratedBy"
    WAS_ASSOCIATED_WITH = "wasAssociatedWith"
    WAS_INFORMED_BY = "wasInformedBy"
    WAS_DERIVED_FROM = "wasDerivedFrom"


def truncate_ms(moment: datetime) -> datetime:
    """UTC timestamp truncated to millisecond precision."""
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    moment = moment.astimezone(timezone.utc)
    return moment.replace(microsecond=(moment.microsecond // 1000) * 1000)


def format_ts(moment: datetime) -> str:
    return moment.strftime("%Y-%m-%dT%H:%M:%S.") + f"{moment.microsecond // 1000:03d}Z"


def parse_ts(text: str) -> datetime:
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%S.%fZ").replace(tzinfo=timezone.utc)


@dataclass
class ValueDescriptor:
    """How a runtime value appears in provenance (type, shape, extras)."""

    label: str
    value_type: str  # "datacube" | "scalar" | "file" | "dataset" | ...
    dimensions: list[str] = field(default_factory=list)  # "name:size" entries
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass
class ProvActivity:
    id: str
    label: str
    node_id: str | None
    start_time: datetime
    end_time: datetime | None = None
    duration_s: float | None = None
    status: ActivityStatus | None = None  # None while still running
    scope_path: tuple[str, ...] = ()
    attributes: dict[str, str] = field(default_factory=dict)

    @property
    def ended(self) -> bool:
        return self.end_time is not None


@dataclass
class ProvEntity:
    id: str
    label: str
    role: EntityRole
    value_type: str
    dimensions_summary: list[str] = field(default_factory=list)
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass
class ProvAgent:
    id: str
    kind: AgentKind
    name: str


@dataclass
class Relation:
    kind: RelationKind
    source: str
    target: str
    time: datetime | None = None


_ENDPOINTS = {
    RelationKind.USED: ("activity", "entity"),
    RelationKind.WAS_GENERATED_BY: ("entity", "activity"),
    RelationKind.WAS_ASSOCIATED_WITH: ("activity", "agent"),
    RelationKind.WAS_INFORMED_BY: ("activity", "activity"),
    RelationKind.WAS_DERIVED_FROM: ("entity", "entity"),
}


@dataclass
class ProvDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    workflow_activity: str | None = None
    activities: dict[str, ProvActivity] = field(default_factory=dict)
    entities: dict[str, ProvEntity] = field(default_factory=dict)
    agents: dict[str, ProvAgent] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)

    def generator_of(self, entity_id: str) -> str | None:
        """Activity that generated an entity, if any (sources have none)."""
        for rel in self.relations:
            if rel.kind == RelationKind.WAS_GENERATED_BY and rel.source == entity_id:
                return rel.target
        return None

    def check_references(self) -> list[str]:
        """Return ids referenced by relations but missing from the document."""
        missing = []
        for rel in self.relations:
            src_kind, tgt_kind = _ENDPOINTS[rel.kind]
            for ref, kind in ((rel.source, src_kind), (rel.target, tgt_kind)):
                pool = {
                    "activity": self.activities,
                    "entity": self.entities,
                    "agent": self.agents,
                }[kind]
                if ref not in pool:
                    missing.append(ref)
        return missing

    def dependency_edges(self) -> set[tuple[str, str]]:
        """Activity-to-activity dependencies.

        Union of wasInformedBy (informant -> informed) and data flow through
        entities (generator -> user via used o wasGeneratedBy).
        """
        edges: set[tuple[str, str]] = set()
        for rel in self.relations:
            if rel.kind == RelationKind.WAS_INFORMED_BY:
                edges.add((rel.target, rel.source))
        for rel in self.relations:
            if rel.kind == RelationKind.USED:
                generator = self.generator_of(rel.target)
                if generator is not None:
                    edges.add((generator, rel.source))
        return edges

    def is_dependency_acyclic(self) -> bool:
        edges = self.dependency_edges()
        outgoing: dict[str, list[str]] = {}
        for src, dst in edges:
            outgoing.setdefault(src, []).append(dst)
        WHITE, GREY, BLACK = 0, 1, 2
        color: dict[str, int] = {a: WHITE for a in self.activities}

        def visit(node: str) -> bool:
            color[node] = GREY
            for succ in outgoing.get(node, ()):
                if color.get(succ) == GREY:
                    return False
                if color.get(succ) == WHITE and not visit(succ):
                    return False
            color[node] = BLACK
            return True

        return all(color[a] != WHITE or visit(a) for a in list(color))
