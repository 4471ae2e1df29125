"""Retrospective provenance recorder driven by executor hooks.

One recorder instance covers one workflow run. Executors call
begin_workflow once, then begin_task/end_task around every node; the
recorder assembles a ProvDocument with wall-clock timings, input/output
entities, and the full relation set.

Thread-safety: all mutation happens under one lock, so concurrent DAG
branches may interleave begin/end calls freely. Issued timestamps are
clamped to be globally non-decreasing, which keeps the monotonicity
invariant along wasInformedBy edges even if the system clock steps.
"""

from __future__ import annotations

import copy
import hashlib
import re
import threading
import uuid
from datetime import datetime, timezone
from typing import Callable, Sequence

from ..errors import AlreadyEnded, InvalidState, UnknownActivity, UnknownEntity
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
    ValueDescriptor,
    truncate_ms,
)

PROV_NS = "http://www.w3.org/ns/prov#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
ATTR_NS = "urn:provcube:attr#"

Clock = Callable[[], datetime]
Listener = Callable[[str, dict], None]


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _sanitize(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-")


class ProvRecorder:
    def __init__(self, clock: Clock | None = None, listener: Listener | None = None):
        self._lock = threading.RLock()
        self._clock = clock or _utc_now
        self._listener = listener
        self._last_ts: datetime | None = None
        self._source_count = 0
        self._pending: set[str] = set()
        self._inputs: dict[str, list[str]] = {}  # activity id -> input entity ids
        run_id = uuid.uuid4().hex
        self.document = ProvDocument(
            prefixes={
                "prov": PROV_NS,
                "xsd": XSD_NS,
                "pc": ATTR_NS,
                "act": f"urn:provcube:run:{run_id}:activity:",
                "ent": f"urn:provcube:run:{run_id}:entity:",
                "agent": f"urn:provcube:run:{run_id}:agent:",
            }
        )

    # ----------------------------------------------------------------- #
    # lifecycle
    # ----------------------------------------------------------------- #

    def begin_workflow(self, name: str, agent_name: str) -> str:
        """Create the root activity and the software agent; returns the root id."""
        with self._lock:
            if self.document.workflow_activity is not None:
                raise InvalidState("begin_workflow already called on this recorder")
            start = self._now()
            if name:
                local = _sanitize(name)
            else:
                local = hashlib.sha1(start.isoformat().encode()).hexdigest()[:12]
                name = local
            root_id = f"act:workflow/{local}"
            agent_id = f"agent:software/{_sanitize(agent_name)}"
            self.document.activities[root_id] = ProvActivity(
                id=root_id, label=name, node_id=None, start_time=start
            )
            self.document.agents[agent_id] = ProvAgent(
                id=agent_id, kind=AgentKind.SOFTWARE, name=agent_name
            )
            self.document.relations.append(
                Relation(RelationKind.WAS_ASSOCIATED_WITH, root_id, agent_id)
            )
            self.document.workflow_activity = root_id
            self._pending.add(root_id)
            self._emit("workflow_started", {"activity_id": root_id, "name": name})
            return root_id

    def end_workflow(self, status: ActivityStatus = ActivityStatus.FINISHED) -> None:
        with self._lock:
            root_id = self.document.workflow_activity
            if root_id is None:
                raise InvalidState("begin_workflow was never called")
            self._end_activity(root_id, status)
            self._emit("workflow_ended", {"activity_id": root_id, "status": status.value})

    def add_person_agent(self, name: str) -> str:
        """Optional human agent alongside the engine agent."""
        with self._lock:
            root_id = self.document.workflow_activity
            if root_id is None:
                raise InvalidState("begin_workflow was never called")
            agent_id = f"agent:person/{_sanitize(name)}"
            if any(a.kind == AgentKind.PERSON for a in self.document.agents.values()):
                raise InvalidState("a person agent is already registered")
            self.document.agents[agent_id] = ProvAgent(
                id=agent_id, kind=AgentKind.PERSON, name=name
            )
            self.document.relations.append(
                Relation(RelationKind.WAS_ASSOCIATED_WITH, root_id, agent_id)
            )
            return agent_id

    # ----------------------------------------------------------------- #
    # tasks
    # ----------------------------------------------------------------- #

    def begin_task(
        self,
        node_id: str,
        process_id: str,
        scope_path: Sequence[str] = (),
        input_entity_ids: Sequence[str] = (),
    ) -> str:
        with self._lock:
            if self.document.workflow_activity is None:
                raise InvalidState("begin_workflow must precede begin_task")
            inputs = list(dict.fromkeys(input_entity_ids))
            for entity_id in inputs:
                if entity_id not in self.document.entities:
                    raise UnknownEntity(entity_id)
            local = "/".join((*scope_path, node_id))
            activity_id = f"act:task/{local}"
            if activity_id in self.document.activities:
                raise InvalidState(f"activity {activity_id!r} already recorded")
            start = self._now()
            activity = ProvActivity(
                id=activity_id,
                label=process_id,
                node_id=node_id,
                start_time=start,
                scope_path=tuple(scope_path),
            )
            self.document.activities[activity_id] = activity
            self._pending.add(activity_id)
            self._inputs[activity_id] = inputs
            informants = []
            for entity_id in inputs:
                self.document.relations.append(
                    Relation(RelationKind.USED, activity_id, entity_id, time=start)
                )
                generator = self.document.generator_of(entity_id)
                if generator is not None and generator not in informants:
                    informants.append(generator)
            for upstream in informants:
                self.document.relations.append(
                    Relation(RelationKind.WAS_INFORMED_BY, activity_id, upstream)
                )
            self._emit(
                "task_started",
                {"activity_id": activity_id, "node_id": node_id, "process_id": process_id},
            )
            return activity_id

    def end_task(
        self,
        activity_id: str,
        status: ActivityStatus,
        outputs: Sequence[ValueDescriptor] = (),
        is_result: bool = False,
    ) -> list[str]:
        with self._lock:
            activity = self.document.activities.get(activity_id)
            if activity is None:
                raise UnknownActivity(activity_id)
            if activity.ended:
                raise AlreadyEnded(activity_id)
            end = self._end_activity(activity_id, status)
            role = EntityRole.RESULT if is_result else EntityRole.INTERMEDIATE
            entity_ids: list[str] = []
            inputs = self._inputs.get(activity_id, [])
            for k, descriptor in enumerate(outputs):
                entity_id = f"ent:{activity_id.removeprefix('act:')}/out{k}"
                entity = ProvEntity(
                    id=entity_id,
                    label=descriptor.label,
                    role=role,
                    value_type=descriptor.value_type,
                    dimensions_summary=list(descriptor.dimensions),
                    attributes=dict(descriptor.attributes),
                )
                self.document.entities[entity_id] = entity
                self.document.relations.append(
                    Relation(RelationKind.WAS_GENERATED_BY, entity_id, activity_id, time=end)
                )
                for input_id in inputs:
                    self.document.relations.append(
                        Relation(RelationKind.WAS_DERIVED_FROM, entity_id, input_id)
                    )
                entity_ids.append(entity_id)
            self._emit(
                "task_ended",
                {
                    "activity_id": activity_id,
                    "node_id": activity.node_id,
                    "status": status.value,
                    "entity_ids": entity_ids,
                },
            )
            return entity_ids

    def register_source_entity(self, descriptor: ValueDescriptor) -> str:
        with self._lock:
            k = self._source_count
            self._source_count += 1
            entity_id = f"ent:source/{k}/{_sanitize(descriptor.label) or 'unnamed'}"
            self.document.entities[entity_id] = ProvEntity(
                id=entity_id,
                label=descriptor.label,
                role=EntityRole.SOURCE,
                value_type=descriptor.value_type,
                dimensions_summary=list(descriptor.dimensions),
                attributes=dict(descriptor.attributes),
            )
            return entity_id

    # ----------------------------------------------------------------- #
    # helpers
    # ----------------------------------------------------------------- #

    def snapshot(self) -> ProvDocument:
        """Deep copy of the document, taken atomically."""
        with self._lock:
            return copy.deepcopy(self.document)

    def pending_activities(self) -> list[str]:
        with self._lock:
            return sorted(self._pending)

    def _end_activity(self, activity_id: str, status: ActivityStatus) -> datetime:
        activity = self.document.activities[activity_id]
        if activity.ended:
            raise AlreadyEnded(activity_id)
        end = self._now()
        activity.end_time = end
        activity.duration_s = (end - activity.start_time).total_seconds()
        activity.status = status
        self._pending.discard(activity_id)
        return end

    def _now(self) -> datetime:
        moment = truncate_ms(self._clock())
        if self._last_ts is not None and moment < self._last_ts:
            moment = self._last_ts
        self._last_ts = moment
        return moment

    def _emit(self, event: str, info: dict) -> None:
        if self._listener is not None:
            self._listener(event, info)
