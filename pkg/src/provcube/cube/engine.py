"""Graph execution over data cubes with provenance hooks.

Nodes run in deterministic topological order; each reachable node runs
exactly once and its output is memoized. Around every top-level node the
recorder sees begin_task/end_task with resolved inputs, outputs, and
wall-clock timings. Child graphs (reducers/appliers) evaluate in fresh
scopes with only their declared parameter bindings and are not recorded
as separate activities: the paper-level workflow is the unit of
provenance, not per-cell callable invocations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

from .._version import ENGINE_AGENT
from ..errors import (
    EngineError,
    NonFiniteValue,
    ProcessFailure,
    UnboundParameter,
    UnknownProcessError,
)
from ..graph.dag import build_dag
from ..graph.model import ChildGraph, NodeRef, ParameterRef, ProcessGraph
from ..graph.parser import serialize_process_graph
from ..prov.model import ActivityStatus, ValueDescriptor
from ..prov.recorder import ProvRecorder
from .model import DataCube
from .processes import (
    EngineSettings,
    ProcessContext,
    ProcessRegistry,
    SavedResult,
    infinite_check,
)


@dataclass
class ExecutionContext:
    """Bindings and hooks for one (sub-)graph scope."""

    parameter_bindings: dict[str, Any] = field(default_factory=dict)
    recorder: ProvRecorder | None = None
    scope_path: tuple[str, ...] = ()
    settings: EngineSettings = field(default_factory=EngineSettings)
    assets: list[SavedResult] = field(default_factory=list)

    def child_scope(self, node_id: str, bindings: dict[str, Any]) -> "ExecutionContext":
        return ExecutionContext(
            parameter_bindings=bindings,
            recorder=None,
            scope_path=(*self.scope_path, node_id),
            settings=self.settings,
            assets=self.assets,
        )


def execute(graph: ProcessGraph, registry: ProcessRegistry, context: ExecutionContext) -> Any:
    """Evaluate the graph and return the result node's output.

    Raises:
        UnknownProcessError: a reachable node names an unregistered process.
        ProcessFailure: a node's implementation raised; the node's activity
            is recorded with status "error" before propagating.
    """
    dag = build_dag(graph)
    reachable = dag.ancestors(graph.result_node) | {graph.result_node}
    outputs: dict[str, Any] = {}
    output_entities: dict[str, list[str]] = {}

    for node_id in dag.topo_order:
        if node_id not in reachable:
            continue
        node = graph.nodes[node_id]
        spec = registry.get(node.process_id)
        if spec is None:
            raise UnknownProcessError(node_id, node.process_id)

        args, input_entities = _resolve_arguments(node_id, node.arguments, context, outputs, output_entities)

        if spec.source_arg is not None and context.recorder is not None:
            label = str(args.get(spec.source_arg, ""))
            source_id = context.recorder.register_source_entity(
                ValueDescriptor(
                    label=label,
                    value_type="dataset",
                    attributes={"collection": label},
                )
            )
            input_entities.insert(0, source_id)

        activity_id = None
        if context.recorder is not None:
            activity_id = context.recorder.begin_task(
                node_id, node.process_id, context.scope_path, input_entities
            )

        process_ctx = ProcessContext(
            settings=context.settings,
            evaluate_child=lambda child, bindings, _n=node_id: _evaluate_child(
                child, bindings, registry, context, _n
            ),
            register_asset=context.assets.append,
            node_id=node_id,
        )
        try:
            value = spec.fn(args, process_ctx)
            _check_output(value, context)
        except ProcessFailure:
            if activity_id is not None:
                context.recorder.end_task(activity_id, ActivityStatus.ERROR)
            raise
        except Exception as exc:
            if activity_id is not None:
                context.recorder.end_task(activity_id, ActivityStatus.ERROR)
            raise ProcessFailure(node_id, exc) from exc

        outputs[node_id] = value
        if activity_id is not None:
            output_entities[node_id] = context.recorder.end_task(
                activity_id,
                ActivityStatus.FINISHED,
                [describe_value(value, label=node_id)],
                is_result=(node_id == graph.result_node),
            )

    return outputs[graph.result_node]


def _resolve_arguments(
    node_id: str,
    arguments: dict[str, Any],
    context: ExecutionContext,
    outputs: dict[str, Any],
    output_entities: dict[str, list[str]],
) -> tuple[dict[str, Any], list[str]]:
    resolved: dict[str, Any] = {}
    input_entities: list[str] = []
    for name, arg in arguments.items():
        if isinstance(arg, NodeRef):
            resolved[name] = outputs[arg.node_id]
            for entity_id in output_entities.get(arg.node_id, ()):
                if entity_id not in input_entities:
                    input_entities.append(entity_id)
        elif isinstance(arg, ParameterRef):
            if arg.name not in context.parameter_bindings:
                raise ProcessFailure(node_id, UnboundParameter(arg.name))
            resolved[name] = context.parameter_bindings[arg.name]
        else:
            resolved[name] = arg  # literal or ChildGraph, passed through
    return resolved, input_entities


def _evaluate_child(
    child: ChildGraph,
    bindings: dict[str, Any],
    registry: ProcessRegistry,
    context: ExecutionContext,
    node_id: str,
) -> Any:
    return execute(child.graph, registry, context.child_scope(node_id, bindings))


def _check_output(value: Any, context: ExecutionContext) -> None:
    if isinstance(value, DataCube):
        expected = 1
        for dim in value.dimensions:
            expected *= dim.size
        if value.data.size != expected:
            raise EngineError(
                f"shape law violated: {value.data.size} values for dims "
                f"{value.dimensions_summary()}"
            )
    if not context.settings.allow_nonfinite and infinite_check(value):
        raise NonFiniteValue("output contains NaN or infinity")


def describe_value(value: Any, label: str) -> ValueDescriptor:
    if isinstance(value, DataCube):
        return ValueDescriptor(
            label=label, value_type="datacube", dimensions=value.dimensions_summary()
        )
    if isinstance(value, SavedResult):
        return ValueDescriptor(
            label=label,
            value_type="file",
            attributes={"path": value.path, "format": value.format},
        )
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return ValueDescriptor(
            label=label, value_type="scalar", attributes={"value": repr(value)}
        )
    return ValueDescriptor(
        label=label, value_type="value", attributes={"value": repr(value)}
    )


# --------------------------------------------------------------------------- #
# one-call runner shared by the CLI and the job service
# --------------------------------------------------------------------------- #


@dataclass
class RunResult:
    value: Any
    recorder: ProvRecorder
    assets: list[SavedResult]
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def default_workflow_name(graph: ProcessGraph) -> str:
    """Content-addressed name, identical for identical graphs on any runner."""
    digest = hashlib.sha1(serialize_process_graph(graph)).hexdigest()[:12]
    return f"wf-{digest}"


def run_with_provenance(
    graph: ProcessGraph,
    registry: ProcessRegistry,
    settings: EngineSettings | None = None,
    workflow_name: str | None = None,
    agent_name: str = ENGINE_AGENT,
    listener=None,
    clock=None,
) -> RunResult:
    """Execute a graph under a fresh recorder; never raises engine errors.

    On failure the failing node's activity is already recorded with status
    "error"; the workflow root is closed with the same status so the partial
    document stays serializable.
    """
    recorder = ProvRecorder(clock=clock, listener=listener)
    recorder.begin_workflow(workflow_name or default_workflow_name(graph), agent_name)
    context = ExecutionContext(recorder=recorder, settings=settings or EngineSettings())
    try:
        value = execute(graph, registry, context)
    except (ProcessFailure, UnknownProcessError) as exc:
        recorder.end_workflow(ActivityStatus.ERROR)
        return RunResult(value=None, recorder=recorder, assets=context.assets, error=exc)
    recorder.end_workflow(ActivityStatus.FINISHED)
    return RunResult(value=value, recorder=recorder, assets=context.assets)
