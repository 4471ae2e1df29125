"""Exception hierarchy shared across the package.

Grouped by subsystem: graph parsing, cube processing, provenance
recording, and the job service. CLI exit codes map onto the four
base classes (see cli.py).
"""

from __future__ import annotations


class ProvCubeError(Exception):
    """Base class for all provcube errors."""


# --------------------------------------------------------------------------- #
# graph parsing / validation
# --------------------------------------------------------------------------- #


class GraphParseError(ProvCubeError):
    """Base for errors raised while parsing a process-graph document."""


class MalformedDocument(GraphParseError):
    pass


class MissingProcessId(GraphParseError):
    def __init__(self, node_path: str):
        super().__init__(f"node {node_path!r} has no usable process_id")
        self.node_path = node_path


class ResultCountError(GraphParseError):
    def __init__(self, graph_path: str, count: int):
        super().__init__(
            f"subgraph {graph_path!r} flags {count} result nodes (exactly 1 required)"
        )
        self.graph_path = graph_path
        self.count = count


class DanglingReference(GraphParseError):
    def __init__(self, node_id: str, argument: str, target: str):
        super().__init__(
            f"node {node_id!r} argument {argument!r} references unknown node {target!r}"
        )
        self.node_id = node_id
        self.argument = argument
        self.target = target


class CycleDetected(GraphParseError):
    def __init__(self, cycle: list[str]):
        super().__init__("cycle detected: " + " -> ".join(cycle))
        self.cycle = cycle


# --------------------------------------------------------------------------- #
# cube engine
# --------------------------------------------------------------------------- #


class EngineError(ProvCubeError):
    """Base for errors raised while executing a graph or a process."""


class UnknownProcessError(EngineError):
    def __init__(self, node_id: str, process_id: str):
        super().__init__(f"node {node_id!r} names unknown process {process_id!r}")
        self.node_id = node_id
        self.process_id = process_id


class ProcessFailure(EngineError):
    """A node raised during execution; ``cause`` is the underlying error."""

    def __init__(self, node_id: str, cause: BaseException | str):
        super().__init__(f"node {node_id!r} failed: {cause}")
        self.node_id = node_id
        self.cause = cause


class InvalidExtent(EngineError):
    pass


class EmptyBands(EngineError):
    pass


class NoBandsDimension(EngineError):
    pass


class NoTemporalDimension(EngineError):
    pass


class UnknownBand(EngineError):
    def __init__(self, name: str):
        super().__init__(f"band {name!r} not present")
        self.name = name


class UnknownDimension(EngineError):
    def __init__(self, name: str):
        super().__init__(f"dimension {name!r} not present")
        self.name = name


class DimensionExists(EngineError):
    def __init__(self, name: str):
        super().__init__(f"dimension {name!r} already present")
        self.name = name


class ShapeMismatch(EngineError):
    pass


class EmptyReduction(EngineError):
    pass


class NonFiniteValue(EngineError):
    pass


class UnboundParameter(EngineError):
    def __init__(self, name: str):
        super().__init__(f"parameter {name!r} is not bound in this scope")
        self.name = name


class UnknownFormat(EngineError):
    def __init__(self, fmt: str):
        super().__init__(f"unknown result format {fmt!r}")
        self.format = fmt


class IoFailure(ProvCubeError):
    pass


# --------------------------------------------------------------------------- #
# provenance recorder
# --------------------------------------------------------------------------- #


class ProvError(ProvCubeError):
    pass


class InvalidState(ProvError):
    pass


class UnknownEntity(ProvError):
    def __init__(self, entity_id: str):
        super().__init__(f"entity {entity_id!r} was never registered")
        self.entity_id = entity_id


class UnknownActivity(ProvError):
    def __init__(self, activity_id: str):
        super().__init__(f"activity {activity_id!r} was never started")
        self.activity_id = activity_id


class AlreadyEnded(ProvError):
    def __init__(self, activity_id: str):
        super().__init__(f"activity {activity_id!r} already ended")
        self.activity_id = activity_id


class PendingActivity(ProvError):
    def __init__(self, activity_id: str):
        super().__init__(f"activity {activity_id!r} has not ended; document incomplete")
        self.activity_id = activity_id


# --------------------------------------------------------------------------- #
# job service
# --------------------------------------------------------------------------- #


class ServiceError(ProvCubeError):
    pass


class NotFound(ServiceError):
    def __init__(self, job_id: str):
        super().__init__(f"no such job {job_id!r}")
        self.job_id = job_id


class InvalidTransition(ServiceError):
    def __init__(self, job_id: str, current: str, requested: str):
        super().__init__(
            f"job {job_id!r} is {current!r}; cannot move to {requested!r}"
        )
        self.job_id = job_id
        self.current = current
        self.requested = requested


class NotFinished(ServiceError):
    def __init__(self, job_id: str, status: str):
        super().__init__(f"job {job_id!r} is {status!r}; results require 'finished'")
        self.job_id = job_id
        self.status = status


class ValidationFailed(ServiceError):
    def __init__(self, findings: list):
        super().__init__("process graph failed validation")
        self.findings = findings


class BindFailure(ServiceError):
    pass
