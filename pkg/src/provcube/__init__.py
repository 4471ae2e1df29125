"""provcube: provenance-aware workflow engine for openEO-style process graphs.

Parses JSON process graphs into DAGs, executes them over named-dimension
data cubes, records W3C-PROV retrospective provenance around every node,
and exposes results through a CLI and a simulated remote back-end.
"""

from ._version import ENGINE_AGENT, __version__
from .cube import (
    DataCube,
    Dimension,
    DimensionKind,
    EngineSettings,
    ExecutionContext,
    ProcessRegistry,
    default_registry,
    execute,
    run_with_provenance,
)
from .graph import (
    ChildGraph,
    NodeRef,
    ParameterRef,
    ProcessGraph,
    ProcessNode,
    build_dag,
    parse_process_graph,
    serialize_process_graph,
    validate,
)
from .prov import (
    ProvDocument,
    ProvRecorder,
    read_prov_json,
    stats,
    to_dot,
    to_prov_json,
)

__all__ = [
    "ChildGraph",
    "DataCube",
    "Dimension",
    "DimensionKind",
    "ENGINE_AGENT",
    "EngineSettings",
    "ExecutionContext",
    "NodeRef",
    "ParameterRef",
    "ProcessGraph",
    "ProcessNode",
    "ProcessRegistry",
    "ProvDocument",
    "ProvRecorder",
    "__version__",
    "build_dag",
    "default_registry",
    "execute",
    "parse_process_graph",
    "read_prov_json",
    "run_with_provenance",
    "serialize_process_graph",
    "stats",
    "to_dot",
    "to_prov_json",
    "validate",
]
