"""Data-cube model, built-in processes, and the provenance-aware executor."""

from .engine import (
    ExecutionContext,
    RunResult,
    default_workflow_name,
    describe_value,
    execute,
    run_with_provenance,
)
from .io import cube_from_json_bytes, cube_to_csv_bytes, cube_to_json_bytes, read_cube, write_cube
from .model import DataCube, Dimension, DimensionKind, dimension
from .processes import (
    EngineSettings,
    ProcessContext,
    ProcessRegistry,
    SavedResult,
    default_registry,
)
from .synthetic import synthetic_cube

__all__ = [
    "DataCube",
    "Dimension",
    "DimensionKind",
    "EngineSettings",
    "ExecutionContext",
    "ProcessContext",
    "ProcessRegistry",
    "RunResult",
    "SavedResult",
    "cube_from_json_bytes",
    "cube_to_csv_bytes",
    "cube_to_json_bytes",
    "default_registry",
    "default_workflow_name",
    "describe_value",
    "dimension",
    "execute",
    "read_cube",
    "run_with_provenance",
    "synthetic_cube",
    "write_cube",
]
