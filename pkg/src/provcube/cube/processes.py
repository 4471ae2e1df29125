"""Built-in process implementations and the pluggable registry.

Each implementation takes the node's resolved arguments plus a
ProcessContext (engine settings, child-graph evaluator, asset sink).
Implementations are pure functions of their inputs; anything they raise
is wrapped into ProcessFailure by the engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from ..errors import (
    DimensionExists,
    EmptyReduction,
    InvalidExtent,
    IoFailure,
    NoBandsDimension,
    NoTemporalDimension,
    ShapeMismatch,
    UnknownBand,
    UnknownDimension,
)
from ..graph.model import ChildGraph
from .io import MEDIA_TYPES, write_cube
from .model import DataCube, Dimension, DimensionKind
from .synthetic import synthetic_cube


@dataclass
class EngineSettings:
    grid_step: float = 0.5
    allow_nonfinite: bool = True
    output_root: Path | None = None


@dataclass(frozen=True)
class SavedResult:
    """Reference to a file written by save_result; collected as a job asset."""

    path: str  # as written in the graph (relative, stable across runners)
    resolved: Path
    format: str
    media_type: str


class ProcessContext:
    """What a process implementation may touch besides its arguments."""

    def __init__(
        self,
        settings: EngineSettings,
        evaluate_child: Callable[[ChildGraph, dict[str, Any]], Any],
        register_asset: Callable[[SavedResult], None],
        node_id: str,
    ):
        self.settings = settings
        self.evaluate_child = evaluate_child
        self.register_asset = register_asset
        self.node_id = node_id


ProcessFn = Callable[[dict[str, Any], ProcessContext], Any]


@dataclass(frozen=True)
class ProcessSpec:
    process_id: str
    fn: ProcessFn
    required: frozenset[str]
    description: str = ""
    # Argument naming the external dataset; triggers a source entity in provenance.
    source_arg: str | None = None


class ProcessRegistry:
    def __init__(self) -> None:
        self._specs: dict[str, ProcessSpec] = {}

    def register(
        self,
        process_id: str,
        fn: ProcessFn,
        required: Sequence[str] = (),
        description: str = "",
        source_arg: str | None = None,
    ) -> None:
        if process_id in self._specs:
            raise ValueError(f"process {process_id!r} already registered")
        self._specs[process_id] = ProcessSpec(
            process_id, fn, frozenset(required), description, source_arg
        )

    def get(self, process_id: str) -> ProcessSpec | None:
        return self._specs.get(process_id)

    def __contains__(self, process_id: str) -> bool:
        return process_id in self._specs

    def signatures(self) -> dict[str, frozenset[str]]:
        """process_id -> required argument names, for graph validation."""
        return {pid: spec.required for pid, spec in self._specs.items()}


# --------------------------------------------------------------------------- #
# loaders
# --------------------------------------------------------------------------- #


def _load(seed_arg: str):
    def load(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
        return synthetic_cube(
            collection_id=str(args[seed_arg]),
            spatial_extent=args["spatial_extent"],
            temporal_extent=args["temporal_extent"],
            bands=args.get("bands"),
            grid_step=ctx.settings.grid_step,
        )

    return load


# --------------------------------------------------------------------------- #
# cube processes
# --------------------------------------------------------------------------- #


def _filter_bands(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    requested = list(args["bands"])
    dim = cube.find_kind(DimensionKind.BANDS)
    if dim is None:
        raise NoBandsDimension("cube has no bands dimension")
    for name in requested:
        if name not in dim.labels:
            raise UnknownBand(name)
    axis = cube.axis_of(dim.name)
    indices = [dim.index_of(name) for name in requested]
    data = np.take(cube.data, indices, axis=axis)
    new_dim = Dimension(dim.name, dim.kind, tuple(requested))
    dims = tuple(new_dim if d.name == dim.name else d for d in cube.dimensions)
    return DataCube(dimensions=dims, data=data)


def _filter_temporal(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    extent = args["extent"]
    if not isinstance(extent, (list, tuple)) or len(extent) != 2:
        raise InvalidExtent(f"extent must be [start, end], got {extent!r}")
    start, end = extent
    if start > end:
        raise InvalidExtent(f"extent start {start!r} after end {end!r}")
    dim = cube.find_kind(DimensionKind.TEMPORAL)
    if dim is None:
        raise NoTemporalDimension("cube has no temporal dimension")
    # Half-open [start, end), the openEO convention.
    keep = [i for i, label in enumerate(dim.labels) if start <= label < end]
    axis = cube.axis_of(dim.name)
    data = np.take(cube.data, keep, axis=axis)
    new_dim = Dimension(dim.name, dim.kind, tuple(dim.labels[i] for i in keep))
    dims = tuple(new_dim if d.name == dim.name else d for d in cube.dimensions)
    return DataCube(dimensions=dims, data=data)


def _apply(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    child: ChildGraph = args["process"]
    out = np.empty_like(cube.data)
    flat_in = cube.data.ravel(order="C")
    flat_out = out.ravel(order="C")
    for i in range(flat_in.size):
        flat_out[i] = float(ctx.evaluate_child(child, {"x": float(flat_in[i])}))
    return DataCube(dimensions=cube.dimensions, data=flat_out.reshape(cube.shape))


def _reduce_dimension(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    name = args["dimension"]
    reducer: ChildGraph = args["reducer"]
    try:
        axis = cube.axis_of(name)
    except KeyError:
        raise UnknownDimension(name) from None
    moved = np.moveaxis(cube.data, axis, -1)
    out_shape = moved.shape[:-1]
    flat = moved.reshape(-1, moved.shape[-1])
    reduced = np.empty(flat.shape[0], dtype=np.float64)
    for i in range(flat.shape[0]):
        reduced[i] = float(ctx.evaluate_child(reducer, {"data": flat[i].tolist()}))
    dims = tuple(d for d in cube.dimensions if d.name != name)
    return DataCube(dimensions=dims, data=reduced.reshape(out_shape))


def _add_dimension(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    name = args["name"]
    label = args["label"]
    kind = DimensionKind(args.get("type", "other"))
    if name in cube.dimension_names:
        raise DimensionExists(name)
    dims = (*cube.dimensions, Dimension(name, kind, (label,)))
    return DataCube(dimensions=dims, data=cube.data[..., np.newaxis])


def _ndvi(args: dict[str, Any], ctx: ProcessContext) -> DataCube:
    cube: DataCube = args["data"]
    nir, red = args["nir"], args["red"]
    dim = cube.find_kind(DimensionKind.BANDS)
    if dim is None:
        raise NoBandsDimension("cube has no bands dimension")
    for name in (nir, red):
        if name not in dim.labels:
            raise UnknownBand(name)
    axis = cube.axis_of(dim.name)
    nir_slice = np.take(cube.data, dim.index_of(nir), axis=axis)
    red_slice = np.take(cube.data, dim.index_of(red), axis=axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        result = (nir_slice - red_slice) / (nir_slice + red_slice)
    data = np.expand_dims(result, axis=axis)
    new_dim = Dimension(dim.name, dim.kind, ("ndvi",))
    dims = tuple(new_dim if d.name == dim.name else d for d in cube.dimensions)
    return DataCube(dimensions=dims, data=data)


def _save_result(args: dict[str, Any], ctx: ProcessContext) -> SavedResult:
    cube: DataCube = args["data"]
    fmt = args["format"]
    raw_path = str(args["path"])
    resolved = _resolve_output_path(raw_path, ctx.settings.output_root)
    media_type = write_cube(cube, fmt, resolved)
    ref = SavedResult(path=raw_path, resolved=resolved, format=fmt, media_type=media_type)
    ctx.register_asset(ref)
    return ref


def _resolve_output_path(raw: str, root: Path | None) -> Path:
    if root is None:
        return Path(raw)
    root = root.resolve()
    candidate = (root / raw).resolve()
    if not candidate.is_relative_to(root):
        raise IoFailure(f"path {raw!r} escapes the output root")
    return candidate


# --------------------------------------------------------------------------- #
# scalar / elementwise and array reducers
# --------------------------------------------------------------------------- #


def _binary(op: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    def fn(args: dict[str, Any], ctx: ProcessContext) -> Any:
        x, y = args["x"], args["y"]
        if isinstance(x, DataCube) and isinstance(y, DataCube):
            if not x.same_structure(y):
                raise ShapeMismatch(
                    f"cubes differ: {x.dimensions_summary()} vs {y.dimensions_summary()}"
                )
            with np.errstate(all="ignore"):
                return DataCube(dimensions=x.dimensions, data=op(x.data, y.data))
        if isinstance(x, DataCube) or isinstance(y, DataCube):
            cube, scalar, flipped = (
                (x, y, False) if isinstance(x, DataCube) else (y, x, True)
            )
            scalar = _as_scalar(scalar)
            with np.errstate(all="ignore"):
                data = op(scalar, cube.data) if flipped else op(cube.data, scalar)
            return DataCube(dimensions=cube.dimensions, data=data)
        with np.errstate(all="ignore"):
            return float(op(np.float64(_as_scalar(x)), np.float64(_as_scalar(y))))

    return fn


def _as_scalar(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ShapeMismatch(f"expected a number, got {type(value).__name__}")
    return float(value)


def _reducer(op: Callable[[np.ndarray], float], min_length: int = 1):
    def fn(args: dict[str, Any], ctx: ProcessContext) -> float:
        data = args["data"]
        if not isinstance(data, (list, tuple)) or len(data) < min_length:
            raise EmptyReduction(
                f"reduction needs at least {min_length} value(s), got {data!r}"
            )
        return float(op(np.asarray(data, dtype=np.float64)))

    return fn


def _sd(values: np.ndarray) -> float:
    # Sample standard deviation (n-1 denominator), per the openEO definition.
    return float(np.std(values, ddof=1))


def _constant(args: dict[str, Any], ctx: ProcessContext) -> Any:
    return args["x"]


# --------------------------------------------------------------------------- #
# default registry
# --------------------------------------------------------------------------- #


def default_registry() -> ProcessRegistry:
    reg = ProcessRegistry()
    reg.register(
        "load_collection",
        _load("id"),
        required=("id", "spatial_extent", "temporal_extent"),
        description="Load a (synthetic) collection as a data cube",
        source_arg="id",
    )
    reg.register(
        "load_stac",
        _load("url"),
        required=("url", "spatial_extent", "temporal_extent"),
        description="Load a (synthetic) STAC collection as a data cube",
        source_arg="url",
    )
    reg.register(
        "filter_bands", _filter_bands, required=("data", "bands"),
        description="Restrict the bands dimension to the requested labels",
    )
    reg.register(
        "filter_temporal", _filter_temporal, required=("data", "extent"),
        description="Restrict the temporal dimension to [start, end)",
    )
    reg.register(
        "apply", _apply, required=("data", "process"),
        description="Apply a unary child graph to every cube value",
    )
    reg.register(
        "reduce_dimension", _reduce_dimension, required=("data", "dimension", "reducer"),
        description="Collapse one dimension with a reducer child graph",
    )
    reg.register(
        "add_dimension", _add_dimension, required=("data", "name", "label"),
        description="Append a new size-1 dimension",
    )
    reg.register(
        "ndvi", _ndvi, required=("data", "nir", "red"),
        description="Normalized difference of two bands",
    )
    reg.register(
        "save_result", _save_result, required=("data", "format", "path"),
        description="Write the cube to disk and register it as a result asset",
    )
    reg.register("add", _binary(np.add), required=("x", "y"))
    reg.register("subtract", _binary(np.subtract), required=("x", "y"))
    reg.register("multiply", _binary(np.multiply), required=("x", "y"))
    reg.register("divide", _binary(np.divide), required=("x", "y"))
    reg.register("mean", _reducer(np.mean), required=("data",))
    reg.register("sum", _reducer(np.sum), required=("data",))
    reg.register("min", _reducer(np.min), required=("data",))
    reg.register("max", _reducer(np.max), required=("data",))
    reg.register("sd", _reducer(_sd, min_length=2), required=("data",))
    reg.register("constant", _constant, required=("x",))
    return reg


def infinite_check(value: Any) -> bool:
    """True when the value contains any NaN or +/-inf."""
    if isinstance(value, DataCube):
        return bool(value.data.size and not np.isfinite(value.data).all())
    if isinstance(value, float):
        return not math.isfinite(value)
    return False
