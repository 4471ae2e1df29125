from __future__ import annotations

import math

import numpy as np
import pytest

from provcube.cube.model import DataCube, DimensionKind, dimension
from provcube.cube.processes import EngineSettings, ProcessContext, default_registry
from provcube.cube.synthetic import synthetic_cube
from provcube.errors import (
    DimensionExists,
    EmptyBands,
    EmptyReduction,
    InvalidExtent,
    NoBandsDimension,
    NoTemporalDimension,
    ShapeMismatch,
    UnknownBand,
    UnknownDimension,
)

EXTENT = {"west": 10.0, "south": 45.0, "east": 11.0, "north": 46.0}


@pytest.fixture
def ctx():
    return ProcessContext(
        settings=EngineSettings(),
        evaluate_child=lambda child, bindings: None,
        register_asset=lambda ref: None,
        node_id="test",
    )


def call(registry, process_id, ctx, **args):
    return registry.get(process_id).fn(args, ctx)


def test_default_registry_has_every_builtin(registry):
    expected = {
        "load_collection", "load_stac", "filter_bands", "filter_temporal",
        "apply", "reduce_dimension", "add_dimension", "ndvi", "save_result",
        "add", "subtract", "multiply", "divide",
        "mean", "sum", "min", "max", "sd", "constant",
    }
    assert expected <= set(registry.signatures())


# --------------------------------------------------------------------------- #
# synthetic loads
# --------------------------------------------------------------------------- #


def test_load_collection_derived_sizes(registry, ctx):
    cube = call(
        registry, "load_collection", ctx,
        id="plia_dc", spatial_extent=EXTENT,
        temporal_extent=["2023-01-01", "2023-01-03"], bands=["plia"],
    )
    assert [(d.name, d.size) for d in cube.dimensions] == [
        ("x", 2), ("y", 2), ("time", 3), ("bands", 1),
    ]
    assert cube.dimensions[2].labels == ("2023-01-01", "2023-01-02", "2023-01-03")


def test_load_zero_length_temporal_extent(registry, ctx):
    cube = call(
        registry, "load_collection", ctx,
        id="c", spatial_extent=EXTENT, temporal_extent=["2023-05-04", "2023-05-04"],
        bands=["b"],
    )
    assert cube.axis_of("time") == 2
    assert cube.dimensions[2].size == 1


def test_load_is_deterministic(registry, ctx):
    kwargs = dict(
        id="c", spatial_extent=EXTENT, temporal_extent=["2023-01-01", "2023-01-02"],
        bands=["b1", "b2"],
    )
    first = call(registry, "load_collection", ctx, **kwargs)
    second = call(registry, "load_collection", ctx, **kwargs)
    assert first.equals(second)
    assert all(0.0 <= v < 1.0 for v in first.values)


def test_load_differs_by_collection_id(registry, ctx):
    kwargs = dict(
        spatial_extent=EXTENT, temporal_extent=["2023-01-01", "2023-01-02"], bands=["b"],
    )
    a = call(registry, "load_collection", ctx, id="a", **kwargs)
    b = call(registry, "load_collection", ctx, id="b", **kwargs)
    assert not a.equals(b)


def test_load_stac_seeds_with_url(registry, ctx):
    kwargs = dict(
        spatial_extent=EXTENT, temporal_extent=["2023-01-01", "2023-01-01"], bands=["b"],
    )
    via_stac = call(registry, "load_stac", ctx, url="seed", **kwargs)
    via_collection = call(registry, "load_collection", ctx, id="seed", **kwargs)
    assert via_stac.equals(via_collection)


def test_load_without_bands_has_no_bands_dimension(registry, ctx):
    cube = call(
        registry, "load_collection", ctx,
        id="plia_dc", spatial_extent=EXTENT, temporal_extent=["2023-01-01", "2023-01-03"],
    )
    assert cube.dimension_names == ("x", "y", "time")


def test_load_rejects_bad_extent(registry, ctx):
    with pytest.raises(InvalidExtent):
        call(
            registry, "load_collection", ctx,
            id="c", spatial_extent={"west": 2, "south": 0, "east": 1, "north": 1},
            temporal_extent=["2023-01-01", "2023-01-02"], bands=["b"],
        )
    with pytest.raises(InvalidExtent):
        call(
            registry, "load_collection", ctx,
            id="c", spatial_extent=EXTENT,
            temporal_extent=["2023-01-02", "2023-01-01"], bands=["b"],
        )


def test_load_rejects_empty_bands(registry, ctx):
    with pytest.raises(EmptyBands):
        call(
            registry, "load_collection", ctx,
            id="c", spatial_extent=EXTENT,
            temporal_extent=["2023-01-01", "2023-01-02"], bands=[],
        )


def test_grid_step_controls_resolution():
    cube = synthetic_cube("c", EXTENT, ["2023-01-01", "2023-01-01"], None, grid_step=0.25)
    assert cube.dimensions[0].size == 4


# --------------------------------------------------------------------------- #
# filters
# --------------------------------------------------------------------------- #


def bands_cube() -> DataCube:
    # 2x2x1 cells x 3 bands, values hand-laid so each band slice is recognizable
    dims = [
        dimension("x", "spatial", [0, 1]),
        dimension("y", "spatial", [0, 1]),
        dimension("time", "temporal", ["2023-01-01"]),
        dimension("bands", "bands", ["a", "b", "c"]),
    ]
    values = []
    for xi in range(2):
        for yi in range(2):
            base = 10 * (2 * xi + yi)
            values.extend([base + 1, base + 2, base + 3])  # bands a, b, c
    return DataCube.from_values(dims, values)


def test_filter_bands_takes_requested_slice(registry, ctx):
    cube = bands_cube()
    out = call(registry, "filter_bands", ctx, data=cube, bands=["b"])
    assert out.find_kind(DimensionKind.BANDS).labels == ("b",)
    # brute-force slice oracle
    expected = [
        cube.data[xi, yi, 0, 1] for xi in range(2) for yi in range(2)
    ]
    assert out.values == expected


def test_filter_bands_reorders(registry, ctx):
    out = call(registry, "filter_bands", ctx, data=bands_cube(), bands=["c", "a"])
    assert out.find_kind(DimensionKind.BANDS).labels == ("c", "a")
    assert out.data[0, 0, 0, 0] == 3.0 and out.data[0, 0, 0, 1] == 1.0


def test_filter_bands_identity(registry, ctx):
    cube = bands_cube()
    out = call(registry, "filter_bands", ctx, data=cube, bands=["a", "b", "c"])
    assert out.equals(cube)


def test_filter_bands_unknown(registry, ctx):
    with pytest.raises(UnknownBand):
        call(registry, "filter_bands", ctx, data=bands_cube(), bands=["z"])


def test_filter_bands_requires_bands_dimension(registry, ctx):
    dims = [dimension("x", "spatial", [0])]
    with pytest.raises(NoBandsDimension):
        call(registry, "filter_bands", ctx,
             data=DataCube.from_values(dims, [1.0]), bands=["a"])


def time_cube() -> DataCube:
    dims = [dimension("time", "temporal", ["2023-01-01", "2023-01-02", "2023-01-03"])]
    return DataCube.from_values(dims, [1.0, 2.0, 3.0])


def test_filter_temporal_half_open(registry, ctx):
    out = call(registry, "filter_temporal", ctx, data=time_cube(),
               extent=["2023-01-01", "2023-01-03"])
    assert out.dimensions[0].labels == ("2023-01-01", "2023-01-02")
    assert out.values == [1.0, 2.0]


def test_filter_temporal_covering_everything(registry, ctx):
    out = call(registry, "filter_temporal", ctx, data=time_cube(),
               extent=["2023-01-01", "2024-01-01"])
    assert out.equals(time_cube())


def test_filter_temporal_empty_selection(registry, ctx):
    out = call(registry, "filter_temporal", ctx, data=time_cube(),
               extent=["2024-01-01", "2024-02-01"])
    assert out.dimensions[0].size == 0
    assert out.values == []


def test_filter_temporal_requires_temporal_dimension(registry, ctx):
    dims = [dimension("x", "spatial", [0])]
    with pytest.raises(NoTemporalDimension):
        call(registry, "filter_temporal", ctx,
             data=DataCube.from_values(dims, [1.0]), extent=["a", "b"])


# --------------------------------------------------------------------------- #
# dimension surgery
# --------------------------------------------------------------------------- #


def test_add_dimension_appends_size_one(registry, ctx):
    dims = [dimension("x", "spatial", [0, 1]), dimension("y", "spatial", [0, 1])]
    cube = DataCube.from_values(dims, [1.0, 2.0, 3.0, 4.0])
    out = call(registry, "add_dimension", ctx, data=cube, name="bands", label="wbsc",
               type="bands")
    assert out.dimension_names == ("x", "y", "bands")
    assert out.find_kind(DimensionKind.BANDS).labels == ("wbsc",)
    assert out.values == cube.values


def test_add_dimension_existing_name_rejected(registry, ctx):
    dims = [dimension("x", "spatial", [0])]
    cube = DataCube.from_values(dims, [1.0])
    with pytest.raises(DimensionExists):
        call(registry, "add_dimension", ctx, data=cube, name="x", label="l", type="other")


def test_unknown_reduce_dimension(registry, ctx):
    dims = [dimension("x", "spatial", [0])]
    cube = DataCube.from_values(dims, [1.0])
    with pytest.raises(UnknownDimension):
        call(registry, "reduce_dimension", ctx, data=cube, dimension="ghost", reducer=None)


# --------------------------------------------------------------------------- #
# scalar ops and reducers
# --------------------------------------------------------------------------- #


def test_binary_scalar_ops(registry, ctx):
    assert call(registry, "add", ctx, x=2, y=3) == 5.0
    assert call(registry, "subtract", ctx, x=2, y=3) == -1.0
    assert call(registry, "multiply", ctx, x=2, y=3) == 6.0
    assert call(registry, "divide", ctx, x=3, y=2) == 1.5


def test_divide_by_zero_is_ieee(registry, ctx):
    assert call(registry, "divide", ctx, x=1, y=0) == math.inf
    assert math.isnan(call(registry, "divide", ctx, x=0, y=0))


def test_binary_broadcast_scalar_cube(registry, ctx):
    dims = [dimension("x", "other", [0, 1, 2])]
    cube = DataCube.from_values(dims, [0.0, 1.0, 2.0])
    out = call(registry, "multiply", ctx, x=cube, y=2)
    assert out.values == [0.0, 2.0, 4.0]
    flipped = call(registry, "subtract", ctx, x=10, y=cube)
    assert flipped.values == [10.0, 9.0, 8.0]


def test_binary_cube_cube_same_shape(registry, ctx):
    dims = [dimension("x", "other", [0, 1])]
    a = DataCube.from_values(dims, [1.0, 2.0])
    b = DataCube.from_values(dims, [10.0, 20.0])
    assert call(registry, "add", ctx, x=a, y=b).values == [11.0, 22.0]


def test_binary_cube_shape_mismatch(registry, ctx):
    a = DataCube.from_values([dimension("x", "other", [0, 1])], [1.0, 2.0])
    b = DataCube.from_values([dimension("y", "other", [0, 1])], [1.0, 2.0])
    with pytest.raises(ShapeMismatch):
        call(registry, "add", ctx, x=a, y=b)


def test_reducers(registry, ctx):
    assert call(registry, "mean", ctx, data=[1, 2, 3]) == 2.0
    assert call(registry, "sum", ctx, data=[1, 2, 3]) == 6.0
    assert call(registry, "min", ctx, data=[3, 1, 2]) == 1.0
    assert call(registry, "max", ctx, data=[3, 1, 2]) == 3.0


def test_sd_uses_sample_denominator(registry, ctx):
    # hand computation: mean 2, squared deviations 1+0+1 = 2, / (n-1) = 1, sqrt = 1
    assert call(registry, "sd", ctx, data=[1, 2, 3]) == 1.0


def test_empty_reductions(registry, ctx):
    with pytest.raises(EmptyReduction):
        call(registry, "mean", ctx, data=[])
    with pytest.raises(EmptyReduction):
        call(registry, "sd", ctx, data=[1])


# --------------------------------------------------------------------------- #
# ndvi
# --------------------------------------------------------------------------- #


def two_band_cube(nir: float, red: float) -> DataCube:
    dims = [
        dimension("x", "spatial", [0, 1]),
        dimension("bands", "bands", ["nir", "red"]),
    ]
    return DataCube.from_values(dims, [nir, red, nir, red])


def test_ndvi_equal_bands_is_zero(registry, ctx):
    out = call(registry, "ndvi", ctx, data=two_band_cube(0.4, 0.4), nir="nir", red="red")
    assert out.find_kind(DimensionKind.BANDS).labels == ("ndvi",)
    assert out.values == [0.0, 0.0]


def test_ndvi_formula(registry, ctx):
    out = call(registry, "ndvi", ctx, data=two_band_cube(0.5, 0.1), nir="nir", red="red")
    expected = (0.5 - 0.1) / (0.5 + 0.1)
    assert all(abs(v - expected) < 1e-15 for v in out.values)


def test_ndvi_zero_sum_is_nonfinite(registry, ctx):
    out = call(registry, "ndvi", ctx, data=two_band_cube(0.0, 0.0), nir="nir", red="red")
    assert all(math.isnan(v) for v in out.values)


def test_ndvi_unknown_band(registry, ctx):
    with pytest.raises(UnknownBand):
        call(registry, "ndvi", ctx, data=two_band_cube(1, 2), nir="nope", red="red")


# --------------------------------------------------------------------------- #
# save_result
# --------------------------------------------------------------------------- #


def test_save_result_round_trip(registry, tmp_path):
    from provcube.cube.io import read_cube

    collected = []
    ctx = ProcessContext(
        settings=EngineSettings(output_root=tmp_path),
        evaluate_child=lambda child, bindings: None,
        register_asset=collected.append,
        node_id="save",
    )
    cube = bands_cube()
    ref = call(registry, "save_result", ctx, data=cube, format="cube-json", path="out.json")
    assert ref.path == "out.json"
    assert collected == [ref]
    assert read_cube(tmp_path / "out.json").equals(cube)


def test_save_result_csv_row_count(registry, tmp_path):
    ctx = ProcessContext(
        settings=EngineSettings(output_root=tmp_path),
        evaluate_child=lambda child, bindings: None,
        register_asset=lambda ref: None,
        node_id="save",
    )
    dims = [dimension("x", "spatial", [0, 1]), dimension("y", "spatial", [0, 1])]
    cube = DataCube.from_values(dims, [1.0, 2.0, 3.0, 4.0])
    call(registry, "save_result", ctx, data=cube, format="csv", path="out.csv")
    raw = (tmp_path / "out.csv").read_bytes().decode()
    lines = [l for l in raw.split("\r\n") if l]
    assert len(lines) == 5  # header + 4 cells


def test_save_result_unknown_format(registry, tmp_path):
    from provcube.errors import UnknownFormat

    ctx = ProcessContext(
        settings=EngineSettings(output_root=tmp_path),
        evaluate_child=lambda child, bindings: None,
        register_asset=lambda ref: None,
        node_id="save",
    )
    cube = DataCube.from_values([dimension("x", "other", [0])], [1.0])
    with pytest.raises(UnknownFormat):
        call(registry, "save_result", ctx, data=cube, format="tiff", path="out.tiff")


def test_save_result_rejects_escaping_paths(registry, tmp_path):
    from provcube.errors import IoFailure

    ctx = ProcessContext(
        settings=EngineSettings(output_root=tmp_path / "inner"),
        evaluate_child=lambda child, bindings: None,
        register_asset=lambda ref: None,
        node_id="save",
    )
    cube = DataCube.from_values([dimension("x", "other", [0])], [1.0])
    with pytest.raises(IoFailure):
        call(registry, "save_result", ctx, data=cube, format="cube-json",
             path="../escape.json")


def test_save_result_unwritable_path(registry):
    from provcube.errors import IoFailure

    ctx = ProcessContext(
        settings=EngineSettings(output_root=None),
        evaluate_child=lambda child, bindings: None,
        register_asset=lambda ref: None,
        node_id="save",
    )
    cube = DataCube.from_values([dimension("x", "other", [0])], [1.0])
    with pytest.raises(IoFailure):
        call(registry, "save_result", ctx, data=cube, format="cube-json",
             path="/proc/definitely/not/writable/out.json")
