from __future__ import annotations

import numpy as np
import pytest

from provcube.cube.io import (
    cube_from_json_bytes,
    cube_to_csv_bytes,
    cube_to_json_bytes,
)
from provcube.cube.model import DataCube, dimension


def small_cube() -> DataCube:
    dims = [
        dimension("x", "spatial", [0.25, 0.75]),
        dimension("y", "spatial", [0.25, 0.75]),
    ]
    return DataCube.from_values(dims, [1.0, 2.0, 3.0, 4.0])


def test_value_count_must_match_dimension_product():
    dims = [dimension("x", "spatial", [0, 1])]
    with pytest.raises(ValueError):
        DataCube.from_values(dims, [1.0, 2.0, 3.0])


def test_duplicate_dimension_names_rejected():
    dims = [dimension("x", "spatial", [0]), dimension("x", "temporal", ["t"])]
    with pytest.raises(ValueError):
        DataCube.from_values(dims, [1.0])


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        dimension("bands", "bands", ["a", "a"])


def test_values_are_row_major():
    cube = small_cube()
    assert cube.values == [1.0, 2.0, 3.0, 4.0]
    assert cube.data[0, 1] == 2.0  # x=0.25, y=0.75


def test_cube_json_round_trip_is_exact():
    cube = small_cube()
    again = cube_from_json_bytes(cube_to_json_bytes(cube))
    assert again.equals(cube)


def test_cube_json_round_trip_preserves_awkward_floats():
    dims = [dimension("x", "other", [0, 1, 2])]
    cube = DataCube.from_values(dims, [0.1, 1e-300, 1 / 3])
    again = cube_from_json_bytes(cube_to_json_bytes(cube))
    assert np.array_equal(again.data, cube.data)


def test_csv_has_header_plus_one_row_per_cell():
    raw = cube_to_csv_bytes(small_cube()).decode()
    lines = raw.split("\r\n")
    assert lines[0] == "x,y,value"
    # header + 4 data rows + trailing empty chunk from final CRLF
    assert len([l for l in lines if l]) == 5
    assert lines[1] == '"0.25","0.25",1.0'


def test_empty_dimension_cube_is_representable():
    dims = [dimension("x", "spatial", [0.5]), dimension("time", "temporal", [])]
    cube = DataCube.from_values(dims, [])
    assert cube.shape == (1, 0)
    assert cube.values == []
    again = cube_from_json_bytes(cube_to_json_bytes(cube))
    assert again.equals(cube)
