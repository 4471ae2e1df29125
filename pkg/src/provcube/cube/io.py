"""Cube serialization: cube-json and csv.

cube-json: ``{"dimensions": [{"name","kind","labels"}...], "values": [...]}``
with values flat in row-major order; it round-trips exactly.

csv: header ``dim1,...,dimN,value``, one row per cell, label cells quoted,
RFC-4180 (CRLF) line endings.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from ..errors import IoFailure, MalformedDocument, UnknownFormat
from .model import DataCube, Dimension, DimensionKind

FORMATS = ("cube-json", "csv")

MEDIA_TYPES = {"cube-json": "application/json", "csv": "text/csv"}


def cube_to_json_bytes(cube: DataCube) -> bytes:
    doc = {
        "dimensions": [d.to_json_obj() for d in cube.dimensions],
        "values": cube.values,
    }
    return json.dumps(doc, sort_keys=True).encode("utf-8")


def cube_from_json_bytes(raw: bytes | str) -> DataCube:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid cube-json: {exc}") from exc
    try:
        dims = [
            Dimension(
                name=d["name"],
                kind=DimensionKind(d["kind"]),
                labels=tuple(d["labels"]),
            )
            for d in doc["dimensions"]
        ]
        values = doc["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"not valid cube-json: {exc}") from exc
    return DataCube.from_values(dims, values)


def cube_to_csv_bytes(cube: DataCube) -> bytes:
    out = io.StringIO()
    header = csv.writer(out, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    header.writerow([*cube.dimension_names, "value"])
    writer = csv.writer(out, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\r\n")
    labels = [d.labels for d in cube.dimensions]
    flat = cube.data.ravel(order="C")
    for pos, indices in enumerate(np.ndindex(cube.shape)):
        row = [str(labels[axis][i]) for axis, i in enumerate(indices)]
        writer.writerow([*row, float(flat[pos])])
    return out.getvalue().encode("utf-8")


def write_cube(cube: DataCube, fmt: str, path: Path) -> str:
    """Write a cube to disk; returns the media type. Raises IoFailure/UnknownFormat."""
    if fmt not in FORMATS:
        raise UnknownFormat(fmt)
    payload = cube_to_json_bytes(cube) if fmt == "cube-json" else cube_to_csv_bytes(cube)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return MEDIA_TYPES[fmt]


def read_cube(path: Path) -> DataCube:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return cube_from_json_bytes(raw)
