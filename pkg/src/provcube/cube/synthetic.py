"""Deterministic synthetic cube generation.

Stands in for real satellite collections: values are a pure function of
(collection id, cell indices), so identical load arguments always yield
bit-identical cubes on every platform.
"""

from __future__ import annotations

from datetime import date, timedelta
from typing import Sequence

import numpy as np

from ..errors import EmptyBands, InvalidExtent
from .model import DataCube, Dimension, DimensionKind

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One round of the splitmix64 mixer (64-bit wrapping arithmetic)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return h


def cell_value(seed: int, indices: Sequence[int]) -> float:
    """Hash a cell position into [0, 1)."""
    h = seed
    for index in indices:
        h = splitmix64(h ^ index)
    return h / 2.0**64


def parse_iso_date(value: str) -> date:
    """Accept 'YYYY-MM-DD' or a full ISO-8601 datetime (date part used)."""
    try:
        return date.fromisoformat(value[:10])
    except (ValueError, TypeError) as exc:
        raise InvalidExtent(f"bad ISO-8601 date {value!r}") from exc


def daily_labels(start: str, end: str) -> list[str]:
    """Inclusive daily labels between two ISO dates."""
    first, last = parse_iso_date(start), parse_iso_date(end)
    if first > last:
        raise InvalidExtent(f"temporal extent start {start!r} after end {end!r}")
    out = []
    current = first
    while current <= last:
        out.append(current.isoformat())
        current += timedelta(days=1)
    return out


def spatial_labels(low: float, high: float, step: float) -> list[float]:
    """Pixel-center coordinates for an extent at a fixed grid step."""
    if not high > low:
        raise InvalidExtent(f"extent low {low} must be < high {high}")
    if step <= 0:
        raise InvalidExtent(f"grid step must be positive, got {step}")
    size = max(1, int((high - low) / step + 0.5))
    return [low + (i + 0.5) * step for i in range(size)]


def synthetic_cube(
    collection_id: str,
    spatial_extent: dict,
    temporal_extent: Sequence[str],
    bands: Sequence[str] | None,
    grid_step: float,
) -> DataCube:
    """Build the deterministic cube for a load_collection/load_stac call.

    Dimension order is (x, y, time[, bands]); the bands dimension is only
    present when band names were requested.
    """
    try:
        west = float(spatial_extent["west"])
        south = float(spatial_extent["south"])
        east = float(spatial_extent["east"])
        north = float(spatial_extent["north"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidExtent(f"bad spatial extent {spatial_extent!r}") from exc
    if not isinstance(temporal_extent, (list, tuple)) or len(temporal_extent) != 2:
        raise InvalidExtent(f"temporal extent must be [start, end], got {temporal_extent!r}")
    if bands is not None and len(bands) == 0:
        raise EmptyBands("band list must not be empty when given")

    xs = spatial_labels(west, east, grid_step)
    ys = spatial_labels(south, north, grid_step)
    times = daily_labels(temporal_extent[0], temporal_extent[1])

    dims = [
        Dimension("x", DimensionKind.SPATIAL, tuple(xs)),
        Dimension("y", DimensionKind.SPATIAL, tuple(ys)),
        Dimension("time", DimensionKind.TEMPORAL, tuple(times)),
    ]
    if bands is not None:
        dims.append(Dimension("bands", DimensionKind.BANDS, tuple(bands)))

    seed = _fnv1a64(collection_id.encode("utf-8"))
    shape = tuple(d.size for d in dims)
    flat = np.empty(int(np.prod(shape)), dtype=np.float64)
    for pos, indices in enumerate(np.ndindex(shape)):
        flat[pos] = cell_value(seed, indices)
    return DataCube(dimensions=tuple(dims), data=flat.reshape(shape))
