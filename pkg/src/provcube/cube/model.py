"""Named-dimension data cubes.

A cube is a dense float64 array plus an ordered list of dimensions, each
carrying a kind and per-index labels. Values are stored row-major over
the dimension list. Cubes are treated as immutable: processes always
build new cubes rather than mutating inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

Label = str | float | int


class DimensionKind(str, Enum):
    SPATIAL = "spatial"
    TEMPORAL = "temporal"
    BANDS = "bands"
    OTHER = "other"


@dataclass(frozen=True)
class Dimension:
    name: str
    kind: DimensionKind
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"dimension {self.name!r} has duplicate labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of(self, label: Label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def to_json_obj(self) -> dict:
        return {"name": self.name, "kind": self.kind.value, "labels": list(self.labels)}


def dimension(name: str, kind: str | DimensionKind, labels: Sequence[Label]) -> Dimension:
    return Dimension(name=name, kind=DimensionKind(kind), labels=tuple(labels))


@dataclass(frozen=True)
class DataCube:
    dimensions: tuple[Dimension, ...]
    data: np.ndarray = field(compare=False)

    def __post_init__(self) -> None:
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate dimension names: {names}")
        expected = tuple(d.size for d in self.dimensions)
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.shape != expected:
            raise ValueError(f"data shape {arr.shape} != dimension sizes {expected}")
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_values(
        cls, dimensions: Sequence[Dimension], values: Sequence[float]
    ) -> "DataCube":
        dims = tuple(dimensions)
        shape = tuple(d.size for d in dims)
        arr = np.asarray(list(values), dtype=np.float64).reshape(shape)
        return cls(dimensions=dims, data=arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def values(self) -> list[float]:
        """Flat row-major copy of the cube values."""
        return self.data.ravel(order="C").tolist()

    @property
    def dimension_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dimensions)

    def axis_of(self, name: str) -> int:
        for i, d in enumerate(self.dimensions):
            if d.name == name:
                return i
        raise KeyError(name)

    def find_kind(self, kind: DimensionKind) -> Dimension | None:
        for d in self.dimensions:
            if d.kind == kind:
                return d
        return None

    def dimensions_summary(self) -> list[str]:
        return [f"{d.name}:{d.size}" for d in self.dimensions]

    def same_structure(self, other: "DataCube") -> bool:
        return self.dimensions == other.dimensions

    def equals(self, other: "DataCube") -> bool:
        return self.same_structure(other) and np.array_equal(self.data, other.data)

    def allclose(self, other: "DataCube", atol: float = 1e-12) -> bool:
        return self.same_structure(other) and np.allclose(
            self.data, other.data, atol=atol, rtol=0.0
        )
