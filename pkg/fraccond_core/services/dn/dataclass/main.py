from typing import Any, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.utils.exceptions import InvalidArgumentError


def _frozen_array(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


class DNMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma_hash: str
    grid: UniformGrid
    s: float
    w1: List[List[float]]
    w2: List[List[float]]

    def comparable_with(self, other: "DNMetadata") -> bool:
        """Same grid, exponent and windows; the conductivities may differ."""
        return self.grid == other.grid and self.s == other.s and self.w1 == other.w1 and self.w2 == other.w2


class DNMatrix(BaseModel):
    """Partial DN data M[j, i] = B_gamma(u_i, phi_j), sources i in W1 and tests j in W2."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source_nodes: np.ndarray
    test_nodes: np.ndarray
    entries: np.ndarray
    metadata: DNMetadata

    @field_validator("source_nodes", "test_nodes", mode="before")
    @classmethod
    def coerce_nodes(cls, nodes: Any) -> np.ndarray:
        return _frozen_array(np.asarray(nodes).reshape(-1), np.int64)

    @field_validator("entries", mode="before")
    @classmethod
    def coerce_entries(cls, entries: Any) -> np.ndarray:
        array = _frozen_array(entries, np.float64)
        if array.ndim != 2:
            raise InvalidArgumentError(f"DN entries must be a matrix, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("DN entries must be finite")
        return array

    @model_validator(mode="after")
    def validate_shape(self) -> "DNMatrix":
        expected = (self.test_nodes.size, self.source_nodes.size)
        if self.entries.shape != expected:
            raise InvalidArgumentError(f"DN entries have shape {self.entries.shape}, expected {expected}")
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def source_coordinates(self) -> np.ndarray:
        return self.metadata.grid.nodes[self.source_nodes]

    def test_coordinates(self) -> np.ndarray:
        return self.metadata.grid.nodes[self.test_nodes]


class DNComparisonReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    max_abs_diff: float
    argmax: Tuple[int, int]
    relative_frobenius: float
    difference: np.ndarray

    @field_validator("difference", mode="before")
    @classmethod
    def coerce_difference(cls, difference: Any) -> np.ndarray:
        return _frozen_array(difference, np.float64)

    def as_text(self) -> str:
        return "\n".join(
            [
                f"max_abs_diff: {self.max_abs_diff:.17g}",
                f"argmax: {self.argmax[0]}, {self.argmax[1]}",
                f"relative_frobenius: {self.relative_frobenius:.17g}",
                f"shape: {self.difference.shape[0]} x {self.difference.shape[1]}",
            ]
        )

    def summary(self) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "argmax": list(self.argmax),
            "relative_frobenius": self.relative_frobenius,
        }
