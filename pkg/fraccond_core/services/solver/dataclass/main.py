from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.assembly.dataclass.main import StiffnessMatrix
from fraccond_core.utils.exceptions import InvalidArgumentError


class ExteriorValueProblem(BaseModel):
    """Find u with u = g on the exterior indices and (A u)_I = F_I on the interior ones.

    Values of g on interior indices are ignored. loads defaults to zero (homogeneous problem).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    stiffness: StiffnessMatrix
    interior: np.ndarray
    exterior: np.ndarray
    g: GridFunction
    loads: Optional[GridFunction] = None

    @field_validator("interior", "exterior", mode="before")
    @classmethod
    def coerce_indices(cls, indices: Any) -> np.ndarray:
        array = np.array(indices, dtype=np.int64, copy=True).reshape(-1)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def validate_problem(self) -> "ExteriorValueProblem":
        n = self.stiffness.size
        self.stiffness.grid.ensure_same(self.g.grid)
        if self.loads is not None:
            self.stiffness.grid.ensure_same(self.loads.grid)
        combined = np.concatenate([self.interior, self.exterior])
        if combined.size != n or not np.array_equal(np.sort(combined), np.arange(n)):
            raise InvalidArgumentError("interior and exterior indices must partition the node set")
        return self


class MaxPrincipleReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    passed: bool
    min_value: float
    min_index: int
    min_coordinate: float
    threshold: float
    tolerance: float
    exterior_nonnegative: bool

    def describe(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}: min u = {self.min_value:.6e} at node {self.min_index} (x = {self.min_coordinate:.6f}), "
            f"threshold {self.threshold:.3e}"
        )
