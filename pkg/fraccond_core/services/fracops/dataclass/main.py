from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from fraccond_core.services.fracops.normalization import NormalizationConstant
from fraccond_core.utils.constants.constants import SPATIAL_DIMENSION
from fraccond_core.utils.exceptions import InvalidArgumentError


class FracParams(BaseModel):
    """Dimension, exponent and normalization constant of the fractional operators."""

    model_config = ConfigDict(frozen=True)

    n: int = SPATIAL_DIMENSION
    s: float
    c_ns: float

    @model_validator(mode="after")
    def validate_params(self) -> "FracParams":
        upper = min(1.0, self.n / 2.0)
        if not 0.0 < self.s < upper:
            raise InvalidArgumentError(f"exponent s={self.s} violates 0 < s < min(1, n/2) = {upper}")
        expected = NormalizationConstant.closed_form(self.n, self.s)
        if not self.c_ns > 0 or abs(self.c_ns - expected) > 1e-12 * expected:
            raise InvalidArgumentError(f"c_ns={self.c_ns} does not match C_(n,s)={expected}")
        return self

    @classmethod
    def from_exponent(cls, s: float, n: int = SPATIAL_DIMENSION) -> "FracParams":
        upper = min(1.0, n / 2.0)
        if not 0.0 < s < upper:
            raise InvalidArgumentError(f"exponent s={s} violates 0 < s < min(1, n/2) = {upper}")
        return cls(n=n, s=s, c_ns=NormalizationConstant.normalization_constant(n, s))


class MollifierSpec(BaseModel):
    """Standard bump mollifier of radius epsilon, tabulated for one grid spacing.

    weights holds the discrete kernel on the offsets -K..K (in grid cells) and sums to one, so
    discrete convolution preserves the trapezoid integral exactly.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    epsilon: float
    h: float
    unit_mass: float
    sup_norm: float
    weights: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def coerce_weights(cls, weights: Any) -> np.ndarray:
        array = np.array(weights, dtype=np.float64, copy=True)
        if array.ndim != 1 or array.size % 2 != 1:
            raise InvalidArgumentError("mollifier weights must be a one-dimensional array of odd length")
        if np.any(array < 0.0):
            raise InvalidArgumentError("mollifier weights must be nonnegative")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def validate_spec(self) -> "MollifierSpec":
        if not self.epsilon > 0 or not self.h > 0:
            raise InvalidArgumentError("mollifier radius and grid spacing must be positive")
        if not np.allclose(self.weights, self.weights[::-1], rtol=0.0, atol=1e-15):
            raise InvalidArgumentError("mollifier weights must be even")
        return self

    @property
    def half_width(self) -> int:
        return (self.weights.size - 1) // 2

    @property
    def scaled_sup_norm(self) -> float:
        """Sup norm of rho_epsilon, i.e. sup_norm / epsilon in one dimension."""
        return self.sup_norm / self.epsilon
