from typing import Any, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from xxhash import xxh64

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.utils.constants.constants import (
    EDGE_JACOBI_ORDER,
    FAR_FIELD_GAUSS_ORDER,
    NEAR_FIELD_ELEMENT_RADIUS,
    NEAR_FIELD_JACOBI_ORDER,
    NEAR_FIELD_LEGENDRE_ORDER,
    SYMMETRY_RTOL,
)
from fraccond_core.utils.exceptions import InvalidArgumentError


class ConductivityField(BaseModel):
    """Nodal square root conductivity Gamma = gamma^{1/2} with its lower bound.

    Outside the box Gamma equals tail_value; the stiffness assembler requires the same value on
    the margin band so that the exterior integrals stay analytic.
    """

    model_config = ConfigDict(frozen=True)

    gamma_sqrt: GridFunction
    alpha: float
    tail_value: float = 1.0

    @model_validator(mode="after")
    def validate_field(self) -> "ConductivityField":
        if not self.alpha > 0:
            raise InvalidArgumentError(f"lower bound alpha must be positive, got {self.alpha}")
        if not self.tail_value > 0:
            raise InvalidArgumentError(f"tail value must be positive, got {self.tail_value}")
        lowest = float(np.min(self.gamma_sqrt.values))
        if lowest < self.alpha:
            raise InvalidArgumentError(f"Gamma drops to {lowest}, below the lower bound alpha={self.alpha}")
        return self

    @classmethod
    def unit(cls, grid: UniformGrid) -> "ConductivityField":
        return cls(gamma_sqrt=GridFunction.constant(grid, 1.0), alpha=1.0)

    @classmethod
    def from_deviation(cls, deviation: GridFunction, alpha: Optional[float] = None) -> "ConductivityField":
        """Gamma = 1 + m; alpha defaults to the smallest nodal value of Gamma."""
        gamma_sqrt = deviation.with_values(1.0 + deviation.values)
        lower = float(np.min(gamma_sqrt.values)) if alpha is None else alpha
        return cls(gamma_sqrt=gamma_sqrt, alpha=lower)

    @property
    def grid(self) -> UniformGrid:
        return self.gamma_sqrt.grid

    @property
    def deviation(self) -> GridFunction:
        return self.gamma_sqrt.with_values(self.gamma_sqrt.values - 1.0)

    @property
    def gamma(self) -> GridFunction:
        return self.gamma_sqrt.with_values(self.gamma_sqrt.values**2)

    def scaled(self, factor: float) -> "ConductivityField":
        if not factor > 0:
            raise InvalidArgumentError(f"scale factor must be positive, got {factor}")
        return ConductivityField(
            gamma_sqrt=self.gamma_sqrt.with_values(factor * self.gamma_sqrt.values),
            alpha=factor * self.alpha,
            tail_value=factor * self.tail_value,
        )

    def window_nodes(self, windows: IntervalSet) -> NDArray[np.bool_]:
        return windows.contains_points(self.grid.nodes)

    def is_window_clean(self, windows: IntervalSet) -> bool:
        """True when Gamma is exactly one on every node of the windows."""
        return bool(np.all(self.gamma_sqrt.values[self.window_nodes(windows)] == 1.0))

    def content_hash(self) -> str:
        return xxh64(np.ascontiguousarray(self.gamma_sqrt.values).tobytes()).hexdigest()


class QuadratureMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    far_field_order: int = FAR_FIELD_GAUSS_ORDER
    near_field_jacobi_order: int = NEAR_FIELD_JACOBI_ORDER
    near_field_legendre_order: int = NEAR_FIELD_LEGENDRE_ORDER
    edge_jacobi_order: int = EDGE_JACOBI_ORDER
    near_field_radius: int = NEAR_FIELD_ELEMENT_RADIUS

    @model_validator(mode="after")
    def validate_orders(self) -> "QuadratureMetadata":
        for name in ("far_field_order", "near_field_jacobi_order", "near_field_legendre_order", "edge_jacobi_order"):
            if getattr(self, name) < 1:
                raise InvalidArgumentError(f"{name} must be at least 1")
        if self.near_field_radius != NEAR_FIELD_ELEMENT_RADIUS:
            raise InvalidArgumentError(
                f"near_field_radius must be {NEAR_FIELD_ELEMENT_RADIUS}; singular rules cover adjacent elements only"
            )
        return self

    def doubled(self) -> "QuadratureMetadata":
        return QuadratureMetadata(
            far_field_order=2 * self.far_field_order,
            near_field_jacobi_order=2 * self.near_field_jacobi_order,
            near_field_legendre_order=2 * self.near_field_legendre_order,
            edge_jacobi_order=2 * self.edge_jacobi_order,
            near_field_radius=self.near_field_radius,
        )


class StiffnessMatrix(BaseModel):
    """Dense Galerkin matrix A_ij = B_gamma(phi_i, phi_j) over all node hats of the grid."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    grid: UniformGrid
    params: FracParams
    quadrature: QuadratureMetadata = QuadratureMetadata()
    conductivity_hash: str = ""

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, matrix: Any) -> np.ndarray:
        array = np.array(matrix, dtype=np.float64, copy=True)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidArgumentError(f"stiffness matrix must be square, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("stiffness matrix has non-finite entries")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def validate_matrix(self) -> "StiffnessMatrix":
        if self.matrix.shape[0] != self.grid.n_nodes:
            raise InvalidArgumentError(f"matrix of size {self.matrix.shape[0]} does not fit {self.grid.describe()}")
        scale = float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0
        asymmetry = float(np.max(np.abs(self.matrix - self.matrix.T))) if self.matrix.size else 0.0
        if asymmetry > SYMMETRY_RTOL * max(scale, 1e-300):
            raise InvalidArgumentError(f"stiffness matrix is not symmetric (max asymmetry {asymmetry:.3e})")
        return self

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def minus(self, other: NDArray[np.float64]) -> "StiffnessMatrix":
        """A - M for a symmetric correction M of the same size, e.g. a potential mass matrix."""
        return StiffnessMatrix(
            matrix=self.matrix - other,
            grid=self.grid,
            params=self.params,
            quadrature=self.quadrature,
            conductivity_hash=self.conductivity_hash,
        )
