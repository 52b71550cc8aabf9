from typing import Any, Callable, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from fraccond_core.utils.constants.constants import MARGIN_ATOL, MARGIN_BAND_CELLS, MIN_GRID_NODES
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class UniformGrid(BaseModel):
    """Uniform node set on the computational box [lo, hi]."""

    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float
    n_nodes: int
    margin_band: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def fill_margin_band(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("margin_band") is None:
            lo, hi, n_nodes = float(data["lo"]), float(data["hi"]), int(data["n_nodes"])
            if hi > lo and n_nodes > 1:
                data = {**data, "margin_band": MARGIN_BAND_CELLS * (hi - lo) / (n_nodes - 1)}
        return data

    @model_validator(mode="after")
    def validate_grid(self) -> "UniformGrid":
        if not self.hi > self.lo:
            raise InvalidArgumentError(f"box must satisfy lo < hi, got ({self.lo}, {self.hi})")
        if self.n_nodes < MIN_GRID_NODES:
            raise InvalidArgumentError(f"n_nodes must be at least {MIN_GRID_NODES}, got {self.n_nodes}")
        spacing = (self.hi - self.lo) / (self.n_nodes - 1)
        if self.margin_band is None:
            raise InvalidArgumentError("margin_band could not be derived from the box")
        if self.margin_band < MARGIN_BAND_CELLS * spacing * (1.0 - 1e-12):
            raise InvalidArgumentError(
                f"margin_band {self.margin_band} is narrower than {MARGIN_BAND_CELLS} cells of width {spacing}"
            )
        return self

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n_nodes - 1)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def nodes(self) -> NDArray[np.float64]:
        return self.lo + self.h * np.arange(self.n_nodes, dtype=np.float64)

    def margin_mask(self) -> NDArray[np.bool_]:
        nodes = self.nodes
        return (nodes <= self.lo + self.margin_band) | (nodes >= self.hi - self.margin_band)

    def ensure_same(self, other: "UniformGrid") -> None:
        if self != other:
            raise InvalidArgumentError(f"grid mismatch: {self.describe()} vs {other.describe()}")

    def refined(self, n_nodes: int) -> "UniformGrid":
        return UniformGrid(lo=self.lo, hi=self.hi, n_nodes=n_nodes)

    def describe(self) -> str:
        return f"[{self.lo}, {self.hi}] with {self.n_nodes} nodes (h={self.h})"


class GridFunction(BaseModel):
    """Nodal samples of a real function on a UniformGrid.

    Values are copied on construction and the array is read-only.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: UniformGrid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, values: Any) -> NDArray[np.float64]:
        array = np.array(values, dtype=np.float64, copy=True)
        if array.ndim != 1:
            raise InvalidArgumentError(f"grid function values must be one-dimensional, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise InvalidArgumentError("grid function values must be finite")
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def validate_length(self) -> "GridFunction":
        if self.values.shape[0] != self.grid.n_nodes:
            raise InvalidArgumentError(
                f"expected {self.grid.n_nodes} values for {self.grid.describe()}, got {self.values.shape[0]}"
            )
        return self

    @classmethod
    def zeros(cls, grid: UniformGrid) -> "GridFunction":
        return cls(grid=grid, values=np.zeros(grid.n_nodes))

    @classmethod
    def constant(cls, grid: UniformGrid, value: float) -> "GridFunction":
        return cls(grid=grid, values=np.full(grid.n_nodes, float(value)))

    @classmethod
    def from_callable(cls, grid: UniformGrid, func: Callable[[NDArray[np.float64]], NDArray[np.float64]]) -> "GridFunction":
        return cls(grid=grid, values=func(grid.nodes))

    @classmethod
    def hat(cls, grid: UniformGrid, index: int) -> "GridFunction":
        values = np.zeros(grid.n_nodes)
        values[index] = 1.0
        return cls(grid=grid, values=values)

    def with_values(self, values: NDArray[np.float64]) -> "GridFunction":
        return GridFunction(grid=self.grid, values=values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def integral(self) -> float:
        return float(np.trapz(self.values, dx=self.grid.h))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.trapz(self.values**2, dx=self.grid.h)))

    def evaluate(self, points: Any) -> NDArray[np.float64]:
        """Piecewise-linear interpolation, extended by the edge values outside the box.

        Compactly supported functions vanish at the edges, so they read as zero out there; a
        function with a tail (Gamma = 1 beyond the box) keeps that tail value.
        """
        return np.interp(np.asarray(points, dtype=np.float64), self.grid.nodes, self.values)

    def ensure_same_grid(self, other: "GridFunction") -> None:
        self.grid.ensure_same(other.grid)

    def ensure_vanishes_on_margin(self, what: str = "function") -> None:
        band = self.grid.margin_mask()
        leak = float(np.max(np.abs(self.values[band]))) if np.any(band) else 0.0
        if leak > MARGIN_ATOL * max(1.0, self.sup_norm()):
            raise PreconditionViolationError(
                f"{what} does not vanish on the margin band of width {self.grid.margin_band} (max |value| = {leak:.3e})",
                leak=leak,
            )
