from typing import Any, Dict, List, Optional, Tuple

import orjson
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from xxhash import xxh64

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import IntervalSet, WindowConfig
from fraccond_core.utils.constants.constants import (
    DEFAULT_ASSEMBLY_WORKERS,
    DEFAULT_BLOCK_ENTRIES,
    DEFAULT_RESOLUTIONS,
    DEFAULT_STUDY_WORKERS,
    FAMILY_LOWER_BOUND,
    POSITIVITY_RTOL,
    SPATIAL_DIMENSION,
)
from fraccond_core.utils.constants.enums import CheckOutcome, ConstructionMode

IntervalList = List[Tuple[float, float]]


def _as_interval_list(value: Any) -> Any:
    """Accept a single [lo, hi] pair or a list of pairs."""
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return [tuple(value)]
    return value


class ProblemSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    s: float
    mode: ConstructionMode = ConstructionMode.BOUNDED
    eta_scale: float = 1.0
    family_scales: List[float] = Field(default_factory=list)
    truncation_check: bool = False

    @field_validator("s")
    @classmethod
    def validate_exponent(cls, s: float) -> float:
        upper = min(1.0, SPATIAL_DIMENSION / 2.0)
        if not 0.0 < s < upper:
            raise ValueError(f"s = {s} violates 0 < s < min(1, n/2) = {upper} for n = {SPATIAL_DIMENSION}")
        return s

    @field_validator("eta_scale")
    @classmethod
    def validate_eta_scale(cls, eta_scale: float) -> float:
        if not 0.0 < eta_scale <= 1.0:
            raise ValueError(f"eta_scale = {eta_scale} must lie in (0, 1]")
        return eta_scale

    @field_validator("family_scales")
    @classmethod
    def validate_family_scales(cls, scales: List[float]) -> List[float]:
        for scale in scales:
            if not 0.0 < scale <= 1.0:
                raise ValueError(f"family scale {scale} must lie in (0, 1]")
        return scales


class GeometrySection(BaseModel):
    """Domain, windows and box. omega and epsilon override the automatic choices; omega: [] forces an empty omega."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    box: Tuple[float, float]
    omega_dom: IntervalList
    w1: IntervalList
    w2: IntervalList
    omega: Optional[IntervalList] = None
    epsilon: Optional[float] = None

    @field_validator("omega_dom", "w1", "w2", "omega", mode="before")
    @classmethod
    def wrap_single_interval(cls, value: Any) -> Any:
        return _as_interval_list(value)


class DiscretizationSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_nodes: int = 1025
    resolutions: List[int] = Field(default_factory=lambda: list(DEFAULT_RESOLUTIONS))
    workers: int = DEFAULT_ASSEMBLY_WORKERS
    block_entries: int = DEFAULT_BLOCK_ENTRIES
    study_workers: int = DEFAULT_STUDY_WORKERS

    @field_validator("workers", "block_entries", "study_workers")
    @classmethod
    def validate_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"value must be at least 1, got {value}")
        return value


class TolerancesSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    positivity: float = POSITIVITY_RTOL
    family_lower_bound: float = FAMILY_LOWER_BOUND
    normalization: float = 1e-6
    parseval: float = 1e-2
    laplacian: float = 1e-4
    commutation: float = 1e-6
    hat_energy: float = 1e-3
    small_solve: float = 1e-12


class OutputSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    output_dir: str = "runs"
    write_stiffness: bool = False


class RunConfig(BaseModel):
    """Validated run configuration; geometry is checked against the window rules on construction."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    problem: ProblemSection
    geometry: GeometrySection
    discretization: DiscretizationSection = Field(default_factory=DiscretizationSection)
    tolerances: TolerancesSection = Field(default_factory=TolerancesSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def validate_geometry(self) -> "RunConfig":
        self.window_config()
        self.grid()
        return self

    def window_config(self) -> WindowConfig:
        geometry = self.geometry
        return WindowConfig(
            omega_dom=IntervalSet(intervals=geometry.omega_dom),
            w1=IntervalSet(intervals=geometry.w1),
            w2=IntervalSet(intervals=geometry.w2),
            box=geometry.box,
        )

    def grid(self) -> UniformGrid:
        return UniformGrid(lo=self.geometry.box[0], hi=self.geometry.box[1], n_nodes=self.discretization.n_nodes)

    def params(self) -> FracParams:
        return FracParams.from_exponent(self.problem.s)

    def omega_override(self) -> Optional[IntervalSet]:
        return None if self.geometry.omega is None else IntervalSet(intervals=self.geometry.omega)

    def resolved(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def run_id(self) -> str:
        return xxh64(orjson.dumps(self.resolved(), option=orjson.OPT_SORT_KEYS)).hexdigest()


class OracleCheckRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    threshold: float
    outcome: CheckOutcome
    detail: str = ""


class OracleCheckTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: List[OracleCheckRow]

    def all_passed(self) -> bool:
        return all(row.outcome == CheckOutcome.PASS for row in self.rows)

    def render(self) -> str:
        width = max(len(row.name) for row in self.rows) if self.rows else 0
        lines = [f"{'check'.ljust(width)}  outcome  value                   threshold"]
        for row in self.rows:
            lines.append(f"{row.name.ljust(width)}  {row.outcome.value.ljust(7)}  {row.value:<22.6e}  {row.threshold:.1e}")
        return "\n".join(lines)
