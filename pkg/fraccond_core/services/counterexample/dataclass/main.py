import math
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.dn.dataclass.main import DNComparisonReport
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.services.solver.dataclass.main import MaxPrincipleReport
from fraccond_core.utils.constants.enums import ConstructionMode, ReportStatus
from fraccond_core.utils.exceptions import InvalidArgumentError


class CutoffSpec(BaseModel):
    """Cutoff eta with 0 <= eta <= 1, eta = 1 on inner_set nodes and eta = 0 outside outer_set."""

    model_config = ConfigDict(frozen=True)

    eta: GridFunction
    inner_set: IntervalSet
    outer_set: IntervalSet

    @model_validator(mode="after")
    def validate_cutoff(self) -> "CutoffSpec":
        values = self.eta.values
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise InvalidArgumentError("cutoff values must lie in [0, 1]")
        return self

    def scaled(self, factor: float) -> GridFunction:
        return self.eta.with_values(factor * self.eta.values)


class PropertyFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    nonneg: bool
    bounded: bool
    sobolev_diag: bool
    support: bool
    lower_bound: bool

    def all_passed(self) -> bool:
        return self.nonneg and self.bounded and self.sobolev_diag and self.support and self.lower_bound

    def failed(self) -> List[str]:
        return [name for name, value in self.model_dump().items() if not value]


class ScalingRecord(BaseModel):
    """Inputs and value of C_eps = eps^{n/2} / (2 |B_1|^{1/2} ||rho||_inf^{1/2} ||m~||_L2)."""

    model_config = ConfigDict(frozen=True)

    c_epsilon: float
    epsilon: float
    unit_ball_measure: float
    rho_sup_norm: float
    m_tilde_l2: float
    dimension: int = 1
    truncation_delta: Optional[float] = None

    @classmethod
    def formula(cls, epsilon: float, unit_ball_measure: float, rho_sup_norm: float, m_tilde_l2: float, dimension: int = 1) -> float:
        return epsilon ** (dimension / 2.0) / (
            2.0 * math.sqrt(unit_ball_measure) * math.sqrt(rho_sup_norm) * m_tilde_l2
        )

    def recompute(self) -> float:
        return self.formula(self.epsilon, self.unit_ball_measure, self.rho_sup_norm, self.m_tilde_l2, self.dimension)


class CounterexampleReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: ConstructionMode
    status: ReportStatus
    gamma2: ConductivityField
    m_tilde: GridFunction
    cutoff: CutoffSpec
    epsilon: float
    omega: IntervalSet
    solve_set: IntervalSet
    eta_scale: float
    property_flags: PropertyFlags
    max_principle: MaxPrincipleReport
    sup_norm: float
    bessel_norm: float
    dn_invariance: Optional[DNComparisonReport] = None
    identity_residual: Optional[float] = None
    scaling: Optional[ScalingRecord] = None

    @property
    def deviation(self) -> GridFunction:
        return self.gamma2.deviation

    def summary(self) -> Dict[str, Any]:
        """Scalar fields in a fixed order, for the text and JSON renderings."""
        data: Dict[str, Any] = {
            "mode": self.mode.value,
            "status": self.status.value,
            "epsilon": self.epsilon,
            "omega": self.omega.as_lists(),
            "solve_set": self.solve_set.as_lists(),
            "eta_scale": self.eta_scale,
            "sup_norm_m2": self.sup_norm,
            "bessel_norm": self.bessel_norm,
            "gamma2_min": float(np.min(self.gamma2.gamma.values)),
            "gamma2_hash": self.gamma2.content_hash(),
            "flags": self.property_flags.model_dump(),
            "max_principle": self.max_principle.model_dump(),
            "identity_residual": self.identity_residual,
            "dn_invariance": self.dn_invariance.summary() if self.dn_invariance else None,
            "scaling": self.scaling.model_dump() if self.scaling else None,
        }
        return data


class FamilyFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    positivity: bool
    window_clean: bool
    bounded: bool

    def all_passed(self) -> bool:
        return self.positivity and self.window_clean and self.bounded


class FamilyResult(BaseModel):
    """Candidate Gamma_2 = m_1 - m + 1 of the invariance family.

    conductivity is None when Gamma_2 drops below alpha and the candidate is rejected.
    """

    model_config = ConfigDict(frozen=True)

    gamma2_sqrt: GridFunction
    solution: GridFunction
    alpha: float
    flags: FamilyFlags
    conductivity: Optional[ConductivityField] = None


class IdentityResidualReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    residual_sup: float
    reference_sup: float
    relative: float
    node_count: int


class ConvergenceRow(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    n_nodes: int
    h: float
    disjoint_difference: float
    overlap_difference: float
    separation_ratio: float
    identity_residual: float
    status: ReportStatus


class ConvergenceReport(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    rows: List[ConvergenceRow]
    fitted_slope: float
    s: float

    @property
    def final_separation_ratio(self) -> float:
        return self.rows[-1].separation_ratio
