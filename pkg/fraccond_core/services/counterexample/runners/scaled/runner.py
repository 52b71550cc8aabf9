from typing import Any, Optional, Tuple

import numpy as np

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.counterexample.dataclass.main import CounterexampleReport, ScalingRecord
from fraccond_core.services.counterexample.runners.base_construction_runner import BaseConstructionRunner
from fraccond_core.services.fracops.dataclass.main import FracParams, MollifierSpec
from fraccond_core.services.geometry.dataclass.main import WindowConfig
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import (
    SCALED_BOUND,
    SCALED_BOUND_SLACK,
    SCALED_SOLVE_DILATION,
    SPATIAL_DIMENSION,
    UNIT_BALL_MEASURE,
)
from fraccond_core.utils.constants.enums import ConstructionMode
from fraccond_core.utils.exceptions import ConstructionFailedError


class ScaledConstructionRunner(BaseConstructionRunner):
    """
    Construction for domains bounded in one direction, realized on a long truncated interval.

    The mollified solution is multiplied by C_eps, which keeps ||m_2||_inf <= 1/2 without any
    bound on the size of the domain, so Gamma_2 >= 1/2.
    """

    mode = ConstructionMode.SCALED
    solve_dilation = SCALED_SOLVE_DILATION

    @classmethod
    def rescale(
        cls,
        mollified: GridFunction,
        m_tilde: GridFunction,
        epsilon: float,
        rho: MollifierSpec,
    ) -> Tuple[GridFunction, Optional[ScalingRecord]]:
        l2 = m_tilde.l2_norm()
        if l2 == 0.0:
            c_epsilon = 0.0
        else:
            c_epsilon = ScalingRecord.formula(epsilon, UNIT_BALL_MEASURE, rho.sup_norm, l2, SPATIAL_DIMENSION)
        record = ScalingRecord(
            c_epsilon=c_epsilon,
            epsilon=epsilon,
            unit_ball_measure=UNIT_BALL_MEASURE,
            rho_sup_norm=rho.sup_norm,
            m_tilde_l2=l2,
            dimension=SPATIAL_DIMENSION,
        )
        scaled = mollified.with_values(c_epsilon * mollified.values)
        AppLogger.log_info(f"scaled: C_eps = {c_epsilon:.12g}, ||m~||_L2 = {l2:.12g}")
        if scaled.sup_norm() > SCALED_BOUND + SCALED_BOUND_SLACK:
            raise ConstructionFailedError(
                f"scaled deviation has sup norm {scaled.sup_norm()} above {SCALED_BOUND}", c_epsilon=c_epsilon
            )
        return scaled, record

    @classmethod
    def extra_flags(cls, deviation: GridFunction, tol: float) -> Tuple[bool, bool]:
        gamma_sqrt = 1.0 + deviation.values
        bounded = deviation.sup_norm() <= SCALED_BOUND + SCALED_BOUND_SLACK
        lower = float(np.min(gamma_sqrt)) >= SCALED_BOUND - SCALED_BOUND_SLACK
        return bool(bounded), bool(lower)

    @classmethod
    def doubled_box(cls, cfg: WindowConfig, grid: UniformGrid) -> Tuple[WindowConfig, UniformGrid, int]:
        """Box of twice the length at the same spacing; returns the offset of the original nodes."""
        added = grid.n_nodes - 1
        left = added // 2
        right = added - left
        lo = grid.lo - left * grid.h
        hi = grid.hi + right * grid.h
        big_grid = UniformGrid(lo=lo, hi=hi, n_nodes=grid.n_nodes + added, margin_band=grid.margin_band)
        big_cfg = WindowConfig(
            omega_dom=cfg.omega_dom, w1=cfg.w1, w2=cfg.w2, box=(lo, hi), allow_overlap=cfg.allow_overlap
        )
        return big_cfg, big_grid, left

    @classmethod
    def build_scaled(
        cls,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        truncation_check: bool = False,
        **kwargs: Any,
    ) -> CounterexampleReport:
        """
        Run the scaled construction; with truncation_check the same omega and epsilon are rerun on a
        doubled box and the sup-norm change of m_2 on the original nodes is recorded.
        """
        report = cls.build(cfg, params, grid, **kwargs)
        if not truncation_check or report.scaling is None:
            return report
        big_cfg, big_grid, offset = cls.doubled_box(cfg, grid)
        rerun = cls.build(
            big_cfg,
            params,
            big_grid,
            eta_scale=report.eta_scale,
            omega_override=report.omega,
            epsilon_override=report.epsilon,
            with_dn=False,
        )
        restricted = rerun.deviation.values[offset : offset + grid.n_nodes]
        delta = float(np.max(np.abs(restricted - report.deviation.values)))
        AppLogger.log_info(f"scaled: truncation delta {delta:.3e} on box doubling")
        scaling = report.scaling.model_copy(update={"truncation_delta": delta})
        return report.model_copy(update={"scaling": scaling})
