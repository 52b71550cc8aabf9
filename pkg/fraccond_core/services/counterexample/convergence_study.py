import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.counterexample.dataclass.main import ConvergenceReport, ConvergenceRow
from fraccond_core.services.counterexample.runners.bounded.runner import BoundedConstructionRunner
from fraccond_core.services.dn.dn_builder import DNBuilder
from fraccond_core.services.dn.dn_comparator import DNComparator
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import WindowConfig
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.config_manager import ConfigManager
from fraccond_core.utils.constants.constants import DEFAULT_STUDY_WORKERS, MONOTONICITY_FACTOR
from fraccond_core.utils.exceptions import InvalidArgumentError, StudyFailedError


def run_resolution(cfg: WindowConfig, params: FracParams, resolution: int) -> ConvergenceRow:
    """
    One refinement level: N cells on the box, the bounded construction and both DN comparisons.
    """
    grid = UniformGrid(lo=cfg.box[0], hi=cfg.box[1], n_nodes=resolution + 1)
    unit = ConductivityField.unit(grid)
    unit_stiffness = StiffnessAssembler.assemble_stiffness(grid, unit, params)
    report = BoundedConstructionRunner.build(cfg, params, grid, with_dn=False, unit_stiffness=unit_stiffness)
    gamma2_stiffness = StiffnessAssembler.assemble_stiffness(grid, report.gamma2, params)

    disjoint = DNComparator.compare_dn(
        DNBuilder.dn_matrix(unit, cfg, params, grid, stiffness=unit_stiffness),
        DNBuilder.dn_matrix(report.gamma2, cfg, params, grid, stiffness=gamma2_stiffness),
    )
    control_cfg = cfg.with_windows(cfg.w1, cfg.w1, allow_overlap=True)
    overlap = DNComparator.compare_dn(
        DNBuilder.dn_matrix(unit, control_cfg, params, grid, stiffness=unit_stiffness),
        DNBuilder.dn_matrix(report.gamma2, control_cfg, params, grid, stiffness=gamma2_stiffness),
    )
    d, big_d = disjoint.relative_frobenius, overlap.relative_frobenius
    return ConvergenceRow(
        n_nodes=grid.n_nodes,
        h=grid.h,
        disjoint_difference=d,
        overlap_difference=big_d,
        separation_ratio=big_d / d if d > 0.0 else math.inf,
        identity_residual=report.identity_residual or 0.0,
        status=report.status,
    )


class ConvergenceStudy:
    @classmethod
    def _validate(cls, resolutions: Sequence[int]) -> List[int]:
        ordered = sorted(int(n) for n in resolutions)
        if len(ordered) < 3:
            raise InvalidArgumentError(f"a convergence study needs at least 3 resolutions, got {len(ordered)}")
        for n in ordered:
            if n < 2 or n & (n - 1):
                raise InvalidArgumentError(f"resolution {n} is not a power of two")
        if len(set(ordered)) != len(ordered):
            raise InvalidArgumentError("resolutions must be distinct")
        return ordered

    @classmethod
    def fitted_slope(cls, rows: Sequence[ConvergenceRow]) -> float:
        """Least-squares slope of log d against log h over the rows with d > 0."""
        usable = [(row.h, row.disjoint_difference) for row in rows if row.disjoint_difference > 0.0]
        if len(usable) < 2:
            return 0.0
        h, d = np.array(usable).T
        return float(np.polyfit(np.log(h), np.log(d), 1)[0])

    @classmethod
    def convergence_study(
        cls,
        cfg: WindowConfig,
        params: FracParams,
        resolutions: Sequence[int],
        workers: Optional[int] = None,
    ) -> ConvergenceReport:
        """
        Refinement study of the disjoint-window DN difference d(N) and the overlapping control D(N).

        Each resolution N is a number of cells, so the grid has N + 1 nodes. Jobs run in separate
        processes when workers > 1 and are merged by resolution.

        Raises:
            StudyFailedError: when d grows by more than a factor 2 between consecutive resolutions.
        """
        ordered = cls._validate(resolutions)
        workers = workers or int(ConfigManager.get_value("STUDY", "WORKERS", DEFAULT_STUDY_WORKERS))
        AppLogger.log_info(f"convergence study over N={ordered} with {workers} worker(s)")
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {n: executor.submit(run_resolution, cfg, params, n) for n in ordered}
                rows = [futures[n].result() for n in ordered]
        else:
            rows = [run_resolution(cfg, params, n) for n in ordered]

        for coarse, fine in zip(rows, rows[1:]):
            AppLogger.log_debug(f"d({coarse.n_nodes - 1}) = {coarse.disjoint_difference:.3e}")
            if fine.disjoint_difference > MONOTONICITY_FACTOR * coarse.disjoint_difference:
                raise StudyFailedError(
                    f"d grows from {coarse.disjoint_difference:.3e} at N={coarse.n_nodes - 1} "
                    f"to {fine.disjoint_difference:.3e} at N={fine.n_nodes - 1}",
                    rows=[row.model_dump() for row in rows],
                )
        slope = cls.fitted_slope(rows)
        AppLogger.log_info(f"convergence study slope {slope:.3f}, final separation {rows[-1].separation_ratio:.3e}")
        return ConvergenceReport(rows=rows, fitted_slope=slope, s=params.s)
