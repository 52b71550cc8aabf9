from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField, StiffnessMatrix
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.counterexample.cutoff_builder import CutoffBuilder
from fraccond_core.services.counterexample.dataclass.main import (
    CounterexampleReport,
    CutoffSpec,
    PropertyFlags,
    ScalingRecord,
)
from fraccond_core.services.counterexample.identity_verifier import IdentityVerifier
from fraccond_core.services.dn.dn_builder import DNBuilder
from fraccond_core.services.dn.dn_comparator import DNComparator
from fraccond_core.services.fracops.dataclass.main import FracParams, MollifierSpec
from fraccond_core.services.fracops.fourier_operators import FourierOperators
from fraccond_core.services.fracops.mollifier import Mollifier
from fraccond_core.services.geometry.dataclass.main import IntervalSet, WindowConfig
from fraccond_core.services.geometry.interval_arithmetic import IntervalArithmetic
from fraccond_core.services.geometry.window_selector import WindowSelector
from fraccond_core.services.solver.dataclass.main import MaxPrincipleReport
from fraccond_core.services.solver.exterior_value_solver import ExteriorValueSolver
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import EPSILON_DILATION_COUNT, POSITIVITY_RTOL
from fraccond_core.utils.constants.enums import ConstructionMode, ReportStatus
from fraccond_core.utils.exceptions import ConstructionFailedError, InvalidArgumentError


class BaseConstructionRunner(ABC):
    """
    Shared pipeline of the counterexample constructions.

    omega and epsilon are chosen, the cutoff eta is solved s-harmonically into a dilated copy of
    the domain with Gamma = 1, the solution is mollified, rescaled by the runner, and finally
    replaced inside the domain by the discrete s-harmonic extension of its exterior values.
    """

    mode: ConstructionMode
    solve_dilation: float

    @classmethod
    @abstractmethod
    def rescale(
        cls,
        mollified: GridFunction,
        m_tilde: GridFunction,
        epsilon: float,
        rho: MollifierSpec,
    ) -> Tuple[GridFunction, Optional[ScalingRecord]]:
        """
        Turn the mollified solution into the deviation m_2 before harmonic projection.
        """
        raise NotImplementedError("rescale method must be implemented in the child class")

    @classmethod
    @abstractmethod
    def extra_flags(cls, deviation: GridFunction, tol: float) -> Tuple[bool, bool]:
        """
        Return the (bounded, lower_bound) flags of the construction.
        """
        raise NotImplementedError("extra_flags method must be implemented in the child class")

    @classmethod
    def choose_geometry(
        cls,
        cfg: WindowConfig,
        omega_override: Optional[IntervalSet],
        epsilon_override: Optional[float],
    ) -> Tuple[IntervalSet, float]:
        omega = WindowSelector.choose_omega(cfg) if omega_override is None else omega_override
        if epsilon_override is not None:
            if not epsilon_override > 0:
                raise InvalidArgumentError(f"epsilon override must be positive, got {epsilon_override}")
            return omega, epsilon_override
        return omega, WindowSelector.select_epsilon(cfg, omega)

    @classmethod
    def solve_cutoff(
        cls,
        stiffness: StiffnessMatrix,
        solve_set: IntervalSet,
        eta: GridFunction,
        tol: float,
    ) -> Tuple[GridFunction, MaxPrincipleReport]:
        """m~ with (-Delta)^s m~ = 0 on the hats inside solve_set and m~ = eta elsewhere."""
        interior, exterior = DofClassifier.classify_dofs(stiffness.grid, solve_set)
        solver = ExteriorValueSolver.for_stiffness(stiffness, interior)
        m_tilde = eta.with_values(solver.solve(eta.values))
        report = ExteriorValueSolver.check_max_principle(m_tilde, eta, tol, exterior=exterior)
        if not report.passed:
            raise ConstructionFailedError(
                f"maximum principle violated by the cutoff solve: {report.describe()}",
                min_value=report.min_value,
                min_index=report.min_index,
            )
        return m_tilde, report

    @classmethod
    def harmonic_projection(cls, stiffness: StiffnessMatrix, omega_dom: IntervalSet, deviation: GridFunction) -> GridFunction:
        interior, _ = DofClassifier.classify_dofs(stiffness.grid, omega_dom)
        solver = ExteriorValueSolver.for_stiffness(stiffness, interior)
        return deviation.with_values(solver.solve(deviation.values))

    @classmethod
    def support_clean(
        cls,
        deviation: GridFunction,
        cfg: WindowConfig,
        omega: IntervalSet,
        epsilon: float,
    ) -> bool:
        """m_2 is exactly zero on window nodes and outside the 5 eps-neighbourhoods of domain and omega."""
        nodes = deviation.grid.nodes
        radius = EPSILON_DILATION_COUNT * epsilon
        allowed = IntervalArithmetic.dilate(cfg.omega_dom, radius)
        if not omega.is_empty:
            allowed = allowed.union(IntervalArithmetic.dilate(omega, radius))
        outside = ~allowed.contains_points(nodes) | cfg.windows.contains_points(nodes)
        return bool(np.all(deviation.values[outside] == 0.0))

    @classmethod
    def property_flags(
        cls,
        deviation: GridFunction,
        eta: GridFunction,
        bessel_norm: float,
        cfg: WindowConfig,
        omega: IntervalSet,
        epsilon: float,
        tol: float,
    ) -> PropertyFlags:
        values = deviation.values
        bounded, lower_bound = cls.extra_flags(deviation, tol)
        return PropertyFlags(
            nonneg=bool(float(np.min(values)) >= -tol * eta.sup_norm()),
            bounded=bounded,
            sobolev_diag=bool(np.isfinite(bessel_norm)),
            support=cls.support_clean(deviation, cfg, omega, epsilon),
            lower_bound=lower_bound,
        )

    @classmethod
    def status(cls, eta: GridFunction, flags: PropertyFlags) -> ReportStatus:
        if eta.sup_norm() == 0.0:
            return ReportStatus.DEGENERATE
        return ReportStatus.VALID if flags.all_passed() else ReportStatus.INVALID

    @classmethod
    def cutoff(cls, omega: IntervalSet, epsilon: float, grid: UniformGrid) -> CutoffSpec:
        return CutoffBuilder.build_cutoff(omega, epsilon, grid, Mollifier.build(0.5 * epsilon, grid))

    @classmethod
    def scaled_eta(cls, cutoff: CutoffSpec, eta_scale: float) -> GridFunction:
        if not 0.0 < eta_scale <= 1.0:
            raise InvalidArgumentError(f"eta_scale must lie in (0, 1], got {eta_scale}")
        return cutoff.eta if eta_scale == 1.0 else cutoff.scaled(eta_scale)

    @classmethod
    def build(
        cls,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        eta_scale: float = 1.0,
        omega_override: Optional[IntervalSet] = None,
        epsilon_override: Optional[float] = None,
        with_dn: bool = True,
        tol: float = POSITIVITY_RTOL,
        unit_stiffness: Optional[StiffnessMatrix] = None,
    ) -> CounterexampleReport:
        """
        Run the construction and collect its report.

        Args:
            cfg: domain, windows and box; the box must match the grid.
            params: exponent and normalization constant.
            grid: the discretization.
            eta_scale: factor t in (0, 1] applied to the cutoff.
            omega_override: replaces the automatic choice of omega; an empty set gives a degenerate run.
            epsilon_override: replaces the automatic choice of epsilon.
            with_dn: compare the DN data of Gamma = 1 and Gamma_2.
            tol: relative positivity tolerance.
            unit_stiffness: the Gamma = 1 matrix on grid, reused when given.

        Returns:
            CounterexampleReport: the conductivity, its provenance and the property flags.
        """
        if (grid.lo, grid.hi) != tuple(cfg.box):
            raise InvalidArgumentError(f"grid box ({grid.lo}, {grid.hi}) does not match the configured box {cfg.box}")
        omega, epsilon = cls.choose_geometry(cfg, omega_override, epsilon_override)
        AppLogger.log_info(f"{cls.mode.value}: omega={omega.as_lists()} epsilon={epsilon:.6g} on {grid.describe()}")
        solve_set = IntervalArithmetic.dilate(cfg.omega_dom, cls.solve_dilation * epsilon)
        cutoff = cls.cutoff(omega, epsilon, grid)
        eta = cls.scaled_eta(cutoff, eta_scale)

        unit = ConductivityField.unit(grid)
        if unit_stiffness is None:
            unit_stiffness = StiffnessAssembler.assemble_stiffness(grid, unit, params)
        m_tilde, max_principle = cls.solve_cutoff(unit_stiffness, solve_set, eta, tol)
        AppLogger.log_info(f"{cls.mode.value}: cutoff solved, min m~ = {max_principle.min_value:.3e}")

        rho = Mollifier.build(epsilon, grid)
        mollified = Mollifier.mollify(m_tilde, rho)
        rescaled, scaling = cls.rescale(mollified, m_tilde, epsilon, rho)
        deviation = cls.harmonic_projection(unit_stiffness, cfg.omega_dom, rescaled)

        gamma2 = ConductivityField.from_deviation(deviation)
        bessel_norm = FourierOperators.bessel_diagnostic_norm(deviation, params.s)
        flags = cls.property_flags(deviation, eta, bessel_norm, cfg, omega, epsilon, tol)
        status = cls.status(eta, flags)
        if status == ReportStatus.INVALID:
            AppLogger.log_warn(f"{cls.mode.value}: property checks failed: {flags.failed()}")

        dn_invariance = None
        if with_dn:
            reference = DNBuilder.dn_matrix(unit, cfg, params, grid, stiffness=unit_stiffness)
            constructed = DNBuilder.dn_matrix(gamma2, cfg, params, grid)
            dn_invariance = DNComparator.compare_dn(reference, constructed)
            AppLogger.log_info(f"{cls.mode.value}: DN relative difference {dn_invariance.relative_frobenius:.3e}")
        identity = IdentityVerifier.verify_identity(unit, gamma2, cfg.omega_dom, params, grid)

        return CounterexampleReport(
            mode=cls.mode,
            status=status,
            gamma2=gamma2,
            m_tilde=m_tilde,
            cutoff=cutoff,
            epsilon=epsilon,
            omega=omega,
            solve_set=solve_set,
            eta_scale=eta_scale,
            property_flags=flags,
            max_principle=max_principle,
            sup_norm=deviation.sup_norm(),
            bessel_norm=bessel_norm,
            dn_invariance=dn_invariance,
            identity_residual=identity.relative,
            scaling=scaling,
        )
