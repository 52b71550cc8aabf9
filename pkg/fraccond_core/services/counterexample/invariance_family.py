from typing import Optional

import numpy as np
from scipy import linalg

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField, StiffnessMatrix
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.assembly.mass_assembler import MassAssembler
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.counterexample.dataclass.main import FamilyFlags, FamilyResult
from fraccond_core.services.counterexample.identity_verifier import IdentityVerifier
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import WindowConfig
from fraccond_core.services.solver.exterior_value_solver import ExteriorValueSolver
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import FAMILY_LOWER_BOUND
from fraccond_core.utils.exceptions import AssemblyError, FamilyInfeasibleError, PreconditionViolationError


class InvarianceFamily:
    """
    Members Gamma_2 = S m_0 = m_1 - m + 1 of the family of conductivities with the same partial DN data as Gamma_1.

    m solves (-Delta)^s m - q m = 0 in the domain with m = m_0 outside, q = (-Delta)^s m_1 / Gamma_1.
    """

    @classmethod
    def _check_exterior_datum(cls, m0: GridFunction, cfg: WindowConfig, interior: np.ndarray) -> None:
        values = m0.values
        nodes = m0.grid.nodes
        if np.any(values[cfg.windows.contains_points(nodes)] != 0.0):
            raise PreconditionViolationError("exterior datum m0 must vanish on the window nodes")
        if np.any(values[interior] != 0.0):
            raise PreconditionViolationError("exterior datum m0 must vanish on the interior nodes of the domain")

    @classmethod
    def family_generate(
        cls,
        gamma1: ConductivityField,
        m0: GridFunction,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        alpha: float = FAMILY_LOWER_BOUND,
        unit_stiffness: Optional[StiffnessMatrix] = None,
    ) -> FamilyResult:
        """
        Generate the family member of the exterior datum m0.

        Args:
            gamma1: reference conductivity, window-clean.
            m0: exterior datum, zero on window nodes and on interior nodes of the domain.
            cfg: domain and windows.
            params: exponent and normalization constant.
            grid: the discretization.
            alpha: lower bound Gamma_2 must respect to be accepted.
            unit_stiffness: the Gamma = 1 matrix on grid, reused when given.

        Returns:
            FamilyResult: Gamma_2, the solution m and the membership flags.
        """
        grid.ensure_same(gamma1.grid)
        grid.ensure_same(m0.grid)
        interior, _ = DofClassifier.classify_dofs(grid, cfg.omega_dom)
        cls._check_exterior_datum(m0, cfg, interior)

        q = IdentityVerifier.potential(gamma1, params)
        in_domain = cfg.omega_dom.contains_points(grid.nodes)
        q_domain = q.with_values(np.where(in_domain, q.values, 0.0))
        if unit_stiffness is None:
            unit_stiffness = StiffnessAssembler.assemble_stiffness(grid, ConductivityField.unit(grid), params)
        system = unit_stiffness.minus(MassAssembler.assemble_potential_mass(grid, q_domain))

        try:
            solver = ExteriorValueSolver.for_stiffness(system, interior)
        except AssemblyError:
            smallest = float(linalg.eigvalsh(system.matrix[np.ix_(interior, interior)])[0])
            raise FamilyInfeasibleError(
                f"(A - M_q) is indefinite on the domain (smallest eigenvalue {smallest:.3e})", min_eigenvalue=smallest
            )
        solution = m0.with_values(solver.solve(m0.values))

        gamma2_values = gamma1.deviation.values - solution.values + 1.0
        gamma2_sqrt = m0.with_values(gamma2_values)
        flags = FamilyFlags(
            positivity=bool(float(np.min(gamma2_values)) >= alpha),
            window_clean=bool(np.all(gamma2_values[cfg.windows.contains_points(grid.nodes)] == 1.0)),
            bounded=bool(np.all(np.isfinite(gamma2_values))),
        )
        conductivity = None
        if flags.positivity:
            conductivity = ConductivityField(gamma_sqrt=gamma2_sqrt, alpha=alpha)
        else:
            AppLogger.log_warn(f"family candidate rejected: min Gamma_2 = {float(np.min(gamma2_values)):.3e} < {alpha}")
        return FamilyResult(
            gamma2_sqrt=gamma2_sqrt,
            solution=solution,
            alpha=alpha,
            flags=flags,
            conductivity=conductivity,
        )
