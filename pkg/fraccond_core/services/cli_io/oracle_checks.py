from typing import Callable, List, Optional

import numpy as np
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.cli_io.dataclass.main import OracleCheckRow, OracleCheckTable, TolerancesSection
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.fracops.fourier_operators import FourierOperators
from fraccond_core.services.fracops.mollifier import Mollifier
from fraccond_core.services.fracops.normalization import NormalizationConstant
from fraccond_core.services.fracops.singular_quadrature import SingularQuadrature
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.services.solver.exterior_value_solver import ExteriorValueSolver
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.enums import CheckOutcome

NORMALIZATION_EXPONENTS = (0.1, 0.25, 0.4)
DEFAULT_ORACLE_EXPONENT = 0.25


def smooth_bump(radius: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    """exp(1 - 1/(1 - (x/radius)^2)) inside (-radius, radius), zero outside; peak value 1."""

    def profile(x: NDArray[np.float64]) -> NDArray[np.float64]:
        scaled = np.asarray(x, dtype=np.float64) / radius
        inside = np.abs(scaled) < 1.0
        values = np.zeros_like(scaled)
        values[inside] = np.exp(1.0 - 1.0 / (1.0 - scaled[inside] ** 2))
        return values

    return profile


class OracleChecks:
    """
    Cross-validation of the operator realizations against independent oracles.
    """

    @classmethod
    def _row(cls, name: str, value: float, threshold: float, detail: str = "") -> OracleCheckRow:
        outcome = CheckOutcome.PASS if np.isfinite(value) and value <= threshold else CheckOutcome.FAIL
        AppLogger.log_info(f"oracle {name}: {value:.3e} (threshold {threshold:.1e}) {outcome.value}")
        return OracleCheckRow(name=name, value=float(value), threshold=threshold, outcome=outcome, detail=detail)

    @classmethod
    def normalization(cls, s: float, tol: float) -> OracleCheckRow:
        closed = NormalizationConstant.closed_form(1, s)
        reference = NormalizationConstant.by_quadrature(s)
        return cls._row(f"normalization_s{s:g}", abs(closed - reference) / reference, tol, f"C={closed:.12g}")

    @classmethod
    def parseval(cls, params: FracParams, tol: float) -> OracleCheckRow:
        """Galerkin energy of the P1 interpolant of a bump against the Fourier energy."""
        grid = UniformGrid(lo=-4.0, hi=4.0, n_nodes=513)
        u = GridFunction.from_callable(grid, smooth_bump(1.0))
        stiffness = StiffnessAssembler.assemble_stiffness(grid, ConductivityField.unit(grid), params)
        galerkin = StiffnessAssembler.energy(stiffness, u, u)
        spectral = FourierOperators.fourier_energy(u, params.s)
        return cls._row("parseval_energy", abs(galerkin - spectral) / abs(spectral), tol)

    @classmethod
    def laplacian_agreement(cls, params: FracParams, tol: float) -> OracleCheckRow:
        grid = UniformGrid(lo=-8.0, hi=8.0, n_nodes=2049)
        u = GridFunction.from_callable(grid, smooth_bump(2.0))
        spectral = FourierOperators.frac_laplacian_fourier(u, params.s)
        quadrature = SingularQuadrature.frac_laplacian_on_nodes(u, params.s)
        interior = ~grid.margin_mask()
        difference = np.max(np.abs(quadrature.values[interior] - spectral.values[interior]))
        return cls._row("laplacian_agreement", float(difference / np.max(np.abs(spectral.values[interior]))), tol)

    @classmethod
    def mollifier_commutation(cls, params: FracParams, tol: float) -> OracleCheckRow:
        """(-Delta)^{s/2}(rho * u) against rho * (-Delta)^{s/2} u, away from the box edges."""
        grid = UniformGrid(lo=-4.0, hi=4.0, n_nodes=1025)
        u = GridFunction.from_callable(grid, smooth_bump(1.0))
        rho = Mollifier.build(0.25, grid)
        half = 0.5 * params.s
        outer = FourierOperators.frac_laplacian_fourier(Mollifier.mollify(u, rho), half, periodic=True)
        inner = Mollifier.mollify(FourierOperators.frac_laplacian_fourier(u, half, periodic=True), rho, enforce_support=False)
        nodes = grid.nodes
        away = (nodes > grid.lo + rho.epsilon + grid.h) & (nodes < grid.hi - rho.epsilon - grid.h)
        difference = float(np.max(np.abs(outer.values[away] - inner.values[away])))
        return cls._row("mollifier_commutation", difference / u.sup_norm(), tol)

    @classmethod
    def hat_energy_diagonal(cls, params: FracParams, tol: float) -> OracleCheckRow:
        grid = UniformGrid(lo=-4.0, hi=4.0, n_nodes=129)
        stiffness = StiffnessAssembler.assemble_stiffness(grid, ConductivityField.unit(grid), params)
        exact = FourierOperators.hat_energy(grid.h, params.s)
        diagonal = float(stiffness.matrix[grid.n_nodes // 2, grid.n_nodes // 2])
        return cls._row("hat_energy_diagonal", abs(diagonal - exact) / exact, tol, f"A_ii={diagonal:.12g}")

    @classmethod
    def small_system_solve(cls, params: FracParams, tol: float) -> OracleCheckRow:
        """Five interior unknowns: factorized solve against an explicit dense inverse."""
        grid = UniformGrid(lo=-8.0, hi=8.0, n_nodes=17)
        stiffness = StiffnessAssembler.assemble_stiffness(grid, ConductivityField.unit(grid), params)
        interior, exterior = DofClassifier.classify_dofs(grid, IntervalSet.of((-4.0, 4.0)))
        g = np.where(np.abs(grid.nodes) <= 5.0, 1.0, 0.0)
        g[interior] = 0.0
        solved = ExteriorValueSolver.for_stiffness(stiffness, interior).solve(g)
        matrix = stiffness.matrix
        brute = -np.linalg.inv(matrix[np.ix_(interior, interior)]) @ (matrix[np.ix_(interior, exterior)] @ g[exterior])
        difference = float(np.max(np.abs(solved[interior] - brute)) / np.max(np.abs(brute)))
        return cls._row("small_system_solve", difference, tol, f"interior={interior.size}")

    @classmethod
    def run_oracle_checks(cls, s: Optional[float] = None, tolerances: Optional[TolerancesSection] = None) -> OracleCheckTable:
        """Run every oracle in a fixed order."""
        tolerances = tolerances or TolerancesSection()
        params = FracParams.from_exponent(DEFAULT_ORACLE_EXPONENT if s is None else s)
        rows: List[OracleCheckRow] = [cls.normalization(exponent, tolerances.normalization) for exponent in NORMALIZATION_EXPONENTS]
        rows.append(cls.parseval(params, tolerances.parseval))
        rows.append(cls.laplacian_agreement(params, tolerances.laplacian))
        rows.append(cls.mollifier_commutation(params, tolerances.commutation))
        rows.append(cls.hat_energy_diagonal(params, tolerances.hat_energy))
        rows.append(cls.small_system_solve(params, tolerances.small_solve))
        return OracleCheckTable(rows=rows)
