from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.assembly.dataclass.main import StiffnessMatrix
from fraccond_core.services.solver.dataclass.main import ExteriorValueProblem, MaxPrincipleReport
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import SOLVER_RESIDUAL_RTOL
from fraccond_core.utils.exceptions import AssemblyError, NumericalBreakdownError


class ExteriorValueSolver:
    """
    Cholesky solver for the interior block of one stiffness matrix.

    The factorization is computed once in the constructor and only read afterwards, so one
    instance serves every exterior datum of a DN sweep.
    """

    def __init__(self, matrix: NDArray[np.float64], interior: NDArray[np.int64]) -> None:
        self.matrix = matrix
        self.interior = np.asarray(interior, dtype=np.int64)
        mask = np.ones(matrix.shape[0], dtype=bool)
        mask[self.interior] = False
        self.exterior = np.flatnonzero(mask)
        self.factor = None
        if self.interior.size:
            self.factor = self._factorize(matrix[np.ix_(self.interior, self.interior)])

    @staticmethod
    def _factorize(block: NDArray[np.float64]):
        try:
            return linalg.cho_factor(block, lower=True, check_finite=True)
        except linalg.LinAlgError:
            eigenvalues = linalg.eigvalsh(block)
            smallest, largest = float(eigenvalues[0]), float(eigenvalues[-1])
            if smallest <= 0.0:
                raise AssemblyError(
                    f"interior block is not positive definite (smallest eigenvalue {smallest:.3e})",
                    min_eigenvalue=smallest,
                )
            raise NumericalBreakdownError(
                "Cholesky factorization of the interior block failed",
                condition_estimate=largest / smallest,
            )

    def solve(self, exterior_values: NDArray[np.float64], loads: Optional[NDArray[np.float64]] = None) -> NDArray[np.float64]:
        """
        Solve for one datum (shape (n,)) or several data stacked as columns (shape (n, m)).
        """
        solution = np.array(exterior_values, dtype=np.float64, copy=True)
        if self.factor is None:
            return solution
        interior, exterior = self.interior, self.exterior
        solution[interior] = 0.0
        rhs = -self.matrix[np.ix_(interior, exterior)] @ solution[exterior]
        if loads is not None:
            rhs = rhs + np.asarray(loads, dtype=np.float64)[interior]
        solution[interior] = linalg.cho_solve(self.factor, rhs)
        self._check_residual(solution, rhs)
        return solution

    def _check_residual(self, solution: NDArray[np.float64], rhs: NDArray[np.float64]) -> None:
        interior = self.interior
        residual = self.matrix[np.ix_(interior, interior)] @ solution[interior] - rhs
        bound = SOLVER_RESIDUAL_RTOL * np.linalg.norm(self.matrix, ord=np.inf) * float(np.max(np.abs(solution)))
        worst = float(np.max(np.abs(residual))) if residual.size else 0.0
        if worst > bound:
            raise NumericalBreakdownError(f"interior residual {worst:.3e} exceeds {bound:.3e}")

    @classmethod
    def solve_exterior_value(cls, problem: ExteriorValueProblem) -> GridFunction:
        """
        Solve B(u, v) = F(v) for all interior hats v with u = g on the exterior.

        Returns:
            GridFunction: u, equal to g on every exterior index.
        """
        solver = cls(problem.stiffness.matrix, problem.interior)
        loads = problem.loads.values if problem.loads is not None else None
        return problem.g.with_values(solver.solve(problem.g.values, loads))

    @classmethod
    def for_stiffness(cls, stiffness: StiffnessMatrix, interior: NDArray[np.int64]) -> "ExteriorValueSolver":
        return cls(stiffness.matrix, interior)

    @classmethod
    def check_max_principle(
        cls,
        u: GridFunction,
        g: GridFunction,
        tol: float,
        exterior: Optional[NDArray[np.int64]] = None,
    ) -> MaxPrincipleReport:
        """Pass iff min u >= -tol * max(1, ||g||_inf); reports where the minimum sits."""
        u.ensure_same_grid(g)
        threshold = -tol * max(1.0, g.sup_norm())
        index = int(np.argmin(u.values))
        minimum = float(u.values[index])
        data = g.values if exterior is None else g.values[np.asarray(exterior, dtype=np.int64)]
        report = MaxPrincipleReport(
            passed=minimum >= threshold,
            min_value=minimum,
            min_index=index,
            min_coordinate=float(u.grid.nodes[index]),
            threshold=threshold,
            tolerance=tol,
            exterior_nonnegative=bool(np.all(data >= 0.0)),
        )
        if not report.passed:
            AppLogger.log_warn(f"maximum principle check {report.describe()}")
        return report
