import numpy as np

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.counterexample.dataclass.main import IdentityResidualReport
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.fracops.fourier_operators import FourierOperators
from fraccond_core.services.geometry.dataclass.main import IntervalSet


class IdentityVerifier:
    @classmethod
    def potential(cls, gamma1: ConductivityField, params: FracParams) -> GridFunction:
        """q = (-Delta)^s m_1 / Gamma_1 on every node."""
        laplacian = FourierOperators.frac_laplacian_fourier(gamma1.deviation, params.s)
        return laplacian.with_values(laplacian.values / gamma1.gamma_sqrt.values)

    @classmethod
    def verify_identity(
        cls,
        gamma1: ConductivityField,
        gamma2: ConductivityField,
        omega_dom: IntervalSet,
        params: FracParams,
        grid: UniformGrid,
    ) -> IdentityResidualReport:
        """
        Residual of (-Delta)^s m_2 - q m_2 = q on the interior nodes of the domain, Fourier realization.

        The relative value divides by the sup norm of (-Delta)^s m_2 over all nodes and is zero
        when that norm vanishes.
        """
        grid.ensure_same(gamma1.grid)
        grid.ensure_same(gamma2.grid)
        q = cls.potential(gamma1, params).values
        m2 = gamma2.deviation.values
        laplacian = FourierOperators.frac_laplacian_fourier(gamma2.deviation, params.s).values
        interior, _ = DofClassifier.classify_dofs(grid, omega_dom)
        residual = (laplacian - q * m2 - q)[interior]
        residual_sup = float(np.max(np.abs(residual))) if residual.size else 0.0
        reference = float(np.max(np.abs(laplacian)))
        return IdentityResidualReport(
            residual_sup=residual_sup,
            reference_sup=reference,
            relative=residual_sup / reference if reference > 0.0 else 0.0,
            node_count=int(interior.size),
        )
