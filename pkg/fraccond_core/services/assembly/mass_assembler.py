import numpy as np
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.quadrature_rules import QuadratureRules


class MassAssembler:
    @classmethod
    def assemble_potential_mass(cls, grid: UniformGrid, q: GridFunction) -> NDArray[np.float64]:
        """
        Weighted P1 mass matrix M_ij = integral of q phi_i phi_j, q interpolated linearly.

        Two-point Gauss per element integrates the cubic integrand exactly.
        """
        grid.ensure_same(q.grid)
        t, w = QuadratureRules.gauss_legendre(2)
        h = grid.h
        basis = np.stack([1.0 - t, t], axis=-1)
        q_points = q.values[:-1, None] * basis[None, :, 0] + q.values[1:, None] * basis[None, :, 1]
        local = h * np.einsum("ki,i,ia,ib->kab", q_points, w, basis, basis)
        matrix = np.zeros((grid.n_nodes, grid.n_nodes))
        k = np.arange(grid.n_nodes - 1)
        for a in range(2):
            for b in range(2):
                matrix[k + a, k + b] += local[:, a, b]
        return 0.5 * (matrix + matrix.T)

