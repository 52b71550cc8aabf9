from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.assembly.dataclass.main import (
    ConductivityField,
    QuadratureMetadata,
    StiffnessMatrix,
)
from fraccond_core.services.assembly.quadrature_rules import QuadratureRules
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.config_manager import ConfigManager
from fraccond_core.utils.constants.constants import (
    DEFAULT_ASSEMBLY_WORKERS,
    DEFAULT_BLOCK_ENTRIES,
    MARGIN_ATOL,
)
from fraccond_core.utils.exceptions import (
    InvalidArgumentError,
    UnsupportedConfigurationError,
)

BlockResult = Tuple[int, int, NDArray[np.float64], NDArray[np.float64]]


class StiffnessAssembler:
    """
    Assembles A_ij = (C/2) * double integral of Gamma(x) Gamma(y) (phi_i(x) - phi_i(y)) (phi_j(x) - phi_j(y))
    |x - y|^{-1-2s} over the whole plane, for P1 hats on the box extended by zero.

    The plane splits into box x box and the exterior strips. Element pairs of the box are either
    identical, adjacent or far:

    * identical and adjacent pairs use the Duffy tensors of QuadratureRules with Gamma interpolated
      linearly inside the elements;
    * far pairs use tensor Gauss rules, processed in row blocks of elements;
    * the exterior strips reduce to 2 * tail * kappa(x) * Gamma(x) u(x) v(x) with
      kappa(x) = ((x - lo)^{-2s} + (hi - x)^{-2s}) / (2s).
    """

    def __init__(
        self,
        grid: UniformGrid,
        cond: ConductivityField,
        params: FracParams,
        quadrature: Optional[QuadratureMetadata] = None,
        workers: Optional[int] = None,
        block_entries: Optional[int] = None,
    ) -> None:
        grid.ensure_same(cond.grid)
        self.grid = grid
        self.cond = cond
        self.params = params
        self.quadrature = quadrature or QuadratureMetadata()
        self.workers = workers or int(ConfigManager.get_value("ASSEMBLY", "WORKERS", DEFAULT_ASSEMBLY_WORKERS))
        self.block_entries = block_entries or int(
            ConfigManager.get_value("ASSEMBLY", "BLOCK_ENTRIES", DEFAULT_BLOCK_ENTRIES)
        )
        self.n_elements = grid.n_nodes - 1
        self.gamma_nodes = cond.gamma_sqrt.values
        self.kernel_power = -1.0 - 2.0 * params.s
        self._check_tail()
        self._prepare_far_field()

    def _check_tail(self) -> None:
        band = self.grid.margin_mask()
        deviation = np.abs(self.gamma_nodes[band] - self.cond.tail_value)
        if deviation.size and float(np.max(deviation)) > MARGIN_ATOL * max(1.0, self.cond.tail_value):
            raise UnsupportedConfigurationError(
                f"Gamma differs from its tail value {self.cond.tail_value} on the margin band "
                f"(max deviation {float(np.max(deviation)):.3e}); the exterior integrals assume a constant tail"
            )

    def _prepare_far_field(self) -> None:
        h = self.grid.h
        t, w = QuadratureRules.gauss_legendre(self.quadrature.far_field_order)
        starts = self.grid.nodes[:-1]
        self.points = starts[:, None] + h * t[None, :]
        self.local_t = t
        gamma_points = np.interp(self.points, self.grid.nodes, self.gamma_nodes)
        self.basis = np.stack([1.0 - t, t], axis=-1)
        # weighted Gamma times basis, shape (elements, points, 2)
        self.weighted = (h * w[None, :] * gamma_points)[:, :, None] * self.basis[None, :, :]
        self.element_index = np.arange(self.n_elements)

    def _block_bounds(self) -> List[Tuple[int, int]]:
        points = self.quadrature.far_field_order
        per_row = max(1, self.n_elements * points * points)
        rows = max(1, self.block_entries // per_row)
        return [(start, min(start + rows, self.n_elements)) for start in range(0, self.n_elements, rows)]

    def _far_block(self, bounds: Tuple[int, int]) -> BlockResult:
        """
        Far-field contributions of the element rows [start, stop).

        Returns the cross term X[k, a, l, b] and the far potential F(x) on the row points.
        """
        start, stop = bounds
        radius = self.quadrature.near_field_radius
        rows = self.element_index[start:stop]
        near = np.abs(rows[:, None] - self.element_index[None, :]) <= radius
        separation = np.abs(self.points[start:stop, :, None, None] - self.points[None, None, :, :])
        separation = np.where(near[:, None, :, None], 1.0, separation)
        kernel = np.where(near[:, None, :, None], 0.0, separation**self.kernel_power)
        # T[k, i, l, b] = sum_j K(x_ki, y_lj) w_j h Gamma(y_lj) psi_b(t_j)
        transfer = np.einsum("kilj,ljb->kilb", kernel, self.weighted)
        potential = transfer.sum(axis=(2, 3))
        cross = np.einsum("kia,kilb->kalb", self.weighted[start:stop], transfer)
        return start, stop, cross, potential

    def _exterior_potential(self) -> NDArray[np.float64]:
        s = self.params.s
        x = self.points
        return ((x - self.grid.lo) ** (-2.0 * s) + (self.grid.hi - x) ** (-2.0 * s)) / (2.0 * s)

    def _local_potential(self, potential: NDArray[np.float64]) -> NDArray[np.float64]:
        """D[k, a, b] = sum_i w_i h Gamma psi_a psi_b (F_far + tail * kappa) on the regular rule."""
        tail = self.cond.tail_value
        s = self.params.s
        combined = potential + tail * self._exterior_potential()
        local = np.einsum("kia,ib,ki->kab", self.weighted, self.basis, combined)
        h = self.grid.h
        x = self.points
        # edge elements: the singular half of kappa moves to a Gauss-Jacobi rule
        t_jac, w_jac = QuadratureRules.gauss_jacobi(self.quadrature.edge_jacobi_order, -2.0 * s)
        for element, singular_at_left in ((0, True), (self.n_elements - 1, False)):
            regular_weighted = self.weighted[element]
            if singular_at_left:
                singular = (x[element] - self.grid.lo) ** (-2.0 * s) / (2.0 * s)
                t_edge = t_jac
            else:
                singular = (self.grid.hi - x[element]) ** (-2.0 * s) / (2.0 * s)
                t_edge = 1.0 - t_jac
            local[element] -= tail * np.einsum("ia,ib,i->ab", regular_weighted, self.basis, singular)
            start = self.grid.nodes[element]
            gamma_edge = np.interp(start + h * t_edge, self.grid.nodes, self.gamma_nodes)
            basis_edge = np.stack([1.0 - t_edge, t_edge], axis=-1)
            edge_weights = h ** (1.0 - 2.0 * s) * w_jac * gamma_edge / (2.0 * s)
            local[element] += tail * np.einsum("ia,ib,i->ab", basis_edge, basis_edge, edge_weights)
        return local

    def _add_near_field(self, matrix: NDArray[np.float64]) -> None:
        h = self.grid.h
        s = self.params.s
        c_ns = self.params.c_ns
        g = self.gamma_nodes
        scale = h ** (1.0 - 2.0 * s)
        same = QuadratureRules.same_element_tensor(s, self.quadrature.near_field_jacobi_order)
        pairs = np.stack([g[:-1], g[1:]], axis=1)
        energy = scale * np.einsum("ka,kb,ab->k", pairs, pairs, same)
        k = self.element_index
        matrix[k, k] += 0.5 * c_ns * energy
        matrix[k + 1, k + 1] += 0.5 * c_ns * energy
        matrix[k, k + 1] -= 0.5 * c_ns * energy
        matrix[k + 1, k] -= 0.5 * c_ns * energy
        if self.n_elements < 2:
            return
        adjacent = QuadratureRules.adjacent_element_tensor(
            s, self.quadrature.near_field_jacobi_order, self.quadrature.near_field_legendre_order
        )
        left = np.stack([g[:-2], g[1:-1]], axis=1)
        right = np.stack([g[1:-1], g[2:]], axis=1)
        contribution = c_ns * scale * np.einsum("ka,kb,abde->kde", left, right, adjacent)
        first = np.arange(self.n_elements - 1)
        for d in range(3):
            for e in range(3):
                matrix[first + d, first + e] += contribution[:, d, e]

    def assemble(self) -> NDArray[np.float64]:
        n = self.grid.n_nodes
        c_ns = self.params.c_ns
        matrix = np.zeros((n, n))
        blocks = self._block_bounds()
        AppLogger.log_debug(
            f"assembling {n} x {n} stiffness in {len(blocks)} far-field blocks with {self.workers} worker(s)"
        )
        if self.workers > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(self._far_block, blocks))
        else:
            results = [self._far_block(bounds) for bounds in blocks]
        potential = np.zeros(self.points.shape)
        for start, stop, cross, block_potential in results:
            potential[start:stop] = block_potential
            rows = stop - start
            for a in range(2):
                for b in range(2):
                    matrix[start + a : start + a + rows, b : b + self.n_elements] -= c_ns * cross[:, a, :, b]
        local = self._local_potential(potential)
        k = self.element_index
        for a in range(2):
            for b in range(2):
                matrix[k + a, k + b] += c_ns * local[:, a, b]
        self._add_near_field(matrix)
        return 0.5 * (matrix + matrix.T)

    @classmethod
    def assemble_stiffness(
        cls,
        grid: UniformGrid,
        cond: ConductivityField,
        params: FracParams,
        quadrature: Optional[QuadratureMetadata] = None,
        workers: Optional[int] = None,
    ) -> StiffnessMatrix:
        """
        Dense stiffness matrix of B_gamma over every node hat.

        Args:
            grid: the node set; must be the grid of cond.
            cond: Gamma, constant equal to its tail value on the margin band.
            params: exponent and normalization constant.
            quadrature: rule orders, defaults from constants.
            workers: thread count for the far-field blocks; the result does not depend on it.

        Returns:
            StiffnessMatrix: symmetric matrix with its quadrature metadata.
        """
        assembler = cls(grid, cond, params, quadrature=quadrature, workers=workers)
        matrix = assembler.assemble()
        return StiffnessMatrix(
            matrix=matrix,
            grid=grid,
            params=params,
            quadrature=assembler.quadrature,
            conductivity_hash=cond.content_hash(),
        )

    @classmethod
    def energy(cls, stiffness: StiffnessMatrix, u: GridFunction, v: GridFunction) -> float:
        """B(u, v) = v^T A u."""
        for function in (u, v):
            if function.grid != stiffness.grid:
                raise InvalidArgumentError(
                    f"grid mismatch: {function.grid.describe()} vs stiffness on {stiffness.grid.describe()}"
                )
        return float(v.values @ (stiffness.matrix @ u.values))
