from typing import Optional

import numpy as np
from numpy.typing import NDArray
from xxhash import xxh64

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField, StiffnessMatrix
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.dn.dataclass.main import DNMatrix, DNMetadata
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import IntervalSet, WindowConfig
from fraccond_core.services.solver.exterior_value_solver import ExteriorValueSolver
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.exceptions import GridTooCoarseError, PreconditionViolationError


class DNBuilder:
    @classmethod
    def window_basis(cls, grid: UniformGrid, window: IntervalSet, interior: NDArray[np.int64], name: str) -> NDArray[np.int64]:
        nodes = DofClassifier.window_hats(grid, window)
        nodes = np.setdiff1d(nodes, interior)
        if nodes.size == 0:
            longest = max(hi - lo for lo, hi in window.intervals)
            required = longest / 3.0
            raise GridTooCoarseError(
                f"no hat function fits inside {name}={window.as_lists()} at h={grid.h}; need h <= {required}",
                required_spacing=required,
            )
        return nodes

    @classmethod
    def _metadata(
        cls,
        cond: ConductivityField,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        sources: NDArray[np.int64],
        tests: NDArray[np.int64],
    ) -> DNMetadata:
        digest = xxh64()
        digest.update(np.ascontiguousarray(cond.gamma_sqrt.values).tobytes())
        digest.update(grid.describe().encode())
        digest.update(repr(params.s).encode())
        digest.update(sources.tobytes())
        digest.update(tests.tobytes())
        return DNMetadata(
            gamma_hash=digest.hexdigest(),
            grid=grid,
            s=params.s,
            w1=cfg.w1.as_lists(),
            w2=cfg.w2.as_lists(),
        )

    @classmethod
    def dn_matrix(
        cls,
        cond: ConductivityField,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        stiffness: Optional[StiffnessMatrix] = None,
    ) -> DNMatrix:
        """
        Partial DN matrix of cond: one exterior-value solve per source hat in W1, paired with the test hats in W2.

        Args:
            cond: window-clean conductivity on grid.
            cfg: domain and windows.
            params: exponent and normalization constant.
            grid: the discretization.
            stiffness: a matrix already assembled for cond, reused when given.

        Returns:
            DNMatrix: entries (A u_i)_j for test nodes j and source nodes i.
        """
        grid.ensure_same(cond.grid)
        if not cond.is_window_clean(cfg.windows):
            raise PreconditionViolationError("conductivity is not identically one on the measurement windows")
        interior, _ = DofClassifier.classify_dofs(grid, cfg.omega_dom)
        sources = cls.window_basis(grid, cfg.w1, interior, "w1")
        tests = cls.window_basis(grid, cfg.w2, interior, "w2")
        if stiffness is None:
            stiffness = StiffnessAssembler.assemble_stiffness(grid, cond, params)
        else:
            grid.ensure_same(stiffness.grid)
        solver = ExteriorValueSolver.for_stiffness(stiffness, interior)
        data = np.zeros((grid.n_nodes, sources.size))
        data[sources, np.arange(sources.size)] = 1.0
        solutions = solver.solve(data)
        entries = (stiffness.matrix[tests, :] @ solutions).astype(np.float64)
        AppLogger.log_debug(f"DN matrix {tests.size} x {sources.size} on {grid.describe()}")
        return DNMatrix(
            source_nodes=sources,
            test_nodes=tests,
            entries=entries,
            metadata=cls._metadata(cond, cfg, params, grid, sources, tests),
        )
