import threading
from typing import Tuple

import numpy as np
from cachetools import LRUCache
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.fracops.normalization import NormalizationConstant
from fraccond_core.utils.constants.constants import NEAR_FIELD_LEGENDRE_ORDER
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class SingularQuadrature:
    """
    Direct evaluation of (-Delta)^s u(x) = -C_{1,s} * integral_0^inf D(y) y^{-1-2s} dy with
    D(y) = u(x + y) + u(x - y) - 2 u(x).

    D / y^2 is interpolated by piecewise quadratics on panels of two cells and integrated against
    y^{1-2s} with product weights; beyond the last panel u equals its edge values and the tail is exact.
    """

    _panel_cache: LRUCache = LRUCache(maxsize=32)
    _cache_lock = threading.Lock()

    @staticmethod
    def _lagrange(tau: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.stack([0.5 * (tau - 1.0) * (tau - 2.0), -tau * (tau - 2.0), 0.5 * tau * (tau - 1.0)])

    @classmethod
    def panel_weights(cls, panels: int, beta: float) -> NDArray[np.float64]:
        """
        Weights W[p, a] of the integral of l_a(tau) (2p + tau)^beta over tau in [0, 2], in units of h.

        The first panel uses exact moments of tau^beta; the others are smooth and use Gauss-Legendre.
        """
        key = (panels, beta)
        with cls._cache_lock:
            if key in cls._panel_cache:
                return cls._panel_cache[key]
        weights = np.empty((panels, 3))
        moments = np.array([2.0 ** (j + beta + 1.0) / (j + beta + 1.0) for j in range(3)])
        # l0 = (t^2 - 3t + 2)/2, l1 = -t^2 + 2t, l2 = (t^2 - t)/2
        weights[0] = [
            0.5 * (moments[2] - 3.0 * moments[1] + 2.0 * moments[0]),
            -moments[2] + 2.0 * moments[1],
            0.5 * (moments[2] - moments[1]),
        ]
        if panels > 1:
            points, gauss = np.polynomial.legendre.leggauss(NEAR_FIELD_LEGENDRE_ORDER)
            tau = points + 1.0
            basis = cls._lagrange(tau)
            offsets = 2.0 * np.arange(1, panels, dtype=np.float64)
            kernel = (offsets[:, None] + tau[None, :]) ** beta
            weights[1:] = (kernel * gauss[None, :]) @ basis.T
        with cls._cache_lock:
            cls._panel_cache[key] = weights
        return weights

    @classmethod
    def _extended(cls, values: NDArray[np.float64], indices: NDArray[np.int64]) -> NDArray[np.float64]:
        clipped = np.clip(indices, 0, values.size - 1)
        return values[clipped]

    @classmethod
    def _edge_values(cls, u: GridFunction) -> Tuple[float, float]:
        return float(u.values[0]), float(u.values[-1])

    @classmethod
    def frac_laplacian_quadrature(cls, u: GridFunction, x: float, s: float) -> float:
        """
        Evaluate (-Delta)^s u at the grid node x.

        Args:
            u: nodal values; outside the box u continues with its edge values.
            x: a node outside the margin band.
            s: exponent in (0, 1).

        Returns:
            float: the quadrature value.
        """
        if not 0.0 < s < 1.0:
            raise InvalidArgumentError(f"exponent must lie in (0, 1), got {s}")
        grid = u.grid
        index = int(round((x - grid.lo) / grid.h))
        if abs(grid.lo + index * grid.h - x) > 1e-9 * grid.h or not 0 <= index < grid.n_nodes:
            raise InvalidArgumentError(f"x={x} is not a node of {grid.describe()}")
        if grid.margin_mask()[index]:
            raise PreconditionViolationError(f"x={x} lies in the margin band", x=x)
        values = u.values
        center = values[index]
        reach = max(index, grid.n_nodes - 1 - index) + 1
        panels = (reach + 1) // 2
        steps = np.arange(1, 2 * panels + 1)
        second_difference = (
            cls._extended(values, index + steps) + cls._extended(values, index - steps) - 2.0 * center
        )
        ratio = np.empty(2 * panels + 1)
        ratio[1:] = second_difference / (steps * grid.h) ** 2
        ratio[0] = ratio[1]
        beta = 1.0 - 2.0 * s
        weights = cls.panel_weights(panels, beta)
        samples = np.stack([ratio[0:-1:2], ratio[1::2], ratio[2::2]], axis=1)
        near = grid.h ** (1.0 + beta) * float(np.sum(weights * samples))
        left, right = cls._edge_values(u)
        radius = 2 * panels * grid.h
        tail = (left + right - 2.0 * center) * radius ** (-2.0 * s) / (2.0 * s)
        return -NormalizationConstant.closed_form(1, s) * (near + tail)

    @classmethod
    def frac_laplacian_on_nodes(cls, u: GridFunction, s: float) -> GridFunction:
        """Quadrature value on every node outside the margin band, zero on the band."""
        grid = u.grid
        nodes = grid.nodes
        band = grid.margin_mask()
        result = np.zeros(grid.n_nodes)
        for index in np.flatnonzero(~band):
            result[index] = cls.frac_laplacian_quadrature(u, float(nodes[index]), s)
        return u.with_values(result)
