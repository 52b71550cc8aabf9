import math
import threading

import numpy as np
from cachetools import LRUCache
from numpy.typing import NDArray
from scipy import integrate

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.fracops.dataclass.main import MollifierSpec
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class Mollifier:
    """
    Standard bump rho(x) = exp(-1 / (1 - |x|^2)) / Z on |x| < 1 and its dilates rho_eps(x) = rho(x / eps) / eps.
    """

    _mass_cache: LRUCache = LRUCache(maxsize=4)
    _cache_lock = threading.Lock()

    @classmethod
    def unit_mass(cls) -> float:
        """Z, the integral of the unnormalized bump over (-1, 1)."""
        with cls._cache_lock:
            if "unit" in cls._mass_cache:
                return cls._mass_cache["unit"]
        value, _ = integrate.quad(lambda x: math.exp(-1.0 / (1.0 - x * x)), -1.0, 1.0, epsabs=1e-15, epsrel=1e-13)
        with cls._cache_lock:
            cls._mass_cache["unit"] = value
        return value

    @classmethod
    def profile(cls, x: NDArray[np.float64], epsilon: float = 1.0) -> NDArray[np.float64]:
        scaled = np.asarray(x, dtype=np.float64) / epsilon
        inside = np.abs(scaled) < 1.0
        values = np.zeros_like(scaled)
        values[inside] = np.exp(-1.0 / (1.0 - scaled[inside] ** 2))
        return values / (cls.unit_mass() * epsilon)

    @classmethod
    def build(cls, epsilon: float, grid: UniformGrid) -> MollifierSpec:
        """
        Tabulate rho_eps on the grid offsets.

        Discrete weights are rho_eps(k h) h renormalized to sum one; when eps < h only the
        central weight survives and mollification reduces to the identity.
        """
        if not epsilon > 0:
            raise InvalidArgumentError(f"mollifier radius must be positive, got {epsilon}")
        half_width = max(1, math.ceil(epsilon / grid.h))
        offsets = grid.h * np.arange(-half_width, half_width + 1, dtype=np.float64)
        weights = cls.profile(offsets, epsilon) * grid.h
        weights = 0.5 * (weights + weights[::-1])
        total = float(np.sum(weights))
        if total <= 0.0:
            weights = np.zeros_like(weights)
            weights[half_width] = 1.0
        else:
            weights = weights / total
        unit_mass = cls.unit_mass()
        return MollifierSpec(
            epsilon=epsilon,
            h=grid.h,
            unit_mass=unit_mass,
            sup_norm=math.exp(-1.0) / unit_mass,
            weights=weights,
        )

    @classmethod
    def mollify(cls, u: GridFunction, rho: MollifierSpec, enforce_support: bool = True) -> GridFunction:
        """
        Discrete convolution rho_eps * u.

        With enforce_support the eps-neighbourhood of supp u must stay clear of the margin band,
        so the result vanishes there and no mass is lost at the box edges.
        """
        grid = u.grid
        if abs(rho.h - grid.h) > 1e-12 * grid.h:
            raise InvalidArgumentError(f"mollifier tabulated for h={rho.h}, grid has h={grid.h}")
        if rho.weights.size > grid.n_nodes:
            raise InvalidArgumentError("mollifier stencil is wider than the grid")
        if enforce_support:
            support = np.flatnonzero(u.values)
            if support.size:
                nodes = grid.nodes
                reach_lo = nodes[support[0]] - rho.epsilon
                reach_hi = nodes[support[-1]] + rho.epsilon
                if reach_lo <= grid.lo + grid.margin_band or reach_hi >= grid.hi - grid.margin_band:
                    raise PreconditionViolationError(
                        f"eps-neighbourhood [{reach_lo}, {reach_hi}] of the support reaches the margin band",
                        reach=(reach_lo, reach_hi),
                    )
        return u.with_values(np.convolve(u.values, rho.weights, mode="same"))
