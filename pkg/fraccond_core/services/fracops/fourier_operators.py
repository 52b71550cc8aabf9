import math
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import special

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.fracops.normalization import NormalizationConstant
from fraccond_core.utils.constants.constants import PERIODIC_IMAGE_COUNT
from fraccond_core.utils.exceptions import InvalidArgumentError

Symbol = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class FourierOperators:
    """
    Fourier-multiplier realizations on the box, treated as one period of a periodic extension.

    The last node coincides with the first under periodization and is excluded from the
    transform, then restored from the first node.
    """

    @classmethod
    def frequencies(cls, grid: UniformGrid) -> NDArray[np.float64]:
        return 2.0 * math.pi * np.fft.rfftfreq(grid.n_nodes - 1, d=grid.h)

    @classmethod
    def apply_periodic_multiplier(cls, u: GridFunction, symbol: Symbol) -> GridFunction:
        period_values = u.values[:-1]
        spectrum = np.fft.rfft(period_values)
        transformed = np.fft.irfft(symbol(cls.frequencies(u.grid)) * spectrum, n=period_values.size)
        return u.with_values(np.append(transformed, transformed[0]))

    @classmethod
    def periodic_image_correction(cls, u: GridFunction, s: float, c_ns: float) -> NDArray[np.float64]:
        """
        Contribution of the periodic images of u that the periodized multiplier adds.

        Images with |m| <= PERIODIC_IMAGE_COUNT are summed on the grid; the remaining ones use
        the Hurwitz zeta function with the total mass of u.
        """
        grid = u.grid
        support = np.flatnonzero(u.values)
        correction = np.zeros(grid.n_nodes)
        if support.size == 0:
            return correction
        nodes = grid.nodes
        period = grid.length
        offsets = nodes[:, None] - nodes[None, support]
        weighted = u.values[support] * grid.h
        for image in range(1, PERIODIC_IMAGE_COUNT + 1):
            for sign in (1.0, -1.0):
                distance = np.abs(offsets - sign * image * period)
                correction += (distance ** (-1.0 - 2.0 * s)) @ weighted
        mass = float(np.sum(weighted))
        remainder = 2.0 * mass * period ** (-1.0 - 2.0 * s) * float(special.zeta(1.0 + 2.0 * s, PERIODIC_IMAGE_COUNT + 1))
        return c_ns * (correction + remainder)

    @classmethod
    def frac_laplacian_fourier(cls, u: GridFunction, s: float, periodic: bool = False) -> GridFunction:
        """
        Apply (-Delta)^s through the multiplier |xi|^{2s}.

        Args:
            u: samples of a function that vanishes on the margin band unless periodic is set.
            s: exponent in (0, 1).
            periodic: return the bare periodized operator instead of the whole-line one.

        Returns:
            GridFunction: the oracle values on every node.
        """
        if not 0.0 < s < 1.0:
            raise InvalidArgumentError(f"exponent must lie in (0, 1), got {s}")
        result = cls.apply_periodic_multiplier(u, lambda xi: np.abs(xi) ** (2.0 * s))
        if periodic:
            return result
        u.ensure_vanishes_on_margin("input of the Fourier fractional Laplacian")
        c_ns = NormalizationConstant.closed_form(1, s)
        return result.with_values(result.values + cls.periodic_image_correction(u, s, c_ns))

    @classmethod
    def bessel_potential_apply(cls, u: GridFunction, t: float, periodic: bool = False) -> GridFunction:
        """Apply the periodized Bessel multiplier (1 + |xi|^2)^{t/2}."""
        if not periodic:
            u.ensure_vanishes_on_margin("input of the Bessel potential")
        return cls.apply_periodic_multiplier(u, lambda xi: (1.0 + xi**2) ** (0.5 * t))

    @classmethod
    def bessel_diagnostic_norm(cls, m: GridFunction, s: float) -> float:
        """
        Discrete ||<D>^{2s} m||_{L^p} with p = 1/(2s), the one-dimensional H^{2s, n/2s} diagnostic.
        """
        exponent = 1.0 / (2.0 * s)
        potential = cls.bessel_potential_apply(m, 2.0 * s)
        return float(np.trapz(np.abs(potential.values) ** exponent, dx=m.grid.h) ** (1.0 / exponent))

    @classmethod
    def fourier_energy(cls, u: GridFunction, s: float) -> float:
        """Energy of u through the whole-line oracle: the integral of u (-Delta)^s u."""
        laplacian = cls.frac_laplacian_fourier(u, s)
        return float(np.trapz(u.values * laplacian.values, dx=u.grid.h))

    @classmethod
    def hat_energy(cls, h: float, s: float) -> float:
        """
        Closed-form ||(-Delta)^{s/2} phi||^2 for a P1 hat of half-width h.

        The Fourier transform of the hat is h * sinc^2(xi h / 2); the remaining integral of
        t^{2s-4} sin^4 t is evaluated by analytic continuation of the cosine Mellin transform.
        """
        mu = 2.0 * s - 3.0
        mellin = special.gamma(mu) * math.cos(0.5 * math.pi * mu)
        sine_power_integral = mellin * (4.0 ** (-mu) - 4.0 * 2.0 ** (-mu)) / 8.0
        return float(2.0 ** (1.0 + 2.0 * s) * h ** (1.0 - 2.0 * s) / math.pi * sine_power_integral)
