import math
import threading

import numpy as np
from cachetools import LRUCache
from scipy import integrate, special

from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import NORMALIZATION_QUADRATURE_RTOL
from fraccond_core.utils.exceptions import InvalidArgumentError, NumericalBreakdownError


class NormalizationConstant:
    """
    The constant C_{n,s} that makes the singular integral agree with the Fourier multiplier |xi|^{2s}.
    """

    _quadrature_cache: LRUCache = LRUCache(maxsize=64)
    _cache_lock = threading.Lock()

    @classmethod
    def _validate(cls, n: int, s: float) -> None:
        if n < 1:
            raise InvalidArgumentError(f"dimension must be at least 1, got {n}")
        if not 0.0 < s < 1.0:
            raise InvalidArgumentError(f"exponent must lie in (0, 1), got {s}")

    @classmethod
    def closed_form(cls, n: int, s: float) -> float:
        """
        C_{n,s} = 4^s Gamma(n/2 + s) / (pi^{n/2} |Gamma(-s)|).
        """
        cls._validate(n, s)
        return float(4.0**s * special.gamma(n / 2.0 + s) / (math.pi ** (n / 2.0) * abs(special.gamma(-s))))

    @classmethod
    def defining_integral(cls, s: float) -> float:
        """
        Adaptive quadrature of the 1D integral of (1 - cos x) / |x|^{1+2s} over the real line.

        The range is split at 1: the inner piece uses 1 - cos x = 2 sin^2(x/2), the outer piece
        separates the non-oscillatory part (exact) from the cosine part (QAWF rule).
        """
        cls._validate(1, s)
        with cls._cache_lock:
            if s in cls._quadrature_cache:
                return cls._quadrature_cache[s]
        inner, _ = integrate.quad(
            lambda x: 2.0 * np.sin(0.5 * x) ** 2 * x ** (-1.0 - 2.0 * s),
            0.0,
            1.0,
            epsabs=1e-14,
            epsrel=1e-12,
            limit=200,
        )
        oscillatory, _ = integrate.quad(lambda x: x ** (-1.0 - 2.0 * s), 1.0, np.inf, weight="cos", wvar=1.0)
        value = 2.0 * (inner + 1.0 / (2.0 * s) - oscillatory)
        with cls._cache_lock:
            cls._quadrature_cache[s] = value
        return value

    @classmethod
    def by_quadrature(cls, s: float) -> float:
        return 1.0 / cls.defining_integral(s)

    @classmethod
    def normalization_constant(cls, n: int, s: float, cross_check: bool = True) -> float:
        """
        Return C_{n,s} from the Gamma-function expression.

        For n = 1 the value is cross-checked against quadrature of the defining integral.
        """
        value = cls.closed_form(n, s)
        if cross_check and n == 1:
            reference = cls.by_quadrature(s)
            relative = abs(value - reference) / reference
            if relative > NORMALIZATION_QUADRATURE_RTOL:
                raise NumericalBreakdownError(
                    f"C_(1,{s}) closed form {value} disagrees with quadrature {reference} (rel {relative:.2e})"
                )
            AppLogger.log_debug(f"C_(1,{s}) = {value} (quadrature rel diff {relative:.2e})")
        return value
