import threading
from typing import Tuple

import numpy as np
from cachetools import LRUCache
from numpy.typing import NDArray
from scipy import special

Rule = Tuple[NDArray[np.float64], NDArray[np.float64]]


class QuadratureRules:
    """
    Cached one-dimensional rules on [0, 1] and the singular element-pair tensors built from them.
    """

    _cache: LRUCache = LRUCache(maxsize=256)
    _lock = threading.Lock()

    @classmethod
    def _cached(cls, key: Tuple, builder) -> NDArray[np.float64] | Rule:
        with cls._lock:
            if key in cls._cache:
                return cls._cache[key]
        value = builder()
        with cls._lock:
            cls._cache[key] = value
        return value

    @classmethod
    def gauss_legendre(cls, order: int) -> Rule:
        """Gauss-Legendre rule for the integral over [0, 1]."""

        def build() -> Rule:
            points, weights = special.roots_legendre(order)
            return 0.5 * (points + 1.0), 0.5 * weights

        return cls._cached(("legendre", order), build)

    @classmethod
    def gauss_jacobi(cls, order: int, power: float) -> Rule:
        """Rule for the integral of f(t) t^power over [0, 1], power > -1."""

        def build() -> Rule:
            points, weights = special.roots_jacobi(order, 0.0, power)
            return 0.5 * (points + 1.0), weights * 2.0 ** (-power - 1.0)

        return cls._cached(("jacobi", order, power), build)

    @classmethod
    def same_element_tensor(cls, s: float, order: int) -> NDArray[np.float64]:
        """
        S[a, b] = integral over [0,1]^2 of psi_a(t) psi_b(r) |t - r|^{1-2s}, psi_0 = 1 - t, psi_1 = t.

        Duffy split of the triangle r < t: t = xi, r = xi (1 - eta), with t - r = xi eta.
        """

        def build() -> NDArray[np.float64]:
            power = 1.0 - 2.0 * s
            eta, w_eta = cls.gauss_jacobi(order, power)
            xi, w_xi = cls.gauss_jacobi(order, power + 1.0)
            outer = xi[:, None]
            inner = (xi[:, None] * (1.0 - eta[None, :]))
            basis_outer = np.stack([1.0 - outer, outer])
            basis_inner = np.stack([1.0 - inner, inner])
            weights = w_xi[:, None] * w_eta[None, :]
            lower = np.einsum("aij,bij,ij->ab", np.broadcast_to(basis_outer, (2,) + inner.shape), basis_inner, weights)
            return lower + lower.T

        return cls._cached(("same", s, order), build)

    @classmethod
    def adjacent_element_tensor(cls, s: float, jacobi_order: int, legendre_order: int) -> NDArray[np.float64]:
        """
        T[alpha, beta, d, e] for two elements sharing a node.

        With a = (x_mid - x)/h and b = (y - x_mid)/h the difference u(x) - u(y) has the nodal
        coefficients c = (a, b - a, -b) on the three nodes, Gamma(x) uses the basis (a, 1 - a) and
        Gamma(y) uses (1 - b, b). T integrates phi_alpha(a) phi_beta(b) c_d c_e (a + b)^{-1-2s}
        over the unit square; both triangles of the Duffy split carry the weight xi^{2-2s}.
        """

        def build() -> NDArray[np.float64]:
            xi, w_xi = cls.gauss_jacobi(jacobi_order, 2.0 - 2.0 * s)
            eta, w_eta = cls.gauss_legendre(legendre_order)
            radial = (1.0 + eta) ** (-1.0 - 2.0 * s)
            weights = w_xi[:, None] * (w_eta * radial)[None, :]
            tensor = np.zeros((2, 2, 3, 3))
            for a_is_radius in (True, False):
                along = np.broadcast_to(xi[:, None], weights.shape)
                across = xi[:, None] * eta[None, :]
                a, b = (along, across) if a_is_radius else (across, along)
                # c / xi, homogeneous of degree one in (a, b)
                scaled = np.stack([a, b - a, -b]) / xi[:, None]
                gamma_x = np.stack([a, 1.0 - a])
                gamma_y = np.stack([1.0 - b, b])
                tensor += np.einsum("aij,bij,dij,eij,ij->abde", gamma_x, gamma_y, scaled, scaled, weights)
            return tensor

        return cls._cached(("adjacent", s, jacobi_order, legendre_order), build)
