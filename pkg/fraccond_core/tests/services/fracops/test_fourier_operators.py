"""
Unit tests for the Fourier-multiplier oracles and the direct singular quadrature.
"""

import math

import numpy as np
import pytest

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.fracops.fourier_operators import FourierOperators
from fraccond_core.services.fracops.singular_quadrature import SingularQuadrature
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class TestFourierOperators:
    """Test cases for FourierOperators."""

    @pytest.mark.unit
    def test_bessel_potential_of_order_zero_is_identity(self, canonical_grid, bump_factory):
        u = bump_factory(canonical_grid, radius=1.5)
        result = FourierOperators.bessel_potential_apply(u, 0.0)
        assert np.max(np.abs(result.values - u.values)) < 1e-13

    @pytest.mark.unit
    def test_periodic_laplacian_of_constant_vanishes(self, coarse_grid):
        result = FourierOperators.frac_laplacian_fourier(GridFunction.constant(coarse_grid, 2.0), 0.25, periodic=True)
        assert np.max(np.abs(result.values)) < 1e-12

    @pytest.mark.unit
    def test_whole_line_operator_needs_vanishing_margin(self, coarse_grid):
        with pytest.raises(PreconditionViolationError):
            FourierOperators.frac_laplacian_fourier(GridFunction.constant(coarse_grid, 1.0), 0.25)

    @pytest.mark.unit
    def test_rejects_exponent_outside_unit_interval(self, coarse_grid):
        with pytest.raises(InvalidArgumentError):
            FourierOperators.frac_laplacian_fourier(GridFunction.zeros(coarse_grid), 1.0)

    @pytest.mark.unit
    def test_laplacian_of_bump_is_negative_far_away(self, canonical_grid, bump_factory):
        """Outside the support (-Delta)^s u = -C * integral u(y) |x - y|^{-1-2s} dy < 0."""
        u = bump_factory(canonical_grid, radius=1.0)
        result = FourierOperators.frac_laplacian_fourier(u, 0.25)
        far = (np.abs(canonical_grid.nodes) > 1.5) & ~canonical_grid.margin_mask()
        assert np.all(result.values[far] < 0.0)
        assert result.values[canonical_grid.n_nodes // 2] > 0.0

    @pytest.mark.unit
    def test_fourier_energy_is_positive(self, canonical_grid, bump_factory):
        assert FourierOperators.fourier_energy(bump_factory(canonical_grid, radius=1.0), 0.25) > 0.0

    @pytest.mark.unit
    def test_hat_energy_scaling(self):
        """The hat energy scales like h^{1-2s}."""
        s = 0.25
        ratio = FourierOperators.hat_energy(0.2, s) / FourierOperators.hat_energy(0.1, s)
        assert ratio == pytest.approx(2.0 ** (1.0 - 2.0 * s), rel=1e-12)
        assert FourierOperators.hat_energy(0.1, s) > 0.0

    @pytest.mark.unit
    def test_hat_energy_near_half_exponent(self):
        """Near s = 1/2 the unit hat has energy close to 4 log 2 / pi."""
        value = FourierOperators.hat_energy(1.0, 0.499)
        assert value == pytest.approx(4.0 * math.log(2.0) / math.pi, rel=1e-2)

    @pytest.mark.unit
    def test_bessel_diagnostic_norm_is_finite(self, canonical_grid, bump_factory):
        norm = FourierOperators.bessel_diagnostic_norm(bump_factory(canonical_grid, radius=1.0), 0.25)
        assert np.isfinite(norm) and norm > 0.0


class TestSingularQuadrature:
    """Test cases for the direct quadrature of the singular integral."""

    @pytest.mark.unit
    def test_panel_weights_integrate_power(self):
        """Row sums of the first panel weights integrate tau^beta over [0, 2]."""
        beta = 0.5
        weights = SingularQuadrature.panel_weights(3, beta)
        assert weights[0].sum() == pytest.approx(2.0 ** (beta + 1.0) / (beta + 1.0), rel=1e-14)
        assert weights[1].sum() == pytest.approx((4.0 ** (beta + 1.0) - 2.0 ** (beta + 1.0)) / (beta + 1.0), rel=1e-12)

    @pytest.mark.unit
    def test_margin_node_is_rejected(self, coarse_grid, bump_factory):
        u = bump_factory(coarse_grid, radius=1.0)
        with pytest.raises(PreconditionViolationError):
            SingularQuadrature.frac_laplacian_quadrature(u, float(coarse_grid.nodes[1]), 0.25)

    @pytest.mark.unit
    def test_off_grid_point_is_rejected(self, coarse_grid, bump_factory):
        with pytest.raises(InvalidArgumentError):
            SingularQuadrature.frac_laplacian_quadrature(bump_factory(coarse_grid), 0.01, 0.25)

    @pytest.mark.integration
    def test_agrees_with_fourier_oracle(self, grid_factory, bump_factory, assert_relative_close):
        grid = grid_factory(-8.0, 8.0, 1025)
        u = bump_factory(grid, radius=2.0)
        spectral = FourierOperators.frac_laplacian_fourier(u, 0.25)
        quadrature = SingularQuadrature.frac_laplacian_on_nodes(u, 0.25)
        interior = ~grid.margin_mask()
        assert_relative_close(quadrature.values[interior], spectral.values[interior], rtol=1e-2)
