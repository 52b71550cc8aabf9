"""
Unit tests for the bump mollifier.
"""

import numpy as np
import pytest

from fraccond_core.services.fracops.mollifier import Mollifier
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class TestMollifier:
    """Test cases for Mollifier.build and Mollifier.mollify."""

    @pytest.mark.unit
    def test_profile_has_unit_mass(self):
        x = np.linspace(-0.5, 0.5, 20001)
        assert np.trapz(Mollifier.profile(x, 0.5), x) == pytest.approx(1.0, rel=1e-8)

    @pytest.mark.unit
    def test_weights_are_even_and_sum_to_one(self, coarse_grid):
        rho = Mollifier.build(0.3, coarse_grid)
        assert rho.half_width == 5
        assert np.sum(rho.weights) == pytest.approx(1.0, rel=1e-15)
        assert np.array_equal(rho.weights, rho.weights[::-1])
        assert rho.scaled_sup_norm == pytest.approx(rho.sup_norm / 0.3)

    @pytest.mark.unit
    def test_radius_below_spacing_is_identity(self, coarse_grid, bump_factory):
        """Only the central weight survives when eps < h."""
        rho = Mollifier.build(0.5 * coarse_grid.h, coarse_grid)
        u = bump_factory(coarse_grid, radius=1.0)
        assert rho.weights.tolist() == [0.0, 1.0, 0.0]
        assert np.array_equal(Mollifier.mollify(u, rho).values, u.values)

    @pytest.mark.unit
    def test_mollify_preserves_integral(self, canonical_grid, indicator_factory):
        u = indicator_factory(canonical_grid, -1.0, 1.0)
        smoothed = Mollifier.mollify(u, Mollifier.build(0.25, canonical_grid))
        assert smoothed.integral() == pytest.approx(u.integral(), rel=1e-12)
        assert float(np.max(smoothed.values)) == pytest.approx(1.0)
        assert float(np.min(smoothed.values)) >= 0.0

    @pytest.mark.unit
    def test_support_grows_by_at_most_epsilon(self, canonical_grid, indicator_factory, assert_vanishes_outside):
        u = indicator_factory(canonical_grid, -1.0, 1.0)
        smoothed = Mollifier.mollify(u, Mollifier.build(0.25, canonical_grid))
        assert_vanishes_outside(smoothed, IntervalSet.of((-1.25, 1.25)))

    @pytest.mark.unit
    def test_support_reaching_margin_is_rejected(self, coarse_grid, indicator_factory):
        u = indicator_factory(coarse_grid, 3.0, 3.7)
        with pytest.raises(PreconditionViolationError):
            Mollifier.mollify(u, Mollifier.build(0.25, coarse_grid))

    @pytest.mark.unit
    def test_grid_mismatch_is_rejected(self, coarse_grid, canonical_grid, indicator_factory):
        u = indicator_factory(canonical_grid, -1.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            Mollifier.mollify(u, Mollifier.build(0.25, coarse_grid))

    @pytest.mark.unit
    def test_rejects_non_positive_radius(self, coarse_grid):
        with pytest.raises(InvalidArgumentError):
            Mollifier.build(0.0, coarse_grid)
