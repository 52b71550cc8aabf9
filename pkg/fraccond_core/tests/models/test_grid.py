"""
Unit tests for UniformGrid and GridFunction.
"""

import numpy as np
import pytest

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.utils.exceptions import InvalidArgumentError, PreconditionViolationError


class TestUniformGrid:
    """Test cases for the uniform node set."""

    @pytest.mark.unit
    def test_spacing_and_nodes(self, grid_factory):
        """Nodes run from lo to hi in steps of h."""
        grid = grid_factory(-4.0, 4.0, 129)
        assert grid.h == pytest.approx(1.0 / 16.0)
        assert grid.nodes[0] == -4.0
        assert grid.nodes[-1] == pytest.approx(4.0)
        assert grid.nodes.size == 129

    @pytest.mark.unit
    def test_margin_band_defaults_to_two_cells(self, grid_factory):
        """The margin band is two cells wide unless set explicitly."""
        grid = grid_factory(-4.0, 4.0, 129)
        assert grid.margin_band == pytest.approx(2.0 * grid.h)
        mask = grid.margin_mask()
        assert mask[:3].all() and mask[-3:].all()
        assert not mask[3:-3].any()

    @pytest.mark.unit
    def test_rejects_narrow_margin_band(self):
        """A margin band narrower than two cells is rejected."""
        with pytest.raises(InvalidArgumentError):
            UniformGrid(lo=-4.0, hi=4.0, n_nodes=129, margin_band=0.01)

    @pytest.mark.unit
    def test_rejects_too_few_nodes(self):
        with pytest.raises(InvalidArgumentError):
            UniformGrid(lo=0.0, hi=1.0, n_nodes=5)

    @pytest.mark.unit
    def test_rejects_inverted_box(self):
        with pytest.raises(InvalidArgumentError):
            UniformGrid(lo=1.0, hi=-1.0, n_nodes=33)

    @pytest.mark.unit
    def test_ensure_same_detects_mismatch(self, grid_factory):
        """Grids with different node counts cannot be mixed."""
        with pytest.raises(InvalidArgumentError, match="grid mismatch"):
            grid_factory(n_nodes=129).ensure_same(grid_factory(n_nodes=257))


class TestGridFunction:
    """Test cases for nodal grid functions."""

    @pytest.mark.unit
    def test_values_are_frozen_copies(self, grid_factory):
        grid = grid_factory()
        source = np.zeros(grid.n_nodes)
        u = GridFunction(grid=grid, values=source)
        source[0] = 5.0
        assert u.values[0] == 0.0
        with pytest.raises(ValueError):
            u.values[0] = 1.0

    @pytest.mark.unit
    def test_rejects_wrong_length(self, grid_factory):
        with pytest.raises(InvalidArgumentError):
            GridFunction(grid=grid_factory(), values=np.zeros(10))

    @pytest.mark.unit
    def test_rejects_non_finite_values(self, grid_factory):
        grid = grid_factory()
        values = np.zeros(grid.n_nodes)
        values[3] = np.nan
        with pytest.raises(InvalidArgumentError):
            GridFunction(grid=grid, values=values)

    @pytest.mark.unit
    def test_evaluate_interpolates_and_vanishes_outside(self, unit_spacing_grid):
        """Evaluation is piecewise linear inside the box and zero outside for a compactly supported hat."""
        u = GridFunction.hat(unit_spacing_grid, 8)
        assert u.evaluate([0.0, 0.5, 1.0, 20.0]).tolist() == [1.0, 0.5, 0.0, 0.0]

    @pytest.mark.unit
    def test_evaluate_keeps_tail_value_outside(self, unit_spacing_grid):
        u = GridFunction.constant(unit_spacing_grid, 1.0)
        assert u.evaluate([-50.0, 0.25, 50.0]).tolist() == [1.0, 1.0, 1.0]

    @pytest.mark.unit
    def test_norms_of_constant(self, grid_factory):
        u = GridFunction.constant(grid_factory(0.0, 2.0, 33), 3.0)
        assert u.sup_norm() == 3.0
        assert u.integral() == pytest.approx(6.0)
        assert u.l2_norm() == pytest.approx(np.sqrt(18.0))

    @pytest.mark.unit
    def test_margin_check(self, grid_factory, bump_factory):
        """A bump away from the edges passes, a constant does not."""
        grid = grid_factory()
        bump_factory(grid, radius=1.0).ensure_vanishes_on_margin()
        with pytest.raises(PreconditionViolationError):
            GridFunction.constant(grid, 1.0).ensure_vanishes_on_margin()
