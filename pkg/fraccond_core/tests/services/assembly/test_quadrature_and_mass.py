"""
Unit tests for the quadrature rules, the potential mass matrix and the DOF classification.
"""

import numpy as np
import pytest

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.assembly.dataclass.main import ConductivityField, QuadratureMetadata
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.assembly.mass_assembler import MassAssembler
from fraccond_core.services.assembly.quadrature_rules import QuadratureRules
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.utils.exceptions import InvalidArgumentError


class TestQuadratureRules:
    """Test cases for QuadratureRules."""

    @pytest.mark.unit
    def test_legendre_rule_on_unit_interval(self):
        t, w = QuadratureRules.gauss_legendre(4)
        assert w.sum() == pytest.approx(1.0, rel=1e-15)
        assert np.sum(w * t**7) == pytest.approx(1.0 / 8.0, rel=1e-14)

    @pytest.mark.unit
    def test_jacobi_rule_integrates_weight(self):
        power = -0.5
        t, w = QuadratureRules.gauss_jacobi(6, power)
        assert w.sum() == pytest.approx(1.0 / (power + 1.0), rel=1e-13)
        assert np.sum(w * t**3) == pytest.approx(1.0 / (power + 4.0), rel=1e-13)

    @pytest.mark.unit
    def test_same_element_tensor_total(self):
        """The entries sum to the integral of |t - r|^{1-2s} over the unit square."""
        s = 0.25
        tensor = QuadratureRules.same_element_tensor(s, 8)
        assert np.allclose(tensor, tensor.T)
        assert tensor.sum() == pytest.approx(2.0 / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s)), rel=1e-12)

    @pytest.mark.unit
    def test_rules_are_cached(self):
        assert QuadratureRules.gauss_legendre(5) is QuadratureRules.gauss_legendre(5)


class TestQuadratureMetadata:
    """Test cases for the rule-order record."""

    @pytest.mark.unit
    def test_doubled_keeps_radius(self):
        doubled = QuadratureMetadata().doubled()
        assert doubled.far_field_order == 2 * QuadratureMetadata().far_field_order
        assert doubled.near_field_radius == QuadratureMetadata().near_field_radius

    @pytest.mark.unit
    def test_rejects_zero_order(self):
        with pytest.raises(InvalidArgumentError):
            QuadratureMetadata(far_field_order=0)

    @pytest.mark.unit
    @pytest.mark.parametrize("radius", [0, 2, 3])
    def test_rejects_unsupported_near_field_radius(self, radius):
        with pytest.raises(InvalidArgumentError, match="near_field_radius"):
            QuadratureMetadata(near_field_radius=radius)


class TestMassAssembler:
    """Test cases for the P1 potential mass matrix."""

    @pytest.mark.unit
    def test_unit_potential_gives_standard_mass_matrix(self, coarse_grid):
        h = coarse_grid.h
        matrix = MassAssembler.assemble_potential_mass(coarse_grid, GridFunction.constant(coarse_grid, 1.0))
        assert matrix[10, 10] == pytest.approx(2.0 * h / 3.0, rel=1e-14)
        assert matrix[10, 11] == pytest.approx(h / 6.0, rel=1e-14)
        assert matrix[10, 12] == 0.0
        assert matrix.sum() == pytest.approx(coarse_grid.length, rel=1e-13)

    @pytest.mark.unit
    def test_linear_potential_is_integrated_exactly(self, coarse_grid):
        q = GridFunction(grid=coarse_grid, values=coarse_grid.nodes + 5.0)
        matrix = MassAssembler.assemble_potential_mass(coarse_grid, q)
        ones = np.ones(coarse_grid.n_nodes)
        assert ones @ matrix @ ones == pytest.approx(5.0 * coarse_grid.length, rel=1e-13)


class TestDofClassifier:
    """Test cases for the conforming interior set and the window hats."""

    @pytest.mark.unit
    def test_interior_hats_lie_strictly_inside(self, unit_spacing_grid):
        """With h = 1 and domain (-4, 4) only the hats centred at -2..2 fit."""
        interior, exterior = DofClassifier.classify_dofs(unit_spacing_grid, IntervalSet.of((-4.0, 4.0)))
        assert unit_spacing_grid.nodes[interior].tolist() == [-2.0, -1.0, 0.0, 1.0, 2.0]
        assert interior.size + exterior.size == unit_spacing_grid.n_nodes

    @pytest.mark.unit
    def test_window_hats_may_touch_the_window_boundary(self, unit_spacing_grid):
        hats = DofClassifier.window_hats(unit_spacing_grid, IntervalSet.of((4.0, 7.0)))
        assert unit_spacing_grid.nodes[hats].tolist() == [5.0, 6.0]

    @pytest.mark.unit
    def test_window_nodes_of_unit_field(self, coarse_grid):
        field = ConductivityField.unit(coarse_grid)
        assert field.is_window_clean(IntervalSet.of((1.5, 2.0)))
        assert field.window_nodes(IntervalSet.of((1.5, 2.0))).sum() == 9
