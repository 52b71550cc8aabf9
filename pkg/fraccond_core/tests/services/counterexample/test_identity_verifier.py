"""
Tests for the Liouville identity check.
"""

import numpy as np
import pytest

from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.assembly.dof_classifier import DofClassifier
from fraccond_core.services.counterexample.identity_verifier import IdentityVerifier


class TestIdentityVerifier:
    @pytest.mark.unit
    def test_unit_conductivity_has_zero_potential(self, canonical_params, coarse_grid):
        q = IdentityVerifier.potential(ConductivityField.unit(coarse_grid), canonical_params)
        assert q.sup_norm() == 0.0

    @pytest.mark.unit
    def test_unit_pair_has_zero_residual(self, canonical_window_config, canonical_params, coarse_grid):
        unit = ConductivityField.unit(coarse_grid)
        report = IdentityVerifier.verify_identity(unit, unit, canonical_window_config.omega_dom, canonical_params, coarse_grid)
        interior, _ = DofClassifier.classify_dofs(coarse_grid, canonical_window_config.omega_dom)
        assert report.residual_sup == 0.0
        assert report.relative == 0.0
        assert report.node_count == interior.size

    @pytest.mark.unit
    def test_potential_of_bump(self, canonical_params, coarse_grid, bump_factory):
        """(-Delta)^s of a nonnegative bump is negative away from its support."""
        gamma1 = ConductivityField.from_deviation(bump_factory(coarse_grid, center=0.0, radius=1.0, height=0.5))
        q = IdentityVerifier.potential(gamma1, canonical_params)
        far = np.abs(coarse_grid.nodes) > 2.0
        far &= ~coarse_grid.margin_mask()
        assert np.all(q.values[far] < 0.0)

    @pytest.mark.integration
    def test_report_records_identity_residual(self, bounded_report, canonical_window_config, canonical_params, canonical_grid):
        report = IdentityVerifier.verify_identity(
            ConductivityField.unit(canonical_grid),
            bounded_report.gamma2,
            canonical_window_config.omega_dom,
            canonical_params,
            canonical_grid,
        )
        assert report.relative == bounded_report.identity_residual
        assert np.isfinite(report.relative)
        assert report.reference_sup > 0.0

    @pytest.mark.integration
    def test_bump_inside_domain_breaks_identity(
        self, bounded_report, canonical_window_config, canonical_params, canonical_grid, bump_factory
    ):
        """m_2 plus a bump supported in the domain is no longer s-harmonic there."""
        unit = ConductivityField.unit(canonical_grid)
        omega_dom = canonical_window_config.omega_dom
        baseline = IdentityVerifier.verify_identity(
            unit, bounded_report.gamma2, omega_dom, canonical_params, canonical_grid
        )
        bump = bump_factory(canonical_grid, center=0.0, radius=0.5, height=1.0)
        deviation = bounded_report.deviation
        perturbed = ConductivityField.from_deviation(deviation.with_values(deviation.values + bump.values))
        report = IdentityVerifier.verify_identity(unit, perturbed, omega_dom, canonical_params, canonical_grid)
        assert report.residual_sup > 2.0 * baseline.residual_sup
        assert report.relative > baseline.relative
