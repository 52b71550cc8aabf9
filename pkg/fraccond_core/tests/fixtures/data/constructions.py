"""
Construction fixtures for the fraccond core test suite.

The canonical constructions are expensive compared to the rest of the suite, so they are
built once per session and shared.
"""

import pytest

from fraccond_core.services.assembly.dataclass.main import ConductivityField, StiffnessMatrix
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.counterexample.counterexample_builder import CounterexampleBuilder
from fraccond_core.services.counterexample.dataclass.main import CounterexampleReport


@pytest.fixture(scope="session")
def canonical_unit_stiffness(canonical_grid, canonical_params) -> StiffnessMatrix:
    """Gamma = 1 stiffness matrix on the canonical 257-node grid."""
    return StiffnessAssembler.assemble_stiffness(canonical_grid, ConductivityField.unit(canonical_grid), canonical_params)


@pytest.fixture(scope="session")
def bounded_report(canonical_window_config, canonical_params, canonical_grid, canonical_unit_stiffness) -> CounterexampleReport:
    return CounterexampleBuilder.build_bounded(
        canonical_window_config,
        canonical_params,
        canonical_grid,
        unit_stiffness=canonical_unit_stiffness,
    )


@pytest.fixture(scope="session")
def scaled_report(canonical_window_config, canonical_params, canonical_grid, canonical_unit_stiffness) -> CounterexampleReport:
    return CounterexampleBuilder.build_scaled(
        canonical_window_config,
        canonical_params,
        canonical_grid,
        with_dn=False,
        unit_stiffness=canonical_unit_stiffness,
    )
