"""
Factory fixtures for the fraccond core test suite.

This module contains factory fixtures for creating grids, grid functions and configuration files.
"""

from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pytest
import yaml

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.cli_io.oracle_checks import smooth_bump


@pytest.fixture
def grid_factory():
    """Factory for uniform grids with custom box and node count."""

    def _create_grid(lo: float = -4.0, hi: float = 4.0, n_nodes: int = 129) -> UniformGrid:
        return UniformGrid(lo=lo, hi=hi, n_nodes=n_nodes)

    return _create_grid


@pytest.fixture
def bump_factory():
    """Factory for smooth bumps exp(1 - 1/(1 - r^2)) of a given height, centre and radius."""

    def _create_bump(grid: UniformGrid, center: float = 0.0, radius: float = 1.0, height: float = 1.0) -> GridFunction:
        profile = smooth_bump(radius)
        return GridFunction(grid=grid, values=height * profile(grid.nodes - center))

    return _create_bump


@pytest.fixture
def indicator_factory():
    """Factory for nodal indicators of a closed interval."""

    def _create_indicator(grid: UniformGrid, lo: float, hi: float) -> GridFunction:
        nodes = grid.nodes
        return GridFunction(grid=grid, values=np.where((nodes >= lo) & (nodes <= hi), 1.0, 0.0))

    return _create_indicator


@pytest.fixture
def config_file_factory(tmp_path):
    """Factory writing a run configuration mapping (or raw text) to a YAML file."""

    def _create_config_file(
        mapping: Optional[Dict[str, Any]] = None,
        text: Optional[str] = None,
        name: str = "config.yaml",
    ) -> Path:
        path = tmp_path / name
        if text is None:
            text = yaml.safe_dump(mapping or {}, sort_keys=False)
        path.write_text(text, encoding="utf-8")
        return path

    return _create_config_file
