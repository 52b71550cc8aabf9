"""
Unit tests for the binary and debug dumps of stiffness matrices.
"""

import numpy as np
import pytest

from fraccond_core.services.assembly.dataclass.main import StiffnessMatrix
from fraccond_core.services.cli_io.csv_exporter import CsvExporter
from fraccond_core.services.cli_io.stiffness_exporter import HEADER_DTYPE, StiffnessExporter
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.utils.exceptions import InvalidArgumentError


@pytest.fixture
def symmetric_stiffness(unit_spacing_grid) -> StiffnessMatrix:
    rng = np.random.default_rng(7)
    raw = rng.standard_normal((unit_spacing_grid.n_nodes, unit_spacing_grid.n_nodes))
    return StiffnessMatrix(matrix=raw + raw.T, grid=unit_spacing_grid, params=FracParams.from_exponent(0.25))


class TestStiffnessExporter:
    """Test cases for StiffnessExporter."""

    @pytest.mark.unit
    def test_binary_round_trip(self, tmp_path, symmetric_stiffness):
        path = StiffnessExporter.write_binary(symmetric_stiffness, tmp_path / "a.bin")
        assert path.stat().st_size == HEADER_DTYPE.itemsize + 8 * 17 * 17
        matrix, s, h = StiffnessExporter.read_binary(path)
        np.testing.assert_array_equal(matrix, symmetric_stiffness.matrix)
        assert s == 0.25
        assert h == 1.0

    @pytest.mark.unit
    def test_header_is_32_bytes(self):
        assert HEADER_DTYPE.itemsize == 32

    @pytest.mark.unit
    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "other.bin"
        path.write_bytes(b"NOTSTIFF" + bytes(24))
        with pytest.raises(InvalidArgumentError):
            StiffnessExporter.read_binary(path)

    @pytest.mark.unit
    def test_rejects_truncated_payload(self, tmp_path, symmetric_stiffness):
        path = StiffnessExporter.write_binary(symmetric_stiffness, tmp_path / "a.bin")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(InvalidArgumentError):
            StiffnessExporter.read_binary(path)

    @pytest.mark.unit
    def test_rejects_short_file(self, tmp_path):
        path = tmp_path / "short.bin"
        path.write_bytes(b"FRAC")
        with pytest.raises(InvalidArgumentError):
            StiffnessExporter.read_binary(path)

    @pytest.mark.unit
    def test_debug_csv(self, tmp_path, symmetric_stiffness):
        table = CsvExporter.read_csv(StiffnessExporter.write_debug_csv(symmetric_stiffness, tmp_path / "a.csv"))
        assert table.metadata["kind"] == "stiffness"
        assert table.header[0] == "row"
        np.testing.assert_array_equal(table.numeric(start=1), symmetric_stiffness.matrix)
