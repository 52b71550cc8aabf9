"""
Tests for run directories written and read back by ReportWriter.
"""

import numpy as np
import orjson
import pytest

from fraccond_core.services.cli_io.config_loader import ConfigLoader
from fraccond_core.services.cli_io.report_writer import ReportWriter
from fraccond_core.services.counterexample.dataclass.main import ConvergenceReport, ConvergenceRow
from fraccond_core.utils.constants.enums import ReportStatus
from fraccond_core.utils.exceptions import InvalidArgumentError


@pytest.fixture
def canonical_run_config(canonical_config_mapping):
    """The canonical configuration at 257 nodes, matching the session constructions."""
    mapping = {**canonical_config_mapping, "discretization": {"n_nodes": 257}}
    return ConfigLoader.from_mapping(mapping)


def make_study() -> ConvergenceReport:
    rows = [
        ConvergenceRow(
            n_nodes=n + 1,
            h=8.0 / n,
            disjoint_difference=(8.0 / n) ** 0.5,
            overlap_difference=0.05,
            separation_ratio=0.05 / (8.0 / n) ** 0.5,
            identity_residual=1e-3,
            status=ReportStatus.VALID,
        )
        for n in (128, 256, 512)
    ]
    return ConvergenceReport(rows=rows, fitted_slope=0.5, s=0.25)


class TestReportWriter:
    """Test cases for ReportWriter."""

    @pytest.mark.unit
    def test_render_text_flattens_nested_mappings(self):
        lines = ReportWriter.render_text({"status": "VALID", "flags": {"nonneg": True, "ratio": 0.5}, "count": 3})
        assert lines == ["status: VALID", "flags.nonneg: True", "flags.ratio: 0.5", "count: 3"]

    @pytest.mark.unit
    def test_prepare_writes_resolved_config(self, canonical_run_config):
        target = ReportWriter.prepare(canonical_run_config)
        assert target.name == canonical_run_config.run_id()
        reloaded = ConfigLoader.load_config(target / "config.yaml")
        assert reloaded == canonical_run_config

    @pytest.mark.integration
    def test_construction_run_directory(self, canonical_run_config, bounded_report):
        target = ReportWriter.write_construction(canonical_run_config, bounded_report)
        for name in ("config.yaml", "report.txt", "report.json", "gamma2_sqrt.csv", "m2.csv", "eta.csv", "m_tilde.csv"):
            assert (target / name).is_file()
        text = (target / "report.txt").read_text(encoding="utf-8").splitlines()
        assert text[0] == "command: construct"
        assert "status: VALID" in text
        assert any(line.startswith("config.problem.s: ") for line in text)
        payload = orjson.loads((target / "report.json").read_bytes())
        assert payload["report"]["status"] == "VALID"
        assert payload["run_id"] == canonical_run_config.run_id()

    @pytest.mark.integration
    def test_load_run_restores_conductivity(self, canonical_run_config, bounded_report, tmp_path):
        target = ReportWriter.write_construction(canonical_run_config, bounded_report, run_dir=tmp_path / "run")
        config, gamma2 = ReportWriter.load_run(target)
        assert config == canonical_run_config
        np.testing.assert_array_equal(gamma2.gamma_sqrt.values, bounded_report.gamma2.gamma_sqrt.values)
        assert gamma2.content_hash() == bounded_report.gamma2.content_hash()

    @pytest.mark.integration
    def test_family_members(self, canonical_run_config, bounded_report, tmp_path):
        target = ReportWriter.write_construction(
            canonical_run_config, bounded_report, [bounded_report, bounded_report], run_dir=tmp_path / "run"
        )
        assert sorted(path.name for path in (target / "family").iterdir()) == ["gamma2_sqrt_0.csv", "gamma2_sqrt_1.csv"]
        text = (target / "report.txt").read_text(encoding="utf-8")
        assert "family.1.status: VALID" in text

    @pytest.mark.unit
    def test_study_round_trip(self, canonical_run_config, tmp_path):
        study = make_study()
        target = ReportWriter.write_study(canonical_run_config, study, run_dir=tmp_path / "study")
        assert (target / "study.csv").is_file()
        assert ReportWriter.load_study(target) == study
        assert "rows.256.status: VALID" in (target / "report.txt").read_text(encoding="utf-8")

    @pytest.mark.unit
    def test_missing_artifacts(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            ReportWriter.load_run(tmp_path)
        with pytest.raises(InvalidArgumentError):
            ReportWriter.load_study(tmp_path)
