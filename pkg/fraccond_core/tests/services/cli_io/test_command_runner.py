"""
Tests for the CLI command handlers.
"""

from pathlib import Path
from typing import List, Optional
from unittest.mock import patch

import pytest

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.cli_io.command_runner import CommandRunner
from fraccond_core.services.cli_io.config_loader import ConfigLoader
from fraccond_core.services.cli_io.csv_exporter import CsvExporter
from fraccond_core.services.cli_io.dataclass.main import OracleCheckRow, OracleCheckTable
from fraccond_core.services.cli_io.oracle_checks import OracleChecks
from fraccond_core.services.cli_io.report_writer import ReportWriter
from fraccond_core.services.counterexample.convergence_study import ConvergenceStudy
from fraccond_core.services.counterexample.dataclass.main import ConvergenceReport, ConvergenceRow
from fraccond_core.utils.constants.enums import CheckOutcome, CliCommand, ReportStatus
from fraccond_core.utils.constants.error_codes import ExitCodes
from fraccond_core.utils.context_vars import get_context_value
from fraccond_core.utils.exceptions import ConfigValidationError, InvalidArgumentError


@pytest.fixture
def unit_run_factory(canonical_config_mapping, tmp_path):
    """Factory for construct run directories holding Gamma_2 = 1."""

    def _create_unit_run(name: str, n_nodes: int = 129, s: float = 0.25, w1: Optional[List[float]] = None) -> Path:
        geometry = {**canonical_config_mapping["geometry"], **({"w1": w1} if w1 else {})}
        mapping = {
            **canonical_config_mapping,
            "problem": {"s": s},
            "geometry": geometry,
            "discretization": {"n_nodes": n_nodes},
        }
        config = ConfigLoader.from_mapping(mapping)
        target = ReportWriter.prepare(config, tmp_path / name)
        grid = UniformGrid(lo=-4.0, hi=4.0, n_nodes=n_nodes)
        CsvExporter.export_csv(ConductivityField.unit(grid).gamma_sqrt, target / "gamma2_sqrt.csv", s=s)
        return target

    return _create_unit_run


def stub_study() -> ConvergenceReport:
    rows = [
        ConvergenceRow(
            n_nodes=n + 1,
            h=8.0 / n,
            disjoint_difference=0.1 * (8.0 / n),
            overlap_difference=0.05,
            separation_ratio=0.5 * n / 8.0,
            identity_residual=0.0,
            status=ReportStatus.VALID,
        )
        for n in (128, 256, 512)
    ]
    return ConvergenceReport(rows=rows, fitted_slope=1.0, s=0.25)


class TestCommandRunner:
    """Test cases for CommandRunner."""

    @pytest.mark.integration
    def test_construct(self, canonical_config_mapping, tmp_path):
        mapping = {**canonical_config_mapping, "output": {"output_dir": str(tmp_path / "runs"), "write_stiffness": True}}
        config = ConfigLoader.from_mapping(mapping)
        result = CommandRunner.run_command(CliCommand.CONSTRUCT, config)
        assert result.exit_code == ExitCodes.SUCCESS
        assert "status: VALID" in result.output
        run_dir = tmp_path / "runs" / config.run_id()
        assert (run_dir / "gamma2_sqrt.csv").is_file()
        assert str(run_dir / "stiffness_unit.bin") in result.artifacts
        assert get_context_value("command") == "construct"
        assert get_context_value("run_id") == config.run_id()

    @pytest.mark.integration
    def test_repeated_construct_is_byte_identical(self, canonical_config_mapping, tmp_path):
        config = ConfigLoader.from_mapping(canonical_config_mapping)
        first = CommandRunner.run_command(CliCommand.CONSTRUCT, config, run_dir=tmp_path / "first")
        second = CommandRunner.run_command(CliCommand.CONSTRUCT, config, run_dir=tmp_path / "second")
        assert first.exit_code == second.exit_code == ExitCodes.SUCCESS

        def relative_files(root: Path) -> List[Path]:
            return sorted(path.relative_to(root) for path in root.rglob("*") if path.is_file())

        names = relative_files(tmp_path / "first")
        assert names == relative_files(tmp_path / "second")
        assert Path("report.txt") in names and Path("gamma2_sqrt.csv") in names
        for name in names:
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes(), name
        assert f"run_id: {config.run_id()}" in (tmp_path / "first" / "report.txt").read_text(encoding="utf-8")

    @pytest.mark.integration
    def test_verify_identical_runs(self, unit_run_factory):
        result = CommandRunner.run_command(CliCommand.VERIFY, a=str(unit_run_factory("a")), b=str(unit_run_factory("b")))
        assert result.exit_code == ExitCodes.SUCCESS
        assert "relative_frobenius: 0" in result.output.splitlines()

    @pytest.mark.unit
    def test_verify_grid_mismatch(self, unit_run_factory):
        with pytest.raises(InvalidArgumentError):
            CommandRunner.verify(None, a=str(unit_run_factory("a")), b=str(unit_run_factory("b", n_nodes=257)))

    @pytest.mark.unit
    def test_verify_exponent_mismatch(self, unit_run_factory):
        with pytest.raises(InvalidArgumentError):
            CommandRunner.verify(None, a=str(unit_run_factory("a")), b=str(unit_run_factory("b", s=0.3)))

    @pytest.mark.unit
    def test_verify_window_mismatch(self, unit_run_factory):
        with pytest.raises(ConfigValidationError, match="geometry mismatch"):
            CommandRunner.verify(None, a=str(unit_run_factory("a")), b=str(unit_run_factory("b", w1=[2.0, 2.5])))

    @pytest.mark.unit
    def test_verify_needs_two_runs(self):
        with pytest.raises(InvalidArgumentError):
            CommandRunner.verify(None, a="only-one")

    @pytest.mark.unit
    def test_construct_needs_config(self):
        with pytest.raises(InvalidArgumentError):
            CommandRunner.run_command(CliCommand.CONSTRUCT, None)

    @pytest.mark.unit
    def test_export_field(self, unit_run_factory):
        source = unit_run_factory("a")
        result = CommandRunner.run_command(CliCommand.EXPORT, input_dir=str(source), what="field")
        assert result.exit_code == ExitCodes.SUCCESS
        assert sorted(Path(path).name for path in result.artifacts) == ["gamma2.csv", "gamma2_sqrt.csv", "m2.csv"]
        m2, s = CsvExporter.read_grid_function(source / "export" / "m2.csv")
        assert m2.sup_norm() == 0.0
        assert s == 0.25

    @pytest.mark.integration
    def test_export_dn(self, unit_run_factory):
        result = CommandRunner.run_command(CliCommand.EXPORT, input_dir=str(unit_run_factory("a")), what="dn")
        names = [Path(path).name for path in result.artifacts]
        assert names == ["dn_gamma1.csv", "dn_gamma2.csv"]
        first, second = (CsvExporter.read_csv(path) for path in result.artifacts)
        assert first.rows == second.rows

    @pytest.mark.unit
    def test_sweep_and_export_study(self, canonical_config_mapping, tmp_path):
        config = ConfigLoader.from_mapping(canonical_config_mapping)
        with patch.object(ConvergenceStudy, "convergence_study", return_value=stub_study()) as mock_study:
            result = CommandRunner.run_command(CliCommand.SWEEP, config)
        mock_study.assert_called_once()
        assert mock_study.call_args.kwargs["workers"] == 1
        assert result.exit_code == ExitCodes.SUCCESS
        assert result.output.startswith("# kind=convergence_study")

        run_dir = tmp_path / "runs" / config.run_id()
        exported = CommandRunner.run_command(CliCommand.EXPORT, input_dir=str(run_dir), what="study")
        table = CsvExporter.read_csv(exported.artifacts[0])
        assert [int(row[0]) for row in table.rows] == [129, 257, 513]

    @pytest.mark.unit
    def test_oracle_check_exit_code(self):
        failing = OracleCheckTable(
            rows=[OracleCheckRow(name="probe", value=1.0, threshold=1e-6, outcome=CheckOutcome.FAIL)]
        )
        with patch.object(OracleChecks, "run_oracle_checks", return_value=failing) as mock_checks:
            result = CommandRunner.run_command(CliCommand.ORACLE_CHECK)
        mock_checks.assert_called_once_with(s=None, tolerances=None)
        assert result.exit_code == ExitCodes.CHECKS_FAILED
        assert "probe" in result.output
