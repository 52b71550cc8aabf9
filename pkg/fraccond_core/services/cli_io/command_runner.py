from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.assembly.stiffness_assembler import StiffnessAssembler
from fraccond_core.services.cli_io.config_loader import ConfigLoader
from fraccond_core.services.cli_io.csv_exporter import CsvExporter
from fraccond_core.services.cli_io.dataclass.main import RunConfig
from fraccond_core.services.cli_io.oracle_checks import OracleChecks
from fraccond_core.services.cli_io.report_writer import ReportWriter
from fraccond_core.services.cli_io.stiffness_exporter import StiffnessExporter
from fraccond_core.services.counterexample.convergence_study import ConvergenceStudy
from fraccond_core.services.counterexample.counterexample_builder import CounterexampleBuilder
from fraccond_core.services.dn.dn_builder import DNBuilder
from fraccond_core.services.dn.dn_comparator import DNComparator
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.enums import CliCommand, ConstructionMode, ExportTarget, ReportStatus
from fraccond_core.utils.constants.error_codes import ExitCodes
from fraccond_core.utils.context_vars import set_context_values
from fraccond_core.utils.exceptions import ConfigValidationError, InvalidArgumentError

EXPORT_DIR = "export"


class CommandResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    exit_code: ExitCodes
    output: str = ""
    artifacts: List[str] = Field(default_factory=list)


class CommandRunner:
    """
    Executes one CLI command. Handlers are looked up by command, the way runners are registered
    for construction modes.
    """

    @classmethod
    def _require_config(cls, config: Optional[RunConfig], command: CliCommand) -> RunConfig:
        if config is None:
            raise InvalidArgumentError(f"{command.value} needs a run configuration")
        return config

    @classmethod
    def construct(cls, config: Optional[RunConfig], run_dir: Optional[Path] = None, **_: Any) -> CommandResult:
        config = cls._require_config(config, CliCommand.CONSTRUCT)
        ConfigLoader.apply_runtime_settings(config)
        cfg, grid, params = config.window_config(), config.grid(), config.params()
        problem = config.problem
        unit_stiffness = StiffnessAssembler.assemble_stiffness(grid, ConductivityField.unit(grid), params)
        options: Dict[str, Any] = {
            "omega_override": config.omega_override(),
            "epsilon_override": config.geometry.epsilon,
            "tol": config.tolerances.positivity,
            "unit_stiffness": unit_stiffness,
        }
        extra = {"truncation_check": problem.truncation_check} if problem.mode == ConstructionMode.SCALED else {}
        report = CounterexampleBuilder.build(problem.mode, cfg, params, grid, eta_scale=problem.eta_scale, **options, **extra)
        family = []
        if problem.family_scales:
            family = CounterexampleBuilder.build_family(
                problem.mode, cfg, params, grid, problem.family_scales, with_dn=False, **options
            )
        target = ReportWriter.write_construction(config, report, family, run_dir=run_dir)
        artifacts = sorted(str(path) for path in target.rglob("*") if path.is_file())
        if config.output.write_stiffness:
            artifacts.append(str(StiffnessExporter.write_binary(unit_stiffness, target / "stiffness_unit.bin")))
            artifacts.append(str(StiffnessExporter.write_debug_csv(unit_stiffness, target / "stiffness_unit.csv")))
        statuses = [report.status] + [member.status for member in family]
        passed = all(status == ReportStatus.VALID for status in statuses)
        output = "\n".join(ReportWriter.render_text({"status": report.status.value, "run_dir": str(target)}))
        return CommandResult(exit_code=ExitCodes.SUCCESS if passed else ExitCodes.CHECKS_FAILED, output=output, artifacts=artifacts)

    @classmethod
    def verify(cls, config: Optional[RunConfig], a: Optional[str] = None, b: Optional[str] = None, **_: Any) -> CommandResult:
        if not a or not b:
            raise InvalidArgumentError("verify needs two construct run directories")
        config_a, gamma_a = ReportWriter.load_run(a)
        config_b, gamma_b = ReportWriter.load_run(b)
        gamma_a.grid.ensure_same(gamma_b.grid)
        if config_a.problem.s != config_b.problem.s:
            raise InvalidArgumentError(f"exponent mismatch: s={config_a.problem.s} vs s={config_b.problem.s}")
        cfg = config_a.window_config()
        if cfg != config_b.window_config():
            raise ConfigValidationError(f"geometry mismatch: {a} and {b} were built for different windows")
        params, grid = config_a.params(), gamma_a.grid
        comparison = DNComparator.compare_dn(
            DNBuilder.dn_matrix(gamma_a, cfg, params, grid),
            DNBuilder.dn_matrix(gamma_b, cfg, params, grid),
        )
        return CommandResult(exit_code=ExitCodes.SUCCESS, output=comparison.as_text())

    @classmethod
    def sweep(cls, config: Optional[RunConfig], run_dir: Optional[Path] = None, **_: Any) -> CommandResult:
        config = cls._require_config(config, CliCommand.SWEEP)
        ConfigLoader.apply_runtime_settings(config)
        study = ConvergenceStudy.convergence_study(
            config.window_config(),
            config.params(),
            config.discretization.resolutions,
            workers=config.discretization.study_workers,
        )
        target = ReportWriter.write_study(config, study, run_dir=run_dir)
        passed = study.fitted_slope > 0 and all(row.status == ReportStatus.VALID for row in study.rows)
        output = (target / "study.csv").read_text(encoding="utf-8")
        return CommandResult(
            exit_code=ExitCodes.SUCCESS if passed else ExitCodes.CHECKS_FAILED,
            output=output,
            artifacts=sorted(str(path) for path in target.iterdir() if path.is_file()),
        )

    @classmethod
    def oracle_check(cls, config: Optional[RunConfig], **_: Any) -> CommandResult:
        s = config.problem.s if config else None
        tolerances = config.tolerances if config else None
        table = OracleChecks.run_oracle_checks(s=s, tolerances=tolerances)
        return CommandResult(
            exit_code=ExitCodes.SUCCESS if table.all_passed() else ExitCodes.CHECKS_FAILED,
            output=table.render(),
        )

    @classmethod
    def export(cls, config: Optional[RunConfig], input_dir: Optional[str] = None, what: Optional[str] = None, **_: Any) -> CommandResult:
        if not input_dir or not what:
            raise InvalidArgumentError("export needs an input run directory and a target")
        target = ExportTarget(what)
        source = Path(input_dir)
        out = source / EXPORT_DIR
        written: List[Path] = []
        if target == ExportTarget.STUDY:
            written.append(CsvExporter.export_csv(ReportWriter.load_study(source), out / "study.csv"))
        else:
            run_config, gamma2 = ReportWriter.load_run(source)
            grid, s = gamma2.grid, run_config.problem.s
            if target == ExportTarget.FIELD:
                written.append(CsvExporter.export_csv(gamma2.gamma_sqrt, out / "gamma2_sqrt.csv", s=s))
                written.append(CsvExporter.export_csv(gamma2.gamma, out / "gamma2.csv", s=s))
                written.append(CsvExporter.export_csv(gamma2.deviation, out / "m2.csv", s=s))
            else:
                cfg, params = run_config.window_config(), run_config.params()
                reference = DNBuilder.dn_matrix(ConductivityField.unit(grid), cfg, params, grid)
                written.append(CsvExporter.export_csv(reference, out / "dn_gamma1.csv"))
                written.append(CsvExporter.export_csv(DNBuilder.dn_matrix(gamma2, cfg, params, grid), out / "dn_gamma2.csv"))
        return CommandResult(
            exit_code=ExitCodes.SUCCESS,
            output="\n".join(str(path) for path in written),
            artifacts=[str(path) for path in written],
        )

    @classmethod
    def run_command(cls, command: CliCommand, config: Optional[RunConfig] = None, **options: Any) -> CommandResult:
        """
        Run one command. Module errors propagate to the caller, which maps them to exit codes.
        """
        handlers: Dict[CliCommand, Callable[..., CommandResult]] = {
            CliCommand.CONSTRUCT: cls.construct,
            CliCommand.VERIFY: cls.verify,
            CliCommand.SWEEP: cls.sweep,
            CliCommand.ORACLE_CHECK: cls.oracle_check,
            CliCommand.EXPORT: cls.export,
        }
        handler = handlers.get(command)
        if not handler:
            raise InvalidArgumentError(f"Unsupported command: {command}")
        set_context_values(command=command.value, run_id=config.run_id() if config else None)
        AppLogger.log_info(f"running {command.value}")
        result = handler(config, **options)
        AppLogger.log_info(f"{command.value} finished with exit code {result.exit_code.value}")
        return result
