from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import orjson
import yaml

from fraccond_core.services.assembly.dataclass.main import ConductivityField
from fraccond_core.services.cli_io.config_loader import ConfigLoader
from fraccond_core.services.cli_io.csv_exporter import CsvExporter
from fraccond_core.services.cli_io.dataclass.main import RunConfig
from fraccond_core.services.counterexample.dataclass.main import ConvergenceReport, CounterexampleReport
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.exceptions import InvalidArgumentError

CONFIG_FILE = "config.yaml"
REPORT_TEXT_FILE = "report.txt"
REPORT_JSON_FILE = "report.json"
GAMMA_SQRT_FILE = "gamma2_sqrt.csv"
DEVIATION_FILE = "m2.csv"
CUTOFF_FILE = "eta.csv"
M_TILDE_FILE = "m_tilde.csv"
STUDY_CSV_FILE = "study.csv"
STUDY_JSON_FILE = "study.json"
FAMILY_DIR = "family"


class ReportWriter:
    """
    Run directories: the resolved config, a structured text report, its JSON sidecar and CSV fields.
    """

    @classmethod
    def render_text(cls, mapping: Dict[str, Any], prefix: str = "") -> List[str]:
        """Flatten nested mappings into 'key: value' lines in insertion order."""
        lines: List[str] = []
        for key, value in mapping.items():
            name = f"{prefix}{key}"
            if isinstance(value, dict):
                lines.extend(cls.render_text(value, prefix=f"{name}."))
            elif isinstance(value, float):
                lines.append(f"{name}: {value:.17g}")
            else:
                lines.append(f"{name}: {value}")
        return lines

    @classmethod
    def write_json(cls, path: Path, payload: Dict[str, Any]) -> Path:
        path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY))
        return path

    @classmethod
    def write_report(cls, run_dir: Path, config: RunConfig, command: str, body: Dict[str, Any]) -> None:
        header = {"command": command, "run_id": config.run_id()}
        lines = cls.render_text(header) + cls.render_text(body) + cls.render_text(config.resolved(), prefix="config.")
        (run_dir / REPORT_TEXT_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")
        cls.write_json(run_dir / REPORT_JSON_FILE, {**header, "report": body, "config": config.resolved()})

    @classmethod
    def prepare(cls, config: RunConfig, run_dir: Optional[Path] = None) -> Path:
        target = run_dir or Path(config.output.output_dir) / config.run_id()
        target.mkdir(parents=True, exist_ok=True)
        with (target / CONFIG_FILE).open("w", encoding="utf-8") as handle:
            yaml.safe_dump(config.resolved(), handle, sort_keys=False)
        return target

    @classmethod
    def write_construction(
        cls,
        config: RunConfig,
        report: CounterexampleReport,
        family: Sequence[CounterexampleReport] = (),
        run_dir: Optional[Path] = None,
    ) -> Path:
        target = cls.prepare(config, run_dir)
        s = config.problem.s
        CsvExporter.export_csv(report.gamma2.gamma_sqrt, target / GAMMA_SQRT_FILE, s=s)
        CsvExporter.export_csv(report.deviation, target / DEVIATION_FILE, s=s)
        CsvExporter.export_csv(report.cutoff.eta, target / CUTOFF_FILE, s=s)
        CsvExporter.export_csv(report.m_tilde, target / M_TILDE_FILE, s=s)
        body = report.summary()
        if family:
            body["family"] = {}
            for index, member in enumerate(family):
                CsvExporter.export_csv(member.gamma2.gamma_sqrt, target / FAMILY_DIR / f"gamma2_sqrt_{index}.csv", s=s)
                body["family"][str(index)] = {
                    "eta_scale": member.eta_scale,
                    "status": member.status.value,
                    "sup_norm_m2": member.sup_norm,
                }
        cls.write_report(target, config, "construct", body)
        AppLogger.log_info(f"construction artifacts written to {target}")
        return target

    @classmethod
    def write_study(cls, config: RunConfig, study: ConvergenceReport, run_dir: Optional[Path] = None) -> Path:
        target = cls.prepare(config, run_dir)
        CsvExporter.export_csv(study, target / STUDY_CSV_FILE)
        (target / STUDY_JSON_FILE).write_text(study.model_dump_json(indent=2), encoding="utf-8")
        body = {
            "s": study.s,
            "fitted_slope": study.fitted_slope,
            "final_separation_ratio": study.final_separation_ratio,
            "rows": {str(row.n_nodes - 1): row.model_dump(mode="json") for row in study.rows},
        }
        cls.write_report(target, config, "sweep", body)
        AppLogger.log_info(f"study artifacts written to {target}")
        return target

    @classmethod
    def load_run(cls, run_dir: Union[str, Path]) -> Tuple[RunConfig, ConductivityField]:
        """Read back the config and Gamma_2 of a construct run directory."""
        source = Path(run_dir)
        if not (source / GAMMA_SQRT_FILE).is_file():
            raise InvalidArgumentError(f"{source} is not a construct run directory (missing {GAMMA_SQRT_FILE})")
        config = ConfigLoader.load_config(source / CONFIG_FILE)
        gamma_sqrt, _ = CsvExporter.read_grid_function(source / GAMMA_SQRT_FILE)
        conductivity = ConductivityField(gamma_sqrt=gamma_sqrt, alpha=float(np.min(gamma_sqrt.values)))
        return config, conductivity

    @classmethod
    def load_study(cls, run_dir: Union[str, Path]) -> ConvergenceReport:
        source = Path(run_dir) / STUDY_JSON_FILE
        if not source.is_file():
            raise InvalidArgumentError(f"{run_dir} is not a sweep run directory (missing {STUDY_JSON_FILE})")
        return ConvergenceReport.model_validate_json(source.read_text(encoding="utf-8"))
