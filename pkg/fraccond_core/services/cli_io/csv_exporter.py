import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.counterexample.dataclass.main import ConvergenceReport
from fraccond_core.services.dn.dataclass.main import DNMatrix
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import CSV_SIGNIFICANT_DIGITS
from fraccond_core.utils.exceptions import InvalidArgumentError

Exportable = Union[GridFunction, DNMatrix, ConvergenceReport]


def format_number(value: float) -> str:
    return f"{float(value):.{CSV_SIGNIFICANT_DIGITS}g}"


class CsvTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    metadata: Dict[str, str]
    header: List[str]
    rows: List[List[str]]

    def column(self, name: str) -> NDArray[np.float64]:
        index = self.header.index(name)
        return np.array([float(row[index]) for row in self.rows], dtype=np.float64)

    def numeric(self, start: int = 0) -> NDArray[np.float64]:
        return np.array([[float(cell) for cell in row[start:]] for row in self.rows], dtype=np.float64)


class CsvExporter:
    """
    CSV artifacts: one '#' metadata line, a header line, then rows with 17 significant digits.
    """

    @classmethod
    def write_table(cls, path: Path, metadata: Dict[str, str], header: Sequence[str], rows: Sequence[Sequence[str]]) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            handle.write("# " + "; ".join(f"{key}={value}" for key, value in metadata.items()) + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        AppLogger.log_debug(f"wrote {len(rows)} rows to {path}")
        return path

    @classmethod
    def _grid_metadata(cls, grid: UniformGrid, s: Optional[float]) -> Dict[str, str]:
        return {
            "s": "" if s is None else format_number(s),
            "h": format_number(grid.h),
            "box": f"{format_number(grid.lo)},{format_number(grid.hi)}",
            "n_nodes": str(grid.n_nodes),
        }

    @classmethod
    def export_grid_function(cls, u: GridFunction, path: Path, s: Optional[float] = None) -> Path:
        metadata = {"kind": "grid_function", **cls._grid_metadata(u.grid, s)}
        rows = [[format_number(x), format_number(v)] for x, v in zip(u.grid.nodes, u.values)]
        return cls.write_table(path, metadata, ["node", "value"], rows)

    @classmethod
    def export_dn_matrix(cls, dn: DNMatrix, path: Path) -> Path:
        meta = dn.metadata
        metadata = {"kind": "dn_matrix", "gamma_hash": meta.gamma_hash, **cls._grid_metadata(meta.grid, meta.s)}
        header = ["test_node"] + [format_number(x) for x in dn.source_coordinates()]
        rows = [
            [format_number(x)] + [format_number(v) for v in entries]
            for x, entries in zip(dn.test_coordinates(), dn.entries)
        ]
        return cls.write_table(path, metadata, header, rows)

    @classmethod
    def export_convergence_report(cls, report: ConvergenceReport, path: Path) -> Path:
        metadata = {
            "kind": "convergence_study",
            "s": format_number(report.s),
            "fitted_slope": format_number(report.fitted_slope),
        }
        header = ["n_nodes", "h", "disjoint_difference", "overlap_difference", "separation_ratio", "identity_residual", "status"]
        rows = [
            [
                str(row.n_nodes),
                format_number(row.h),
                format_number(row.disjoint_difference),
                format_number(row.overlap_difference),
                format_number(row.separation_ratio),
                format_number(row.identity_residual),
                row.status.value,
            ]
            for row in report.rows
        ]
        return cls.write_table(path, metadata, header, rows)

    @classmethod
    def export_csv(cls, obj: Exportable, path: Union[str, Path], s: Optional[float] = None) -> Path:
        """
        Write a grid function, DN matrix or convergence report as CSV.

        Raises:
            InvalidArgumentError: for unsupported objects.
            OSError: when the path is not writable.
        """
        target = Path(path)
        if isinstance(obj, GridFunction):
            return cls.export_grid_function(obj, target, s)
        if isinstance(obj, DNMatrix):
            return cls.export_dn_matrix(obj, target)
        if isinstance(obj, ConvergenceReport):
            return cls.export_convergence_report(obj, target)
        raise InvalidArgumentError(f"cannot export {type(obj).__name__} as CSV")

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> CsvTable:
        metadata: Dict[str, str] = {}
        with Path(path).open(newline="", encoding="utf-8") as handle:
            first = handle.readline()
            if first.startswith("#"):
                for item in first[1:].strip().split("; "):
                    key, _, value = item.partition("=")
                    metadata[key.strip()] = value
            else:
                handle.seek(0)
            reader = csv.reader(handle)
            header = next(reader, [])
            rows = [row for row in reader if row]
        return CsvTable(metadata=metadata, header=header, rows=rows)

    @classmethod
    def read_grid_function(cls, path: Union[str, Path]) -> Tuple[GridFunction, Optional[float]]:
        """Rebuild a grid function and its exponent (None when not recorded) from an exported CSV."""
        table = cls.read_csv(path)
        if table.metadata.get("kind") != "grid_function":
            raise InvalidArgumentError(f"{path} does not hold a grid function")
        lo, hi = (float(value) for value in table.metadata["box"].split(","))
        grid = UniformGrid(lo=lo, hi=hi, n_nodes=len(table.rows))
        s = table.metadata.get("s")
        return GridFunction(grid=grid, values=table.column("value")), float(s) if s else None
