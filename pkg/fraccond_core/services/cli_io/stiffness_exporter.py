from pathlib import Path
from typing import Tuple, Union

import numpy as np
from numpy.typing import NDArray

from fraccond_core.services.assembly.dataclass.main import StiffnessMatrix
from fraccond_core.services.cli_io.csv_exporter import CsvExporter, format_number
from fraccond_core.utils.constants.constants import STIFFNESS_MAGIC
from fraccond_core.utils.exceptions import InvalidArgumentError

HEADER_DTYPE = np.dtype([("magic", "S8"), ("n_nodes", "<u8"), ("s", "<f8"), ("h", "<f8")])


class StiffnessExporter:
    """
    Binary dump of a stiffness matrix: a 32-byte header (magic, n_nodes, s, h) followed by the
    row-major little-endian float64 entries.
    """

    @classmethod
    def write_binary(cls, stiffness: StiffnessMatrix, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        header = np.array([(STIFFNESS_MAGIC, stiffness.size, stiffness.params.s, stiffness.grid.h)], dtype=HEADER_DTYPE)
        payload = np.ascontiguousarray(stiffness.matrix, dtype="<f8")
        with target.open("wb") as handle:
            handle.write(header.tobytes())
            handle.write(payload.tobytes(order="C"))
        return target

    @classmethod
    def read_binary(cls, path: Union[str, Path]) -> Tuple[NDArray[np.float64], float, float]:
        """Return (matrix, s, h)."""
        data = Path(path).read_bytes()
        if len(data) < HEADER_DTYPE.itemsize:
            raise InvalidArgumentError(f"{path} is too short for a stiffness header")
        header = np.frombuffer(data[: HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
        if bytes(header["magic"]) != STIFFNESS_MAGIC:
            raise InvalidArgumentError(f"{path} does not start with the stiffness magic")
        n = int(header["n_nodes"])
        expected = HEADER_DTYPE.itemsize + 8 * n * n
        if len(data) != expected:
            raise InvalidArgumentError(f"{path} holds {len(data)} bytes, expected {expected} for n={n}")
        matrix = np.frombuffer(data[HEADER_DTYPE.itemsize :], dtype="<f8").reshape(n, n).astype(np.float64)
        return matrix, float(header["s"]), float(header["h"])

    @classmethod
    def write_debug_csv(cls, stiffness: StiffnessMatrix, path: Union[str, Path]) -> Path:
        grid = stiffness.grid
        metadata = {
            "kind": "stiffness",
            "s": format_number(stiffness.params.s),
            "h": format_number(grid.h),
            "box": f"{format_number(grid.lo)},{format_number(grid.hi)}",
            "n_nodes": str(grid.n_nodes),
        }
        header = ["row"] + [str(j) for j in range(stiffness.size)]
        rows = [[str(i)] + [format_number(v) for v in row] for i, row in enumerate(stiffness.matrix)]
        return CsvExporter.write_table(Path(path), metadata, header, rows)
