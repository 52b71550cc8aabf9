import numpy as np

from fraccond_core.services.dn.dataclass.main import DNComparisonReport, DNMatrix
from fraccond_core.utils.exceptions import InvalidArgumentError


class DNComparator:
    @classmethod
    def compare_dn(cls, m1: DNMatrix, m2: DNMatrix) -> DNComparisonReport:
        """
        Difference of two partial DN matrices on the same grid, exponent and windows.

        The relative Frobenius difference is normalized by the larger of the two norms and is
        zero when both matrices vanish.
        """
        if m1.shape != m2.shape:
            raise InvalidArgumentError(f"DN shapes differ: {m1.shape} vs {m2.shape}")
        if not m1.metadata.comparable_with(m2.metadata):
            raise InvalidArgumentError("DN metadata differ (grid, exponent or windows)")
        if not np.array_equal(m1.source_nodes, m2.source_nodes) or not np.array_equal(m1.test_nodes, m2.test_nodes):
            raise InvalidArgumentError("DN source or test nodes differ")
        difference = m2.entries - m1.entries
        magnitude = np.abs(difference)
        flat = int(np.argmax(magnitude)) if magnitude.size else 0
        row, column = np.unravel_index(flat, magnitude.shape) if magnitude.size else (0, 0)
        scale = max(float(np.linalg.norm(m1.entries)), float(np.linalg.norm(m2.entries)))
        relative = float(np.linalg.norm(difference)) / scale if scale > 0.0 else 0.0
        return DNComparisonReport(
            max_abs_diff=float(magnitude[row, column]) if magnitude.size else 0.0,
            argmax=(int(row), int(column)),
            relative_frobenius=relative,
            difference=difference,
        )
