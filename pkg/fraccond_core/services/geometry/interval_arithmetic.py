from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.utils.exceptions import InvalidArgumentError


class IntervalArithmetic:
    """
    Set arithmetic on finite unions of intervals.
    """

    @classmethod
    def dilate(cls, interval_set: IntervalSet, delta: float) -> IntervalSet:
        """
        Return the delta-neighborhood {x : dist(x, S) < delta} of the set.

        Components whose neighborhoods meet are merged by the canonical IntervalSet form.
        """
        if not delta > 0:
            raise InvalidArgumentError(f"dilation radius must be positive, got {delta}")
        return IntervalSet(intervals=tuple((lo - delta, hi + delta) for lo, hi in interval_set.intervals))

    @classmethod
    def distance(cls, first: IntervalSet, second: IntervalSet) -> float:
        """
        Return inf |x - y| over x in first and y in second, zero when the closures meet.
        """
        if first.is_empty or second.is_empty:
            raise InvalidArgumentError("distance is undefined for an empty interval set")
        return float(
            min(
                max(0.0, o_lo - hi, lo - o_hi)
                for lo, hi in first.intervals
                for o_lo, o_hi in second.intervals
            )
        )

    @classmethod
    def distance_to_box_boundary(cls, interval_set: IntervalSet, box_lo: float, box_hi: float) -> float:
        if interval_set.is_empty:
            raise InvalidArgumentError("distance is undefined for an empty interval set")
        return float(max(0.0, min(interval_set.lower - box_lo, box_hi - interval_set.upper)))
