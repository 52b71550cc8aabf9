from typing import Any, Iterable, List, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from fraccond_core.utils.exceptions import InvalidArgumentError

Interval = Tuple[float, float]


class IntervalSet(BaseModel):
    """Finite union of closed intervals, kept sorted and merged.

    Overlapping and touching inputs are merged on construction, so two sets with the same
    point content always have the same representation.
    """

    model_config = ConfigDict(frozen=True)

    intervals: Tuple[Interval, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        raw = data.get("intervals", ()) if isinstance(data, dict) else data
        pairs: List[Interval] = []
        for pair in raw or ():
            lo, hi = (float(value) for value in pair)
            if not np.isfinite(lo) or not np.isfinite(hi):
                raise InvalidArgumentError(f"interval endpoints must be finite, got ({lo}, {hi})")
            if not lo < hi:
                raise InvalidArgumentError(f"interval must satisfy lo < hi, got ({lo}, {hi})")
            pairs.append((lo, hi))
        pairs.sort()
        merged: List[Interval] = []
        for lo, hi in pairs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return {"intervals": tuple(merged)}

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(intervals=())

    @classmethod
    def of(cls, *pairs: Iterable[float]) -> "IntervalSet":
        return cls(intervals=tuple(tuple(pair) for pair in pairs))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def lower(self) -> float:
        self._ensure_nonempty("lower")
        return self.intervals[0][0]

    @property
    def upper(self) -> float:
        self._ensure_nonempty("upper")
        return self.intervals[-1][1]

    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    def diameter(self) -> float:
        return 0.0 if self.is_empty else self.upper - self.lower

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(intervals=self.intervals + other.intervals)

    def intersects(self, other: "IntervalSet") -> bool:
        return any(lo < o_hi and o_lo < hi for lo, hi in self.intervals for o_lo, o_hi in other.intervals)

    def scaled(self, factor: float) -> "IntervalSet":
        if factor <= 0:
            raise InvalidArgumentError(f"scale factor must be positive, got {factor}")
        return IntervalSet(intervals=tuple((lo * factor, hi * factor) for lo, hi in self.intervals))

    def gaps_within(self, lo: float, hi: float) -> List[Interval]:
        """Components of [lo, hi] minus this set, in increasing order."""
        gaps: List[Interval] = []
        cursor = lo
        for s_lo, s_hi in self.intervals:
            if s_hi <= lo or s_lo >= hi:
                continue
            if s_lo > cursor:
                gaps.append((cursor, s_lo))
            cursor = max(cursor, s_hi)
        if cursor < hi:
            gaps.append((cursor, hi))
        return gaps

    def contains_points(self, points: NDArray[np.float64]) -> NDArray[np.bool_]:
        mask = np.zeros(points.shape, dtype=bool)
        for lo, hi in self.intervals:
            mask |= (points >= lo) & (points <= hi)
        return mask

    def contains_set(self, other: "IntervalSet", slack: float = 0.0) -> bool:
        """True when every component of other lies strictly inside one component of this set."""
        return all(
            any(lo + slack < o_lo and o_hi < hi - slack for lo, hi in self.intervals) for o_lo, o_hi in other.intervals
        )

    def as_lists(self) -> List[List[float]]:
        return [[lo, hi] for lo, hi in self.intervals]

    def _ensure_nonempty(self, what: str) -> None:
        if self.is_empty:
            raise InvalidArgumentError(f"{what} is undefined for the empty interval set")


class WindowConfig(BaseModel):
    """Domain, measurement windows and computational box.

    allow_overlap switches between counterexample mode (disjoint windows) and detectability
    mode, where W1 and W2 may overlap.
    """

    model_config = ConfigDict(frozen=True)

    omega_dom: IntervalSet
    w1: IntervalSet
    w2: IntervalSet
    box: Tuple[float, float]
    allow_overlap: bool = False

    @model_validator(mode="after")
    def validate_windows(self) -> "WindowConfig":
        box_lo, box_hi = self.box
        if not box_lo < box_hi:
            raise InvalidArgumentError(f"box must satisfy lo < hi, got {self.box}")
        box_set = IntervalSet.of(self.box)
        for name, window in (("w1", self.w1), ("w2", self.w2)):
            if window.is_empty:
                raise InvalidArgumentError(f"{name} must be nonempty")
            if window.intersects(self.omega_dom):
                raise InvalidArgumentError(f"{name} must lie in the exterior of the closure of the domain")
            if not box_set.contains_set(window):
                raise InvalidArgumentError(f"closure of {name} must lie in the interior of the box {self.box}")
        if not self.omega_dom.is_empty and not box_set.contains_set(self.omega_dom):
            raise InvalidArgumentError(f"domain must lie in the interior of the box {self.box}")
        if not self.allow_overlap and self.w1.intersects(self.w2):
            raise InvalidArgumentError("w1 and w2 must be disjoint in counterexample mode")
        return self

    @property
    def windows(self) -> IntervalSet:
        return self.w1.union(self.w2)

    def with_windows(self, w1: IntervalSet, w2: IntervalSet, allow_overlap: bool) -> "WindowConfig":
        return WindowConfig(omega_dom=self.omega_dom, w1=w1, w2=w2, box=self.box, allow_overlap=allow_overlap)

    def scaled(self, factor: float) -> "WindowConfig":
        return WindowConfig(
            omega_dom=self.omega_dom.scaled(factor),
            w1=self.w1.scaled(factor),
            w2=self.w2.scaled(factor),
            box=(self.box[0] * factor, self.box[1] * factor),
            allow_overlap=self.allow_overlap,
        )
