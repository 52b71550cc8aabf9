"""
Unit tests for IntervalSet and IntervalArithmetic.
"""

import numpy as np
import pytest

from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.services.geometry.interval_arithmetic import IntervalArithmetic
from fraccond_core.utils.exceptions import InvalidArgumentError


class TestIntervalSet:
    """Test cases for the canonical interval union."""

    @pytest.mark.unit
    def test_canonical_form_merges_and_sorts(self):
        """Overlapping and touching components collapse into one."""
        merged = IntervalSet.of((3.0, 4.0), (0.0, 1.0), (0.5, 2.0), (2.0, 2.5))
        assert merged.intervals == ((0.0, 2.5), (3.0, 4.0))

    @pytest.mark.unit
    def test_rejects_degenerate_interval(self):
        with pytest.raises(InvalidArgumentError):
            IntervalSet.of((1.0, 1.0))

    @pytest.mark.unit
    def test_rejects_infinite_endpoint(self):
        with pytest.raises(InvalidArgumentError):
            IntervalSet.of((0.0, float("inf")))

    @pytest.mark.unit
    def test_gaps_within_box(self):
        obstacles = IntervalSet.of((-2.0, -1.5), (-1.0, 1.0), (1.5, 2.0))
        assert obstacles.gaps_within(-4.0, 4.0) == [(-4.0, -2.0), (-1.5, -1.0), (1.0, 1.5), (2.0, 4.0)]

    @pytest.mark.unit
    def test_contains_points_is_closed(self):
        points = np.array([-0.1, 0.0, 0.5, 1.0, 1.1])
        assert IntervalSet.of((0.0, 1.0)).contains_points(points).tolist() == [False, True, True, True, False]

    @pytest.mark.unit
    def test_contains_set_is_strict(self):
        """Containment needs every component strictly inside the host."""
        host = IntervalSet.of((-4.0, 4.0))
        assert host.contains_set(IntervalSet.of((-1.0, 1.0)))
        assert not host.contains_set(IntervalSet.of((-4.0, 1.0)))

    @pytest.mark.unit
    def test_lower_of_empty_set_raises(self):
        with pytest.raises(InvalidArgumentError):
            _ = IntervalSet.empty().lower


class TestIntervalArithmetic:
    """Test cases for dilation and distances."""

    @pytest.mark.unit
    def test_dilate_merges_close_components(self):
        dilated = IntervalArithmetic.dilate(IntervalSet.of((0.0, 1.0), (1.2, 2.0)), 0.1)
        assert dilated.intervals == ((-0.1, 2.1),)

    @pytest.mark.unit
    def test_dilate_rejects_non_positive_radius(self):
        with pytest.raises(InvalidArgumentError):
            IntervalArithmetic.dilate(IntervalSet.of((0.0, 1.0)), 0.0)

    @pytest.mark.unit
    def test_distance_between_sets(self):
        first = IntervalSet.of((-1.0, 1.0))
        assert IntervalArithmetic.distance(first, IntervalSet.of((1.5, 2.0), (-2.0, -1.8))) == pytest.approx(0.5)
        assert IntervalArithmetic.distance(first, IntervalSet.of((0.5, 3.0))) == 0.0

    @pytest.mark.unit
    def test_distance_to_empty_set_raises(self):
        with pytest.raises(InvalidArgumentError):
            IntervalArithmetic.distance(IntervalSet.of((0.0, 1.0)), IntervalSet.empty())

    @pytest.mark.unit
    def test_distance_to_box_boundary(self):
        region = IntervalSet.of((-1.0, 1.0), (-10.0 / 3.0, -8.0 / 3.0))
        assert IntervalArithmetic.distance_to_box_boundary(region, -4.0, 4.0) == pytest.approx(2.0 / 3.0)
