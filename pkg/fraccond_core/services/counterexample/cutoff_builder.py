import numpy as np

from fraccond_core.models.dto.grid import GridFunction, UniformGrid
from fraccond_core.services.counterexample.dataclass.main import CutoffSpec
from fraccond_core.services.fracops.dataclass.main import MollifierSpec
from fraccond_core.services.fracops.mollifier import Mollifier
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.services.geometry.interval_arithmetic import IntervalArithmetic
from fraccond_core.utils.constants.constants import (
    CUTOFF_INDICATOR_DILATION,
    CUTOFF_INNER_DILATION,
    CUTOFF_OUTER_DILATION,
)
from fraccond_core.utils.exceptions import ConstructionInfeasibleError, InvalidArgumentError


class CutoffBuilder:
    @classmethod
    def build_cutoff(cls, omega: IntervalSet, epsilon: float, grid: UniformGrid, rho: MollifierSpec) -> CutoffSpec:
        """
        eta = rho_{eps/2} * indicator(omega_{2.5 eps}), so eta = 1 on omega_{2 eps} and vanishes outside omega_{3 eps}.

        rho is the radius-eps/2 mollifier tabulated on grid.
        """
        if not epsilon > 0:
            raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
        if abs(rho.epsilon - 0.5 * epsilon) > 1e-12 * epsilon:
            raise InvalidArgumentError(f"cutoff needs the radius {0.5 * epsilon} mollifier, got {rho.epsilon}")
        if omega.is_empty:
            empty = IntervalSet.empty()
            return CutoffSpec(eta=GridFunction.zeros(grid), inner_set=empty, outer_set=empty)
        outer = IntervalArithmetic.dilate(omega, CUTOFF_OUTER_DILATION * epsilon)
        usable = IntervalSet.of((grid.lo + grid.margin_band, grid.hi - grid.margin_band))
        if not usable.contains_set(outer):
            raise ConstructionInfeasibleError(
                f"{CUTOFF_OUTER_DILATION} eps-neighbourhood {outer.as_lists()} of omega leaves the box minus its margin"
            )
        indicator_set = IntervalArithmetic.dilate(omega, CUTOFF_INDICATOR_DILATION * epsilon)
        indicator = GridFunction(grid=grid, values=indicator_set.contains_points(grid.nodes).astype(np.float64))
        smoothed = Mollifier.mollify(indicator, rho)
        inner = IntervalArithmetic.dilate(omega, CUTOFF_INNER_DILATION * epsilon)
        values = np.minimum(smoothed.values, 1.0)
        # the stencil of every inner node sees only ones; remove the rounding of the weight sum
        values[inner.contains_points(grid.nodes)] = 1.0
        return CutoffSpec(eta=smoothed.with_values(values), inner_set=inner, outer_set=outer)
