from typing import Dict

from fraccond_core.services.geometry.dataclass.main import IntervalSet, WindowConfig
from fraccond_core.services.geometry.interval_arithmetic import IntervalArithmetic
from fraccond_core.utils.app_logger import AppLogger
from fraccond_core.utils.constants.constants import (
    EPSILON_DILATION_COUNT,
    EPSILON_SAFETY_FACTOR,
    OMEGA_MIN_GAP,
)
from fraccond_core.utils.exceptions import ConstructionInfeasibleError


class WindowSelector:
    """
    Picks the auxiliary set omega and the radius epsilon used by the counterexample construction.
    """

    @classmethod
    def choose_omega(cls, cfg: WindowConfig, min_gap: float = OMEGA_MIN_GAP) -> IntervalSet:
        obstacles = cfg.omega_dom.union(cfg.windows)
        gaps = obstacles.gaps_within(*cfg.box)
        scale = cfg.box[1] - cfg.box[0]
        best = None
        for gap_lo, gap_hi in gaps:
            # leftmost wins ties
            if best is None or (gap_hi - gap_lo) > (best[1] - best[0]) + 1e-12 * scale:
                best = (gap_lo, gap_hi)
        if best is None or best[1] - best[0] < min_gap:
            raise ConstructionInfeasibleError(
                f"no gap of length >= {min_gap} between domain, windows and box edges",
                gaps=gaps,
            )
        third = (best[1] - best[0]) / 3.0
        omega = IntervalSet.of((best[0] + third, best[1] - third))
        AppLogger.log_debug(f"Chose omega {omega.as_lists()} from gaps {gaps}")
        return omega

    @classmethod
    def admissible_distances(cls, cfg: WindowConfig, omega: IntervalSet) -> Dict[str, float]:
        windows = cfg.windows
        distances = {
            "domain_to_windows": IntervalArithmetic.distance(cfg.omega_dom, windows),
        }
        region = cfg.omega_dom
        if not omega.is_empty:
            distances["domain_to_omega_half"] = IntervalArithmetic.distance(cfg.omega_dom, omega) / 2.0
            distances["omega_to_windows"] = IntervalArithmetic.distance(omega, windows)
            region = region.union(omega)
        distances["to_box_boundary"] = IntervalArithmetic.distance_to_box_boundary(region, *cfg.box)
        return distances

    @classmethod
    def select_epsilon(cls, cfg: WindowConfig, omega: IntervalSet) -> float:
        """
        Return 0.9/5 of the smallest admissible distance.

        An empty omega drops the omega terms, which is only used for degenerate runs.
        """
        distances = cls.admissible_distances(cfg, omega)
        blocking = [name for name, value in distances.items() if value <= 0.0]
        if blocking:
            raise ConstructionInfeasibleError(f"zero separation for {', '.join(blocking)}", distances=distances)
        epsilon = EPSILON_SAFETY_FACTOR / EPSILON_DILATION_COUNT * min(distances.values())
        if not cls.separation_holds(cfg, omega, epsilon):
            raise ConstructionInfeasibleError(
                f"epsilon={epsilon} does not separate the dilated sets", distances=distances
            )
        AppLogger.log_debug(f"Selected epsilon {epsilon} from {distances}")
        return epsilon

    @classmethod
    def separation_holds(cls, cfg: WindowConfig, omega: IntervalSet, epsilon: float) -> bool:
        """
        Check that the 5*epsilon neighborhoods of domain and omega are disjoint and avoid both windows.
        """
        radius = EPSILON_DILATION_COUNT * epsilon
        windows = cfg.windows
        dilated_domain = IntervalArithmetic.dilate(cfg.omega_dom, radius)
        if dilated_domain.intersects(windows):
            return False
        if omega.is_empty:
            return True
        dilated_omega = IntervalArithmetic.dilate(omega, radius)
        return not dilated_omega.intersects(windows) and not dilated_omega.intersects(dilated_domain)
