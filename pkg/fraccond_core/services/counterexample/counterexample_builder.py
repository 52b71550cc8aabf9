from typing import Any, Dict, List, Sequence, Type

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.counterexample.dataclass.main import CounterexampleReport
from fraccond_core.services.counterexample.runners.base_construction_runner import BaseConstructionRunner
from fraccond_core.services.counterexample.runners.bounded.runner import BoundedConstructionRunner
from fraccond_core.services.counterexample.runners.scaled.runner import ScaledConstructionRunner
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.services.geometry.dataclass.main import WindowConfig
from fraccond_core.utils.constants.enums import ConstructionMode
from fraccond_core.utils.exceptions import InvalidArgumentError


class CounterexampleBuilder:
    """
    Dispatches a construction request to the runner of its mode.
    """

    _runners: Dict[ConstructionMode, Type[BaseConstructionRunner]] = {
        ConstructionMode.BOUNDED: BoundedConstructionRunner,
        ConstructionMode.SCALED: ScaledConstructionRunner,
    }

    @classmethod
    def build(
        cls,
        mode: ConstructionMode,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        **kwargs: Any,
    ) -> CounterexampleReport:
        runner = cls._runners.get(mode)
        if not runner:
            raise InvalidArgumentError(f"Unsupported construction mode: {mode}")
        if runner is ScaledConstructionRunner:
            return ScaledConstructionRunner.build_scaled(cfg, params, grid, **kwargs)
        return runner.build(cfg, params, grid, **kwargs)

    @classmethod
    def build_bounded(cls, cfg: WindowConfig, params: FracParams, grid: UniformGrid, **kwargs: Any) -> CounterexampleReport:
        return cls.build(ConstructionMode.BOUNDED, cfg, params, grid, **kwargs)

    @classmethod
    def build_scaled(cls, cfg: WindowConfig, params: FracParams, grid: UniformGrid, **kwargs: Any) -> CounterexampleReport:
        return cls.build(ConstructionMode.SCALED, cfg, params, grid, **kwargs)

    @classmethod
    def build_family(
        cls,
        mode: ConstructionMode,
        cfg: WindowConfig,
        params: FracParams,
        grid: UniformGrid,
        scales: Sequence[float],
        **kwargs: Any,
    ) -> List[CounterexampleReport]:
        """One report per cutoff scale t; in bounded mode the deviation is t times the t = 1 deviation."""
        return [cls.build(mode, cfg, params, grid, eta_scale=scale, **kwargs) for scale in scales]
