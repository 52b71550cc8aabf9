from typing import Optional, Tuple

import numpy as np

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.counterexample.dataclass.main import ScalingRecord
from fraccond_core.services.counterexample.runners.base_construction_runner import BaseConstructionRunner
from fraccond_core.services.fracops.dataclass.main import MollifierSpec
from fraccond_core.utils.constants.constants import INTERMEDIATE_DILATION
from fraccond_core.utils.constants.enums import ConstructionMode


class BoundedConstructionRunner(BaseConstructionRunner):
    """
    Bounded-domain construction: m_2 is the mollified s-harmonic extension itself, Gamma_2 = 1 + m_2 >= 1.
    """

    mode = ConstructionMode.BOUNDED
    solve_dilation = INTERMEDIATE_DILATION

    @classmethod
    def rescale(
        cls,
        mollified: GridFunction,
        m_tilde: GridFunction,
        epsilon: float,
        rho: MollifierSpec,
    ) -> Tuple[GridFunction, Optional[ScalingRecord]]:
        return mollified, None

    @classmethod
    def extra_flags(cls, deviation: GridFunction, tol: float) -> Tuple[bool, bool]:
        gamma = (1.0 + deviation.values) ** 2
        return bool(np.isfinite(deviation.sup_norm())), bool(float(np.min(gamma)) >= 1.0 - tol)
