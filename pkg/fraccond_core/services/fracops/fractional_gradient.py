import math

import numpy as np
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import GridFunction
from fraccond_core.services.fracops.dataclass.main import FracParams
from fraccond_core.utils.exceptions import InvalidArgumentError


class FractionalGradient:
    @classmethod
    def frac_gradient_eval(cls, u: GridFunction, x: float, y: float, params: FracParams) -> NDArray[np.float64]:
        """
        Two-point fractional gradient sqrt(C/2) (u(x) - u(y)) (x - y) / |x - y|^{n/2 + s + 1}.

        u is evaluated by piecewise-linear interpolation and keeps its edge value outside the box.
        Swapping x and y flips both factors, so the value is symmetric.
        """
        if x == y:
            raise InvalidArgumentError("fractional gradient is undefined on the diagonal x == y")
        values = u.evaluate([x, y])
        separation = abs(x - y)
        scale = math.sqrt(0.5 * params.c_ns) * (values[0] - values[1]) / separation ** (params.n / 2.0 + params.s + 1.0)
        return np.array([scale * (x - y)])
