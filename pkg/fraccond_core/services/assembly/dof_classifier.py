from typing import Tuple

import numpy as np
from numpy.typing import NDArray

from fraccond_core.models.dto.grid import UniformGrid
from fraccond_core.services.geometry.dataclass.main import IntervalSet
from fraccond_core.utils.constants.constants import CONTAINMENT_SLACK

IndexPair = Tuple[NDArray[np.int64], NDArray[np.int64]]


class DofClassifier:
    @classmethod
    def interior_mask(cls, grid: UniformGrid, omega_dom: IntervalSet) -> NDArray[np.bool_]:
        """Nodes whose hat support [x - h, x + h] lies strictly inside one component of omega_dom."""
        nodes = grid.nodes
        h = grid.h
        slack = CONTAINMENT_SLACK * h
        mask = np.zeros(grid.n_nodes, dtype=bool)
        for lo, hi in omega_dom.intervals:
            mask |= (nodes - h > lo + slack) & (nodes + h < hi - slack)
        mask[0] = mask[-1] = False
        return mask

    @classmethod
    def classify_dofs(cls, grid: UniformGrid, omega_dom: IntervalSet) -> IndexPair:
        """
        Split the node indices into the conforming interior set and its complement.

        Returns:
            IndexPair: (interior indices, exterior indices), both sorted.
        """
        mask = cls.interior_mask(grid, omega_dom)
        return np.flatnonzero(mask), np.flatnonzero(~mask)

    @classmethod
    def window_hats(cls, grid: UniformGrid, window: IntervalSet) -> NDArray[np.int64]:
        """Nodes whose hat support lies inside the closed window."""
        nodes = grid.nodes
        h = grid.h
        slack = CONTAINMENT_SLACK * h
        mask = np.zeros(grid.n_nodes, dtype=bool)
        for lo, hi in window.intervals:
            mask |= (nodes - h >= lo - slack) & (nodes + h <= hi + slack)
        mask[0] = mask[-1] = False
        return np.flatnonzero(mask)
