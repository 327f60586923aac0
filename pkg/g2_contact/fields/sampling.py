from __future__ import annotations
from functools import cached_property
import logging
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

DIMENSION = 7
TORUS_VOLUME = (2 * np.pi) ** DIMENSION


class LatticeSampling:
    """
    Points of the uniform N^7 grid on the torus, either all of them or a random subsample without replacement.
    """

    def __init__(self, resolution: int = 8, subsamples: Optional[int] = None, seed: int = 0):
        """
        Initializes the sampling.

        Parameters
        ----------
        resolution : int
            Number N of grid points per axis, N >= 4.
        subsamples : Optional[int]
            Number of grid points drawn at random. The full grid is used if not given.
        seed : int
            Seed of the subsample selection.
        """
        if resolution < 4:
            raise ValueError(f"Resolution must be at least 4, got {resolution}.")
        if subsamples is not None and not 0 < subsamples <= resolution ** DIMENSION:
            raise ValueError(f"Subsample count must lie in [1, {resolution ** DIMENSION}], got {subsamples}.")

        self.resolution = resolution
        self.subsamples = subsamples
        self.seed = seed

    @property
    def is_full_grid(self) -> bool:
        return self.subsamples is None or self.subsamples == self.resolution ** DIMENSION

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.resolution

    @property
    def weight(self) -> float:
        """
        Quadrature weight (2 pi / N)^7 of a full-grid point.
        """
        return self.spacing ** DIMENSION

    @cached_property
    def indices(self) -> np.ndarray:
        """
        Integer grid coordinates of the sample points.

        Returns
        -------
        indices : np.ndarray
            Array of shape (P, 7).
        """
        total = self.resolution ** DIMENSION
        if self.is_full_grid:
            flat = np.arange(total)
        else:
            rng = np.random.default_rng(self.seed)
            flat = np.sort(rng.choice(total, size=self.subsamples, replace=False))

        logger.debug(f"Sampling {len(flat)} of {total} grid points.")
        return np.stack(np.unravel_index(flat, (self.resolution,) * DIMENSION), axis=-1)

    @property
    def points(self) -> np.ndarray:
        return self.indices * self.spacing

    def __len__(self) -> int:
        return self.resolution ** DIMENSION if self.is_full_grid else self.subsamples

    def __repr__(self) -> str:
        return f"LatticeSampling(resolution={self.resolution}, subsamples={self.subsamples}, seed={self.seed})"
