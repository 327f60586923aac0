import logging
from typing import List, Optional, Sequence

import numpy as np

from ..enum import Phase
from .base import TrigVectorField

logger = logging.getLogger(__name__)

DIMENSION = 7
XI_AXIS = 6


def _random_unit(rng: np.random.Generator, size: int) -> np.ndarray:
    vector = rng.normal(size=size)
    return vector / np.linalg.norm(vector)


def random_trig_vector_field(
        rng: np.random.Generator,
        n_terms: int = 3,
        max_wave: int = 2,
        amplitude: float = 0.25,
        base: Optional[np.ndarray] = None
) -> TrigVectorField:
    """
    A unit base vector plus random trigonometric perturbations. Every perturbation has norm `amplitude`, so the field
    never vanishes when n_terms * amplitude < |base|.

    Parameters
    ----------
    rng : np.random.Generator
        Random generator.
    n_terms : int
        Number of perturbation terms.
    max_wave : int
        Largest absolute wave number.
    amplitude : float
        Norm of each perturbation coefficient.
    base : Optional[np.ndarray]
        Constant part. e_7 if not given.

    Returns
    -------
    field : TrigVectorField
        The raw field.
    """
    base = np.eye(DIMENSION)[XI_AXIS] if base is None else np.asarray(base, dtype=float)
    assert n_terms * amplitude < np.linalg.norm(base), "The perturbations could make the field vanish."

    coefficients = [base]
    waves = [np.zeros(DIMENSION, dtype=int)]
    phases = [Phase.COS]
    for _ in range(n_terms):
        wave = rng.integers(-max_wave, max_wave + 1, size=DIMENSION)
        while not np.any(wave):
            wave = rng.integers(-max_wave, max_wave + 1, size=DIMENSION)
        coefficients.append(amplitude * _random_unit(rng, DIMENSION))
        waves.append(wave)
        phases.append(rng.choice([Phase.COS, Phase.SIN]))

    return TrigVectorField(coefficients, waves, phases)


def parallel_free_family(
        rng: np.random.Generator,
        span: Sequence[int] = (0, XI_AXIS),
        n_terms: int = 3,
        max_wave: int = 2,
        amplitude: float = 0.25
) -> TrigVectorField:
    """
    Raw fields whose normalization xi satisfies nabla_xi xi = 0 and div xi = 0 while nabla xi does not vanish. The
    coefficient vectors lie in the span S of the given coordinate axes and the wave vectors are orthogonal to S, so
    xi takes values in S and is constant along S.

    Parameters
    ----------
    rng : np.random.Generator
        Random generator.
    span : Sequence[int]
        Coordinate axes spanning S (0-based). Must contain the base axis 6.
    n_terms : int
        Number of perturbation terms.
    max_wave : int
        Largest absolute wave number.
    amplitude : float
        Norm of each perturbation coefficient.

    Returns
    -------
    field : TrigVectorField
        The raw field.
    """
    span = list(span)
    if XI_AXIS not in span:
        raise ValueError(f"The span {span} must contain axis {XI_AXIS}.")
    free_axes: List[int] = [k for k in range(DIMENSION) if k not in span]
    assert n_terms * amplitude < 1.0, "The perturbations could make the field vanish."

    coefficients = [np.eye(DIMENSION)[XI_AXIS]]
    waves = [np.zeros(DIMENSION, dtype=int)]
    phases = [Phase.COS]
    for _ in range(n_terms):
        coefficient = np.zeros(DIMENSION)
        coefficient[span] = amplitude * _random_unit(rng, len(span))
        wave = np.zeros(DIMENSION, dtype=int)
        while not np.any(wave):
            wave[free_axes] = rng.integers(-max_wave, max_wave + 1, size=len(free_axes))
        coefficients.append(coefficient)
        waves.append(wave)
        phases.append(rng.choice([Phase.COS, Phase.SIN]))

    logger.debug(f"Built a geodesic divergence-free family on span {span}.")

    return TrigVectorField(coefficients, waves, phases)
