from __future__ import annotations
import logging
from typing import Optional

import numpy as np

from ..algebra7 import cross, inner, model_three_form, ThreeFormLike

logger = logging.getLogger(__name__)

DIMENSION = 7
PROJECTION_THRESHOLD = 1e-2


def _unit(g: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return vectors / np.sqrt(inner(g, vectors, vectors))[..., None]


def _project_out(g: np.ndarray, vectors: np.ndarray, basis: list) -> np.ndarray:
    for b in basis:
        vectors = vectors - inner(g, vectors, b[..., None, :])[..., None] * b[..., None, :]
    return vectors


def _first_admissible_axis(g: np.ndarray, basis: list, batch_shape: tuple, threshold: float) -> np.ndarray:
    """
    Gram-Schmidt step from the coordinate axes: the first axis whose projection orthogonal to the given unit vectors
    has norm above the threshold. Degenerate projections restart from the next axis.
    """
    axes = np.broadcast_to(np.eye(DIMENSION), (*batch_shape, DIMENSION, DIMENSION))
    projections = _project_out(g, axes, basis)
    norms = np.sqrt(np.maximum(inner(g, projections, projections), 0.0))

    admissible = norms > threshold
    assert np.all(np.any(admissible, axis=-1)), "No coordinate axis has an admissible projection."
    choice = np.argmax(admissible, axis=-1)

    chosen = np.take_along_axis(projections, choice[..., None, None], axis=-2)[..., 0, :]
    return _unit(g, chosen)


def adapted_frame(
        xi: np.ndarray,
        phi3: Optional[ThreeFormLike] = None,
        g: Optional[np.ndarray] = None,
        threshold: float = PROJECTION_THRESHOLD
) -> np.ndarray:
    """
    Orthonormal frame (f_1, ..., f_6, xi) in which the 3-form has the components of the model form. f_1 and f_2 come
    from Gram-Schmidt over the coordinate axes, and the rest is closed under the cross product,

        f_6 = xi × f_1,  f_3 = f_1 × f_2,  f_5 = -(xi × f_2),  f_4 = -(xi × f_3),

    with f_2 orthogonal to xi, f_1 and f_6.

    Parameters
    ----------
    xi : np.ndarray
        Unit vectors of shape (..., 7).
    phi3 : Optional[ThreeFormLike]
        The 3-form. The model form if not given.
    g : Optional[np.ndarray]
        The metric. Identity if not given.
    threshold : float
        Smallest admissible projection norm in the Gram-Schmidt steps.

    Returns
    -------
    frame : np.ndarray
        Frames of shape (..., 7, 7) with the frame vectors as columns.
    """
    phi3 = model_three_form() if phi3 is None else phi3
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)
    batch_shape = xi.shape[:-1]

    f1 = _first_admissible_axis(g, [xi], batch_shape, threshold)
    f6 = cross(phi3, g, xi, f1)
    f2 = _first_admissible_axis(g, [xi, f1, f6], batch_shape, threshold)
    f5 = -cross(phi3, g, xi, f2)
    f3 = cross(phi3, g, f1, f2)
    f4 = -cross(phi3, g, xi, f3)

    return np.stack([f1, f2, f3, f4, f5, f6, xi], axis=-1)


def orthonormal_frame(
        xi: np.ndarray,
        g: Optional[np.ndarray] = None,
        threshold: float = PROJECTION_THRESHOLD
) -> np.ndarray:
    """
    Plain Gram-Schmidt completion of xi to an orthonormal frame with xi as its last vector.

    Parameters
    ----------
    xi : np.ndarray
        Unit vectors of shape (..., 7).
    g : Optional[np.ndarray]
        The metric. Identity if not given.
    threshold : float
        Smallest admissible projection norm.

    Returns
    -------
    frame : np.ndarray
        Frames of shape (..., 7, 7) with the frame vectors as columns.
    """
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)

    basis = [xi]
    for _ in range(DIMENSION - 1):
        basis.append(_first_admissible_axis(g, basis, xi.shape[:-1], threshold))

    return np.stack(basis[1:] + [xi], axis=-1)


def unitary_frame(
        phi: np.ndarray,
        xi: np.ndarray,
        g: Optional[np.ndarray] = None,
        threshold: float = PROJECTION_THRESHOLD
) -> np.ndarray:
    """
    Orthonormal frame (f_1, phi f_1, f_3, phi f_3, f_5, phi f_5, xi) of an almost contact metric structure. In it
    the matrix of phi is the same block-diagonal complex structure at every point.

    Parameters
    ----------
    phi : np.ndarray
        Endomorphisms of shape (..., 7, 7).
    xi : np.ndarray
        Unit vectors of shape (..., 7).
    g : Optional[np.ndarray]
        The compatible metric. Identity if not given.
    threshold : float
        Smallest admissible projection norm.

    Returns
    -------
    frame : np.ndarray
        Frames of shape (..., 7, 7) with the frame vectors as columns.
    """
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)

    basis = [xi]
    for _ in range(3):
        f = _first_admissible_axis(g, basis, xi.shape[:-1], threshold)
        basis.extend([f, np.einsum("...ij,...j->...i", phi, f)])

    return np.stack(basis[1:] + [xi], axis=-1)


def frame_inverse(frame: np.ndarray, g: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Inverse F^-1 = F^T g of an orthonormal frame.
    """
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    return np.swapaxes(frame, -2, -1) @ g


def frame_residual(frame: np.ndarray, g: Optional[np.ndarray] = None) -> float:
    """
    Largest deviation of F^T g F from the identity.
    """
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    gram = np.swapaxes(frame, -2, -1) @ g @ frame
    return float(np.max(np.abs(gram - np.eye(DIMENSION)), initial=0.0))
