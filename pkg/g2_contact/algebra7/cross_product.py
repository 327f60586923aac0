from __future__ import annotations
import logging
from typing import Union

import numpy as np

from .forms import DIMENSION, KForm7, interior, wedge

logger = logging.getLogger(__name__)

MODEL_MONOMIALS = {
    (1, 2, 3): 1.0,
    (1, 4, 5): 1.0,
    (1, 6, 7): 1.0,
    (2, 4, 6): 1.0,
    (2, 5, 7): -1.0,
    (3, 4, 7): -1.0,
    (3, 5, 6): -1.0
}

ThreeFormLike = Union[KForm7, np.ndarray]


def model_three_form() -> KForm7:
    """
    The model G2 3-form dx^123 + dx^145 + dx^167 + dx^246 - dx^257 - dx^347 - dx^356.

    Returns
    -------
    phi0 : KForm7
        The 3-form.
    """
    return KForm7.from_monomials(3, MODEL_MONOMIALS)


def dense_three_form(phi: ThreeFormLike) -> np.ndarray:
    """
    Dense 7x7x7 components of a 3-form given either as a KForm7 or as an array.

    Parameters
    ----------
    phi : ThreeFormLike
        The 3-form.

    Returns
    -------
    components : np.ndarray
        Array of shape (7, 7, 7).
    """
    if isinstance(phi, KForm7):
        if phi.degree != 3:
            raise ValueError(f"Expected a 3-form, got degree {phi.degree}.")
        return phi.components

    components = np.asarray(phi, dtype=float)
    if components.shape != (DIMENSION,) * 3:
        raise ValueError(f"Expected 3-form components of shape (7, 7, 7), got {components.shape}.")

    return components


def inverse_metric(g: np.ndarray) -> np.ndarray:
    """
    Inverse of a symmetric metric.

    Parameters
    ----------
    g : np.ndarray
        The 7x7 metric.

    Returns
    -------
    g_inv : np.ndarray
        Its inverse.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (DIMENSION, DIMENSION):
        raise ValueError(f"Expected a 7x7 metric, got shape {g.shape}.")
    if not np.allclose(g, g.T, atol=1e-12):
        raise ValueError("Metric is not symmetric.")

    eigenvalues = np.linalg.eigvalsh(g)
    if np.min(np.abs(eigenvalues)) <= 1e-12 * max(np.max(np.abs(eigenvalues)), 1.0):
        raise ValueError("degenerate metric")

    return np.linalg.inv(g)


def inner(g: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Metric inner product g(x, y), broadcast over leading axes.
    """
    return np.einsum("...i,ij,...j->...", x, g, y)


def cross(phi: ThreeFormLike, g: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Cross product defined by phi(x, y, z) = g(x × y, z) for all z.

    Parameters
    ----------
    phi : ThreeFormLike
        The G2 3-form.
    g : np.ndarray
        The metric.
    x : np.ndarray
        Vectors of shape (..., 7).
    y : np.ndarray
        Vectors of shape (..., 7).

    Returns
    -------
    product : np.ndarray
        The vectors x × y, shape (..., 7).
    """
    g_inv = inverse_metric(g)
    lowered = np.einsum("ijk,...i,...j->...k", dense_three_form(phi), x, y)

    return lowered @ g_inv


def cross_product_matrix(phi: ThreeFormLike, g: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """
    Matrix of the endomorphism X -> xi × X.

    Parameters
    ----------
    phi : ThreeFormLike
        The G2 3-form.
    g : np.ndarray
        The metric.
    xi : np.ndarray
        Vectors of shape (..., 7).

    Returns
    -------
    matrix : np.ndarray
        Matrices of shape (..., 7, 7), column j being xi × e_j.
    """
    g_inv = inverse_metric(g)

    return np.einsum("lk,ijk,...i->...lj", g_inv, dense_three_form(phi), xi)


def three_form_bilinear(phi: KForm7, reference_volume: KForm7 = None) -> np.ndarray:
    """
    Symmetric bilinear form B(X, Y), the coefficient of (X -| phi) ^ (Y -| phi) ^ phi against a reference volume.

    Parameters
    ----------
    phi : KForm7
        The 3-form.
    reference_volume : KForm7, optional
        Nonzero 7-form. Defaults to dx^1 ^ ... ^ dx^7.

    Returns
    -------
    bilinear : np.ndarray
        The 7x7 matrix of B.
    """
    if reference_volume is None:
        reference_volume = KForm7(DIMENSION, [1.0])
    if reference_volume.degree != DIMENSION or reference_volume.coefficients[0] == 0.0:
        raise ValueError("Reference volume must be a nonzero 7-form.")

    basis = np.eye(DIMENSION)
    contractions = [interior(basis[i], phi) for i in range(DIMENSION)]
    bilinear = np.zeros((DIMENSION, DIMENSION))
    for i in range(DIMENSION):
        for j in range(i, DIMENSION):
            top = wedge(wedge(contractions[i], contractions[j]), phi)
            bilinear[i, j] = bilinear[j, i] = top.coefficients[0] / reference_volume.coefficients[0]

    return bilinear


def metric_from_three_form(phi: KForm7, reference_volume: KForm7 = None) -> np.ndarray:
    """
    Recovers the metric of a positive 3-form from 6 g(X, Y) Vol = (X -| phi) ^ (Y -| phi) ^ phi.

    Writing g = B / lambda with B from `three_form_bilinear`, the metric volume is sqrt(det g) times the reference
    volume, so the relation holds for lambda = 6 (det B / 6^7)^(1/9).

    Parameters
    ----------
    phi : KForm7
        The 3-form.
    reference_volume : KForm7, optional
        Nonzero 7-form fixing the orientation and the unit of volume. Defaults to dx^1 ^ ... ^ dx^7.

    Returns
    -------
    g : np.ndarray
        The 7x7 metric.
    """
    bilinear = three_form_bilinear(phi, reference_volume)

    if np.min(np.linalg.eigvalsh(bilinear)) <= 0:
        raise ValueError("not a positive 3-form")

    scale = 6.0 * (np.linalg.det(bilinear) / 6.0 ** DIMENSION) ** (1.0 / 9.0)
    logger.debug(f"Metric recovered with scale {scale}.")

    return bilinear / scale


def double_cross_check(g: np.ndarray, phi: ThreeFormLike, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """
    Residual of x1 × (x1 × x2) = -g(x1, x1) x2 + g(x1, x2) x1.

    Parameters
    ----------
    g : np.ndarray
        The metric.
    phi : ThreeFormLike
        The G2 3-form.
    x1 : np.ndarray
        Vectors of shape (..., 7).
    x2 : np.ndarray
        Vectors of shape (..., 7).

    Returns
    -------
    residual : np.ndarray
        Euclidean norm of the residual, shape (...).
    """
    left = cross(phi, g, x1, cross(phi, g, x1, x2))
    right = -inner(g, x1, x1)[..., None] * x2 + inner(g, x1, x2)[..., None] * x1

    return np.linalg.norm(left - right, axis=-1)


def four_term_check(phi: ThreeFormLike, g: np.ndarray, u: np.ndarray, v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    Residual of u × ((u × v) × x) = -(u × v) × (u × x) + u × (u × (v × x)) + (u × (u × x)) × v.

    Returns
    -------
    residual : np.ndarray
        Euclidean norm of the residual, shape (...).
    """
    def product(a, b):
        return cross(phi, g, a, b)

    uv = product(u, v)
    left = product(u, product(uv, x))
    right = -product(uv, product(u, x)) + product(u, product(u, product(v, x))) + product(product(u, product(u, x)), v)

    return np.linalg.norm(left - right, axis=-1)
