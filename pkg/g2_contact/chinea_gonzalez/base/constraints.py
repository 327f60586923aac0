"""
Defining equations of the space C(V) and of its subspaces, written as linear residual maps on frame components. All
maps act on a batch of tensors a[n, x, y, z] = alpha(f_x, f_y, f_z) in an orthonormal frame whose last vector is xi,
so that eta(x) is the last coordinate of x and <x, phi y> = P[x, y].
"""
from typing import Callable, Dict, List

import numpy as np

from ...enum import ChineaGonzalezClass

DIMENSION = 7
XI = DIMENSION - 1
N_HALF = 3

Residual = Callable[[np.ndarray, np.ndarray], List[np.ndarray]]

_ETA = np.eye(DIMENSION)[XI]
_HORIZONTAL = np.eye(DIMENSION) - np.outer(_ETA, _ETA)


def apply_phi(a: np.ndarray, phi: np.ndarray, slot: int) -> np.ndarray:
    """
    Tensor with phi inserted in one slot (1, 2 or 3), e.g. slot 2 gives alpha(x, phi y, z).
    """
    return np.moveaxis(np.tensordot(a, phi, axes=([slot], [0])), -1, slot)


def c12(a: np.ndarray) -> np.ndarray:
    """
    c_12 alpha(z) = sum_i alpha(e_i, e_i, z).
    """
    return np.einsum("niiz->nz", a)


def c12_bar(a: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    c-bar_12 alpha(z) = sum_i alpha(e_i, phi e_i, z).
    """
    return np.einsum("qi,niqz->nz", phi, a)


def _swap_first(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, 1, 2)


def _swap_last(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, 2, 3)


def _xi_terms(a: np.ndarray) -> np.ndarray:
    """
    eta(x) alpha(xi, y, z) + eta(y) alpha(x, xi, z) + eta(z) alpha(x, y, xi).
    """
    return (
        np.einsum("x,nyz->nxyz", _ETA, a[:, XI, :, :])
        + np.einsum("y,nxz->nxyz", _ETA, a[:, :, XI, :])
        + np.einsum("z,nxy->nxyz", _ETA, a[:, :, :, XI])
    )


def _transposed_xi(a: np.ndarray) -> np.ndarray:
    """
    eta(z) alpha(y, x, xi).
    """
    return np.einsum("z,nyx->nxyz", _ETA, a[:, :, :, XI])


def _phi_phi_xi(a: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    eta(y) alpha(phi x, phi z, xi).
    """
    rotated = np.einsum("px,qz,npq->nxz", phi, phi, a[:, :, :, XI])
    return np.einsum("y,nxz->nxyz", _ETA, rotated)


def ambient(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [
        a + _swap_last(a),
        a + apply_phi(apply_phi(a, phi, 2), phi, 3) - (_xi_terms(a) - np.einsum("x,nyz->nxyz", _ETA, a[:, XI]))
    ]


def d1(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a[:, XI, :, :], a[:, :, XI, :]]


def d2(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a - _xi_terms(a)]


def c1(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a + _swap_first(a), a[:, :, :, XI]]


def c2(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    cyclic = a + np.transpose(a, (0, 2, 3, 1)) + np.transpose(a, (0, 3, 1, 2))
    return [cyclic, a[:, :, :, XI]]


def c3(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a - apply_phi(apply_phi(a, phi, 1), phi, 2), c12(a)]


def c4(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    c = c12(a)
    c_phi = c @ phi
    scale = 1.0 / (2 * (N_HALF - 1))
    expected = scale * (
        np.einsum("xy,nz->nxyz", _HORIZONTAL, c)
        - np.einsum("xz,ny->nxyz", _HORIZONTAL, c)
        - np.einsum("xy,nz->nxyz", phi, c_phi)
        + np.einsum("xz,ny->nxyz", phi, c_phi)
    )
    return [a - expected, c[:, XI]]


def c5(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    c = c12_bar(a, phi)[:, XI]
    scale = 1.0 / (2 * N_HALF)
    expected = scale * (
        np.einsum("xz,y,n->nxyz", phi, _ETA, c)
        - np.einsum("xy,z,n->nxyz", phi, _ETA, c)
    )
    return [a - expected]


def c6(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    c = c12(a)[:, XI]
    identity = np.eye(DIMENSION)
    scale = 1.0 / (2 * N_HALF)
    expected = scale * (
        np.einsum("xy,z,n->nxyz", identity, _ETA, c)
        - np.einsum("xz,y,n->nxyz", identity, _ETA, c)
    )
    return [a - expected]


def c7(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a - _transposed_xi(a) + _phi_phi_xi(a, phi), c12(a)[:, XI]]


def c8(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a + _transposed_xi(a) + _phi_phi_xi(a, phi), c12_bar(a, phi)[:, XI]]


def c9(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a - _transposed_xi(a) - _phi_phi_xi(a, phi)]


def c10(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    return [a + _transposed_xi(a) - _phi_phi_xi(a, phi)]


def c11(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    rotated = np.einsum("py,qz,npq->nyz", phi, phi, a[:, XI, :, :])
    return [a + np.einsum("x,nyz->nxyz", _ETA, rotated)]


def c12_class(a: np.ndarray, phi: np.ndarray) -> List[np.ndarray]:
    expected = (
        np.einsum("x,y,nz->nxyz", _ETA, _ETA, a[:, XI, XI, :])
        + np.einsum("x,z,ny->nxyz", _ETA, _ETA, a[:, XI, :, XI])
    )
    return [a - expected]


CLASS_RESIDUALS: Dict[ChineaGonzalezClass, Residual] = {
    ChineaGonzalezClass.D1: d1,
    ChineaGonzalezClass.D2: d2,
    ChineaGonzalezClass.C1: c1,
    ChineaGonzalezClass.C2: c2,
    ChineaGonzalezClass.C3: c3,
    ChineaGonzalezClass.C4: c4,
    ChineaGonzalezClass.C5: c5,
    ChineaGonzalezClass.C6: c6,
    ChineaGonzalezClass.C7: c7,
    ChineaGonzalezClass.C8: c8,
    ChineaGonzalezClass.C9: c9,
    ChineaGonzalezClass.C10: c10,
    ChineaGonzalezClass.C11: c11,
    ChineaGonzalezClass.C12: c12_class
}


def constraint_matrix(residual: Residual, phi: np.ndarray) -> np.ndarray:
    """
    Matrix of a linear residual map on the 343-dimensional space of frame components.

    Parameters
    ----------
    residual : Residual
        The residual map.
    phi : np.ndarray
        Frame matrix of phi.

    Returns
    -------
    matrix : np.ndarray
        Array of shape (m, 343) whose null space is the solution space.
    """
    size = DIMENSION ** 3
    unit_tensors = np.eye(size).reshape(size, DIMENSION, DIMENSION, DIMENSION)
    rows = [block.reshape(size, -1) for block in residual(unit_tensors, phi)]

    return np.concatenate(rows, axis=1).T


def max_residual(residual: Residual, a: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    Largest absolute residual of each tensor in a batch.
    """
    return np.max(np.concatenate([np.abs(block.reshape(len(a), -1)) for block in residual(a, phi)], axis=1), axis=1)
