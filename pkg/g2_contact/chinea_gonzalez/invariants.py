from __future__ import annotations
import logging
from typing import Dict, NamedTuple, Optional, Union

import numpy as np

from ..enum import ChineaGonzalezClass
from ..fields import frame_residual
from .base import c12, DIMENSION, XI

logger = logging.getLogger(__name__)

N_INVARIANTS = 18
FRAME_TOLERANCE = 1e-8
H = slice(0, XI)

# Row of each class: invariant number -> multiple of |alpha|^2. Every other invariant vanishes.
RELATION_ROWS: Dict[ChineaGonzalezClass, Dict[int, float]] = {
    ChineaGonzalezClass.C1: {1: 1.0, 2: -1.0, 3: -1.0},
    ChineaGonzalezClass.C2: {1: 1.0, 2: 0.5, 3: -1.0},
    ChineaGonzalezClass.C3: {1: 1.0, 3: 1.0},
    ChineaGonzalezClass.C4: {1: 1.0, 3: 1.0, 4: 1.0},
    ChineaGonzalezClass.C5: {6: 0.5, 8: -0.5, 9: 0.5, 12: -0.5, 14: 3.0},
    ChineaGonzalezClass.C6: {6: 0.5, 8: 0.5, 9: 0.5, 10: 3.0, 12: 0.5},
    ChineaGonzalezClass.C7: {6: 0.5, 8: 0.5, 9: 0.5, 12: 0.5},
    ChineaGonzalezClass.C8: {6: 0.5, 8: -0.5, 9: 0.5, 12: -0.5},
    ChineaGonzalezClass.C9: {6: 0.5, 8: 0.5, 9: -0.5, 12: -0.5},
    ChineaGonzalezClass.C10: {6: 0.5, 8: -0.5, 9: -0.5, 12: 0.5},
    ChineaGonzalezClass.C11: {5: 1.0},
    ChineaGonzalezClass.C12: {16: 0.5}
}


class QuadraticInvariants(NamedTuple):
    """
    The invariants i_1, ..., i_18 (column m - 1 holds i_m) with the squared norms of alpha, c_12 alpha and
    c-bar_12 alpha, for a batch of tensors.
    """
    i: np.ndarray
    norm_sq: np.ndarray
    c12_norm_sq: np.ndarray
    c12bar_norm_sq: np.ndarray

    def invariant(self, m: int) -> np.ndarray:
        if not 1 <= m <= N_INVARIANTS:
            raise ValueError(f"Invariants are numbered 1 to {N_INVARIANTS}, got {m}.")
        return self.i[..., m - 1]

    def norm_identity_residuals(self) -> Dict[str, np.ndarray]:
        """
        Residuals of |alpha|^2 = i1 + i5 + 2 i6 + 2 i16, |c12 alpha|^2 = i4 + i10 + i16 + 2 i17 and
        |c-bar12 alpha|^2 = i4 + i14.
        """
        i = {m: self.invariant(m) for m in range(1, N_INVARIANTS + 1)}
        return {
            "norm": self.norm_sq - (i[1] + i[5] + 2 * i[6] + 2 * i[16]),
            "c12_norm": self.c12_norm_sq - (i[4] + i[10] + i[16] + 2 * i[17]),
            "c12bar_norm": self.c12bar_norm_sq - (i[4] + i[14])
        }


def frame_components(alpha: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """
    Components a[..., p, q, r] = alpha(f_p, f_q, f_r).
    """
    return np.einsum("...xyz,...xp,...yq,...zr->...pqr", alpha, frames, frames, frames)


def coordinate_components(a: np.ndarray, frames: np.ndarray, g: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Inverse of `frame_components` for orthonormal frames.
    """
    g = np.eye(DIMENSION) if g is None else g
    inverse = np.swapaxes(frames, -2, -1) @ g
    return np.einsum("...pqr,...px,...qy,...rz->...xyz", a, inverse, inverse, inverse)


def invariants_from_frame_components(a: np.ndarray, phi: np.ndarray) -> QuadraticInvariants:
    """
    Quadratic invariants of frame components a[n, x, y, z] of tensors in C(V), for frames whose last vector is xi
    and in which phi has the matrix phi[n] (or a single shared matrix).

    Parameters
    ----------
    a : np.ndarray
        Frame components, shape (n, 7, 7, 7).
    phi : np.ndarray
        Frame matrices of phi, shape (n, 7, 7) or (7, 7).

    Returns
    -------
    invariants : QuadraticInvariants
        The invariants.
    """
    a = np.asarray(a, dtype=float)
    phi = np.broadcast_to(phi, (len(a), DIMENSION, DIMENSION))
    s = XI

    ahhh = a[:, H, H, H]
    p = phi[:, H, H]
    # a_pp[n, i, j, k] = alpha(phi e_i, phi e_j, e_k) for i, j in H
    a_pp = np.einsum("nbi,ncj,nbck->nijk", p, p, a[:, H, H, :])
    a_xi = a[:, H, H, s]
    c_h = np.einsum("niik->nk", a[:, H, H, :])
    phi_trace_xi = np.einsum("nbi,nib->n", p, a_xi)

    i = np.empty((len(a), N_INVARIANTS))
    i[:, 0] = np.einsum("nijk,nijk->n", ahhh, ahhh)
    i[:, 1] = np.einsum("nijk,njik->n", ahhh, ahhh)
    i[:, 2] = np.einsum("nijk,nijk->n", ahhh, a_pp[:, :, :, H])
    i[:, 3] = np.sum(c_h[:, H] ** 2, axis=1)
    i[:, 4] = np.einsum("njk,njk->n", a[:, s, H, H], a[:, s, H, H])
    i[:, 5] = np.einsum("njk,njk->n", a[:, H, s, H], a[:, H, s, H])
    i[:, 6] = np.einsum("njk,njk->n", a[:, s, H, H], a[:, H, s, H])
    i[:, 7] = np.einsum("nij,nji->n", a_xi, a_xi)
    i[:, 8] = np.einsum("nij,nij->n", a_xi, a_pp[:, :, :, s])
    i[:, 9] = c_h[:, s] ** 2
    i[:, 10] = np.einsum("nij,nbi,njb->n", a_xi, p, a_xi)
    i[:, 11] = np.einsum("nij,nji->n", a_xi, a_pp[:, :, :, s])
    i[:, 12] = np.einsum("njk,nbj,nbk->n", a[:, s, H, H], p, a[:, H, s, H])
    i[:, 13] = phi_trace_xi ** 2
    i[:, 14] = phi_trace_xi * c_h[:, s]
    i[:, 15] = np.sum(a[:, s, s, H] ** 2, axis=1)
    i[:, 16] = np.einsum("nk,nk->n", c_h[:, H], a[:, s, s, H])
    i[:, 17] = np.einsum("nbk,nb,nk->n", p, c_h[:, H], a[:, s, s, H])

    c12_full = c12(a)
    c12bar_full = np.einsum("nqi,niqz->nz", phi, a)

    return QuadraticInvariants(
        i=i,
        norm_sq=np.einsum("nxyz,nxyz->n", a, a),
        c12_norm_sq=np.sum(c12_full ** 2, axis=1),
        c12bar_norm_sq=np.sum(c12bar_full ** 2, axis=1)
    )


def quadratic_invariants(
        alpha: np.ndarray,
        frames: np.ndarray,
        phi: np.ndarray,
        g: Optional[np.ndarray] = None
) -> QuadraticInvariants:
    """
    The 18 quadratic invariants of tensors in C(V), evaluated in orthonormal frames {e_1, ..., e_6, xi}.

    Parameters
    ----------
    alpha : np.ndarray
        Coordinate components, shape (n, 7, 7, 7).
    frames : np.ndarray
        Orthonormal frames with xi last, shape (n, 7, 7) or (7, 7).
    phi : np.ndarray
        Coordinate matrices of phi, shape (n, 7, 7) or (7, 7).
    g : Optional[np.ndarray]
        The metric. Identity if not given.

    Returns
    -------
    invariants : QuadraticInvariants
        The invariants.
    """
    g = np.eye(DIMENSION) if g is None else np.asarray(g, dtype=float)
    alpha = np.asarray(alpha, dtype=float).reshape(-1, DIMENSION, DIMENSION, DIMENSION)
    frames = np.broadcast_to(frames, (len(alpha), DIMENSION, DIMENSION))

    if frame_residual(frames, g) > FRAME_TOLERANCE:
        raise ValueError("Frame is not orthonormal.")

    frame_phi = np.swapaxes(frames, -2, -1) @ g @ phi @ frames

    return invariants_from_frame_components(frame_components(alpha, frames), frame_phi)


class RelationReport(NamedTuple):
    """
    Relative residuals of every relation in the row of a class, keyed "i<m>".
    """
    class_id: ChineaGonzalezClass
    residuals: Dict[str, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(residual <= self.tolerance for residual in self.residuals.values())

    @property
    def violated(self) -> Dict[str, float]:
        return {name: residual for name, residual in self.residuals.items() if residual > self.tolerance}


def relation_check(
        class_id: Union[str, ChineaGonzalezClass],
        invariants: QuadraticInvariants,
        tolerance: float = 1e-8
) -> RelationReport:
    """
    Checks the invariant relations of a class on tensors projected into it, together with the three norm
    identities. Residuals are relative to |alpha|^2.

    Parameters
    ----------
    class_id : Union[str, ChineaGonzalezClass]
        The class.
    invariants : QuadraticInvariants
        Invariants of elements of the class.
    tolerance : float
        Relative tolerance.

    Returns
    -------
    report : RelationReport
        Worst relative residual per relation.
    """
    class_id = ChineaGonzalezClass(class_id)
    row = RELATION_ROWS[class_id]
    scale = np.maximum(invariants.norm_sq, np.finfo(float).tiny)

    residuals = {}
    for m in range(1, N_INVARIANTS + 1):
        expected = row.get(m, 0.0) * invariants.norm_sq
        residuals[f"i{m}"] = float(np.max(np.abs(invariants.invariant(m) - expected) / scale))

    for name, residual in invariants.norm_identity_residuals().items():
        residuals[name] = float(np.max(np.abs(residual) / scale))

    return RelationReport(class_id=class_id, residuals=residuals, tolerance=tolerance)
