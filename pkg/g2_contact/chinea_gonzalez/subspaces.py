from __future__ import annotations
from functools import lru_cache
import logging
from typing import Dict, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.linalg import null_space

from ..acms import ACMS
from ..enum import ChineaGonzalezClass
from ..fields import frame_inverse, unitary_frame
from .base import ambient, CLASS_RESIDUALS, constraint_matrix, DIMENSION, max_residual

logger = logging.getLogger(__name__)

AMBIENT = "C(V)"
KEY_DECIMALS = 9

CV_DIMENSION = 84
CLASS_DIMENSIONS = {
    ChineaGonzalezClass.D1: 36,
    ChineaGonzalezClass.D2: 42,
    ChineaGonzalezClass.C1: 2,
    ChineaGonzalezClass.C2: 16,
    ChineaGonzalezClass.C3: 12,
    ChineaGonzalezClass.C4: 6,
    ChineaGonzalezClass.C5: 1,
    ChineaGonzalezClass.C6: 1,
    ChineaGonzalezClass.C7: 8,
    ChineaGonzalezClass.C8: 8,
    ChineaGonzalezClass.C9: 12,
    ChineaGonzalezClass.C10: 6,
    ChineaGonzalezClass.C11: 6,
    ChineaGonzalezClass.C12: 6
}


class SubspaceBasis(NamedTuple):
    """
    Orthonormal basis of a subspace of C(V), in frame components. The columns of `vectors` are flattened 7x7x7
    tensors.
    """
    class_id: Union[ChineaGonzalezClass, str]
    vectors: np.ndarray

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def tensors(self) -> np.ndarray:
        return self.vectors.T.reshape(-1, DIMENSION, DIMENSION, DIMENSION)

    def project(self, a: np.ndarray) -> np.ndarray:
        """
        Orthogonal projection of frame components a[n, x, y, z] onto the subspace.
        """
        flat = a.reshape(len(a), -1)
        return ((flat @ self.vectors) @ self.vectors.T).reshape(a.shape)


class FrameStructure(NamedTuple):
    """
    Frames of an almost contact metric structure and the matrix P[x, y] = <f_x, phi f_y> of phi in them.
    """
    frames: np.ndarray
    phi: np.ndarray


def frame_key(phi: np.ndarray) -> bytes:
    return (np.round(phi, KEY_DECIMALS) + 0.0).astype(float).tobytes()


def frame_structure(acms: ACMS, frames: Optional[np.ndarray] = None) -> FrameStructure:
    """
    Frame matrices of phi for a structure sampled on a batch of points.

    Parameters
    ----------
    acms : ACMS
        The structure; phi of shape (P, 7, 7) or (7, 7).
    frames : Optional[np.ndarray]
        Orthonormal frames with last vector xi. The unitary frames (f, phi f, ...) if not given.

    Returns
    -------
    structure : FrameStructure
        Frames and frame matrices of phi.
    """
    if frames is None:
        frames = unitary_frame(acms.phi, acms.xi, acms.g)

    phi = frame_inverse(frames, acms.g) @ acms.phi @ frames

    return FrameStructure(frames=frames, phi=phi)


@lru_cache(maxsize=32)
def _ambient_vectors(key: bytes) -> np.ndarray:
    phi = np.frombuffer(key).reshape(DIMENSION, DIMENSION)
    vectors = null_space(constraint_matrix(ambient, phi))
    logger.debug(f"Built C(V) basis of dimension {vectors.shape[1]}.")

    return vectors


@lru_cache(maxsize=512)
def _class_vectors(key: bytes, class_id: ChineaGonzalezClass) -> np.ndarray:
    phi = np.frombuffer(key).reshape(DIMENSION, DIMENSION)
    ambient_vectors = _ambient_vectors(key)

    restricted = constraint_matrix(CLASS_RESIDUALS[class_id], phi) @ ambient_vectors
    vectors = ambient_vectors @ null_space(restricted)
    if vectors.shape[1] == 0:
        raise ValueError("basis construction failed")
    logger.debug(f"Built {class_id} basis of dimension {vectors.shape[1]}.")

    return vectors


def _representative_key(acms_or_phi: Union[ACMS, np.ndarray]) -> bytes:
    if isinstance(acms_or_phi, ACMS):
        phi = frame_structure(acms_or_phi).phi
    else:
        phi = np.asarray(acms_or_phi, dtype=float)

    phi = phi.reshape(-1, DIMENSION, DIMENSION)
    keys = {frame_key(p) for p in phi}
    if len(keys) != 1:
        raise ValueError(f"Expected a single frame representation of phi, got {len(keys)}.")

    return keys.pop()


def ambient_basis(acms_or_phi: Union[ACMS, np.ndarray]) -> SubspaceBasis:
    """
    Orthonormal basis of C(V), the tensors with alpha(x, y, z) = -alpha(x, z, y) and
    alpha(x, y, z) = -alpha(x, phi y, phi z) + eta(y) alpha(x, xi, z) + eta(z) alpha(x, y, xi).

    Parameters
    ----------
    acms_or_phi : Union[ACMS, np.ndarray]
        A structure at a point, or directly the frame matrix of phi.

    Returns
    -------
    basis : SubspaceBasis
        Basis in frame components.
    """
    return SubspaceBasis(AMBIENT, _ambient_vectors(_representative_key(acms_or_phi)))


def subspace_basis(
        class_id: Union[str, ChineaGonzalezClass],
        acms_or_phi: Union[ACMS, np.ndarray]
) -> SubspaceBasis:
    """
    Orthonormal basis of D_1, D_2 or one of the classes C_1, ..., C_12, obtained as the null space of its defining
    equations restricted to C(V).

    Parameters
    ----------
    class_id : Union[str, ChineaGonzalezClass]
        The subspace.
    acms_or_phi : Union[ACMS, np.ndarray]
        A structure at a point, or directly the frame matrix of phi.

    Returns
    -------
    basis : SubspaceBasis
        Basis in frame components.
    """
    class_id = ChineaGonzalezClass(class_id)
    return SubspaceBasis(class_id, _class_vectors(_representative_key(acms_or_phi), class_id))


def all_bases(acms_or_phi: Union[ACMS, np.ndarray]) -> Dict[ChineaGonzalezClass, SubspaceBasis]:
    """
    Bases of the twelve irreducible classes, in order.
    """
    return {class_id: subspace_basis(class_id, acms_or_phi) for class_id in ChineaGonzalezClass.irreducible()}


def membership_residual(
        class_id: Union[str, ChineaGonzalezClass],
        a: np.ndarray,
        phi: np.ndarray
) -> np.ndarray:
    """
    Largest residual of the defining equations of a class (or of C(V) for class_id "C(V)") for a batch of frame
    tensors.
    """
    if class_id == AMBIENT:
        return max_residual(ambient, a, phi)
    return max_residual(CLASS_RESIDUALS[ChineaGonzalezClass(class_id)], a, phi)


def cache_info() -> Tuple:
    return _ambient_vectors.cache_info(), _class_vectors.cache_info()
