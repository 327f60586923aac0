from __future__ import annotations
import logging
from typing import NamedTuple, Tuple

import numpy as np

from .structure import StructureField

logger = logging.getLogger(__name__)


def nijenhuis(t: np.ndarray, d_t: np.ndarray) -> np.ndarray:
    """
    Nijenhuis torsion [T, T](X, Y) = T^2 [X, Y] + [TX, TY] - T[TX, Y] - T[X, TY] of an endomorphism field, evaluated
    on the commuting coordinate fields of the torus and extended bilinearly.

    Parameters
    ----------
    t : np.ndarray
        Endomorphisms T^i_j, shape (..., 7, 7).
    d_t : np.ndarray
        Derivatives d_k T^i_j, shape (..., 7, 7, 7) with the differentiation index first.

    Returns
    -------
    torsion : np.ndarray
        Components N[..., i, a, b] of [T, T](e_a, e_b).
    """
    return (
        np.einsum("...ic,...bca->...iab", t, d_t)
        - np.einsum("...ic,...acb->...iab", t, d_t)
        + np.einsum("...ca,...cib->...iab", t, d_t)
        - np.einsum("...cb,...cia->...iab", t, d_t)
    )


def exterior_derivative_1form(d_eta: np.ndarray) -> np.ndarray:
    """
    (d eta)(e_a, e_b) = d_a eta_b - d_b eta_a, which is twice d eta in the half-normalized convention, so that
    N1 = [phi, phi] + (this tensor) xi.
    """
    return d_eta - np.swapaxes(d_eta, -2, -1)


class NijenhuisReport(NamedTuple):
    """
    The four normality tensors of an almost contact structure sampled on a batch of points.
    """
    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray
    n4: np.ndarray

    @property
    def max_norms(self) -> Tuple[float, float, float, float]:
        """
        Largest pointwise Frobenius norm of each tensor.

        Returns
        -------
        max_norms : Tuple[float, float, float, float]
            Maxima of |N1|, |N2|, |N3| and |N4|.
        """
        def max_norm(tensor: np.ndarray, rank: int) -> float:
            if tensor.size == 0:
                return 0.0
            flat = tensor.reshape(*tensor.shape[:tensor.ndim - rank], -1)
            return float(np.max(np.linalg.norm(flat, axis=-1)))

        return max_norm(self.n1, 3), max_norm(self.n2, 2), max_norm(self.n3, 2), max_norm(self.n4, 1)

    def is_normal(self, tol: float = 1e-12) -> bool:
        return self.max_norms[0] <= tol

    def implication_holds(self, tol: float = 1e-12, factor: float = 10.0) -> bool:
        """
        Whether a vanishing N1 comes with vanishing N2, N3 and N4, i.e. whenever max |N1| <= tol the other three
        maxima are below factor * tol.
        """
        n1, *others = self.max_norms
        if n1 > tol:
            return True
        return all(norm <= factor * tol for norm in others)


def normality_tensors(field: StructureField) -> NijenhuisReport:
    """
    Normality tensors of a structure field on the coordinate frame,

        N1(X, Y) = [phi, phi](X, Y) + 2 d eta(X, Y) xi,
        N2(X, Y) = (L_{phi X} eta) Y - (L_{phi Y} eta) X,
        N3(X) = (L_xi phi) X,
        N4(X) = (L_xi eta) X.

    Parameters
    ----------
    field : StructureField
        The structure with its first derivatives.

    Returns
    -------
    report : NijenhuisReport
        The four tensors.
    """
    phi, xi, eta = field.acms.phi, field.acms.xi, field.acms.eta
    d_phi, d_xi, d_eta = field.d_phi, field.d_xi, field.d_eta

    n1 = nijenhuis(phi, d_phi) + np.einsum("...ab,...i->...iab", exterior_derivative_1form(d_eta), xi)

    lie_eta = np.einsum("...ca,...cb->...ab", phi, d_eta) + np.einsum("...c,...bca->...ab", eta, d_phi)
    n2 = lie_eta - np.swapaxes(lie_eta, -2, -1)

    n3 = (
        np.einsum("...c,...cia->...ia", xi, d_phi)
        - np.einsum("...ca,...ci->...ia", phi, d_xi)
        + np.einsum("...ic,...ac->...ia", phi, d_xi)
    )

    n4 = np.einsum("...c,...ca->...a", xi, d_eta) + np.einsum("...c,...ac->...a", eta, d_xi)

    report = NijenhuisReport(n1=n1, n2=n2, n3=n3, n4=n4)
    logger.debug(f"Normality tensor maxima: {report.max_norms}")

    return report
