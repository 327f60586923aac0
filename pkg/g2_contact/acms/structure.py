from __future__ import annotations
import logging
from typing import Dict, NamedTuple, Optional

import numpy as np

from ..algebra7 import cross_product_matrix, dense_three_form, inner, KForm7, ThreeFormLike, wedge

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-10
RANK_TOLERANCE = 1e-8


class ACS(NamedTuple):
    """
    Almost contact structure (phi, xi, eta). Arrays may carry leading batch axes: phi (..., 7, 7), xi (..., 7) and
    eta (..., 7).
    """
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray

    def rank(self) -> np.ndarray:
        """
        Numerical rank of phi, counting singular values above 1e-8 times the largest one.

        Returns
        -------
        rank : np.ndarray
            Integer ranks, shape (...).
        """
        singular_values = np.linalg.svd(self.phi, compute_uv=False)
        return np.sum(singular_values > RANK_TOLERANCE * singular_values[..., :1], axis=-1)

    def axiom_residuals(self) -> Dict[str, float]:
        """
        Maximum residuals of phi^2 = -I + eta (x) xi, eta(xi) = 1, phi xi = 0 and eta o phi = 0, and the worst rank
        deviation from 6.

        Returns
        -------
        residuals : Dict[str, float]
            Residual maxima over the batch.
        """
        identity = np.eye(self.phi.shape[-1])
        phi_squared = self.phi @ self.phi + identity - np.einsum("...i,...j->...ij", self.xi, self.eta)

        return {
            "phi_squared": float(np.max(np.linalg.norm(phi_squared, axis=(-2, -1)))),
            "eta_xi": float(np.max(np.abs(np.einsum("...i,...i->...", self.eta, self.xi) - 1.0))),
            "phi_xi": float(np.max(np.linalg.norm(np.einsum("...ij,...j->...i", self.phi, self.xi), axis=-1))),
            "eta_phi": float(np.max(np.linalg.norm(np.einsum("...i,...ij->...j", self.eta, self.phi), axis=-1))),
            "rank": float(np.max(np.abs(self.rank() - 6)))
        }


class ACMS:
    """
    Almost contact metric structure (phi, xi, eta, g) with fundamental 2-form omega(X, Y) = g(X, phi Y). The metric is
    constant; the other entries may carry leading batch axes.
    """

    def __init__(self, acs: ACS, g: np.ndarray, omega: Optional[np.ndarray] = None):
        """
        Initializes the structure.

        Parameters
        ----------
        acs : ACS
            The almost contact structure.
        g : np.ndarray
            The 7x7 metric.
        omega : Optional[np.ndarray]
            Dense components of the fundamental 2-form. Computed as g phi if not given.
        """
        self.acs = acs
        self.g = np.asarray(g, dtype=float)
        self.omega = np.einsum("ik,...kj->...ij", self.g, acs.phi) if omega is None else omega

    @property
    def phi(self) -> np.ndarray:
        return self.acs.phi

    @property
    def xi(self) -> np.ndarray:
        return self.acs.xi

    @property
    def eta(self) -> np.ndarray:
        return self.acs.eta

    @property
    def batch_shape(self) -> tuple:
        return self.xi.shape[:-1]

    def axiom_residuals(self) -> Dict[str, float]:
        """
        Residual maxima of the almost contact axioms together with the compatibility g(phi X, phi Y) =
        g(X, Y) - eta(X) eta(Y), the duality eta = g(xi, .) and the definition of omega.

        Returns
        -------
        residuals : Dict[str, float]
            Residual maxima over the batch.
        """
        residuals = self.acs.axiom_residuals()

        compatibility = (
            np.einsum("...ki,kl,...lj->...ij", self.phi, self.g, self.phi)
            - self.g
            + np.einsum("...i,...j->...ij", self.eta, self.eta)
        )
        residuals["compatibility"] = float(np.max(np.linalg.norm(compatibility, axis=(-2, -1))))
        residuals["duality"] = float(np.max(np.linalg.norm(self.eta - self.xi @ self.g, axis=-1)))

        fundamental = self.omega - np.einsum("ik,...kj->...ij", self.g, self.phi)
        residuals["fundamental_form"] = float(np.max(np.linalg.norm(fundamental, axis=(-2, -1))))
        residuals["omega_antisymmetry"] = float(
            np.max(np.linalg.norm(self.omega + np.swapaxes(self.omega, -2, -1), axis=(-2, -1)))
        )

        return residuals

    def nondegeneracy(self) -> np.ndarray:
        """
        Coefficient of eta ^ omega ^ omega ^ omega on dx^1 ^ ... ^ dx^7 at each point.

        Returns
        -------
        coefficients : np.ndarray
            Shape (...).
        """
        eta = self.eta.reshape(-1, self.eta.shape[-1])
        omega = self.omega.reshape(-1, *self.omega.shape[-2:])

        coefficients = np.empty(len(eta))
        for index, (eta_point, omega_point) in enumerate(zip(eta, omega)):
            two_form = KForm7.from_dense(omega_point)
            top = wedge(KForm7(1, eta_point), wedge(two_form, wedge(two_form, two_form)))
            coefficients[index] = top.coefficients[0]

        return coefficients.reshape(self.batch_shape)


def standard_structure(phi3: ThreeFormLike, g: np.ndarray, xi: np.ndarray) -> ACMS:
    """
    The standard structure of a unit vector field on a G2-manifold: phi(X) = xi × X, eta = g(xi, .) and
    omega(X, Y) = g(X, phi Y).

    Parameters
    ----------
    phi3 : ThreeFormLike
        The G2 3-form.
    g : np.ndarray
        The metric.
    xi : np.ndarray
        Unit vectors of shape (..., 7).

    Returns
    -------
    structure : ACMS
        The almost contact metric structure.
    """
    xi = np.asarray(xi, dtype=float)
    g = np.asarray(g, dtype=float)
    if np.max(np.abs(inner(g, xi, xi) - 1.0)) > UNIT_TOLERANCE:
        raise ValueError("xi not normalized")

    phi = cross_product_matrix(phi3, g, xi)

    return ACMS(ACS(phi=phi, xi=xi, eta=xi @ g), g)


class StructureField:
    """
    An almost contact metric structure sampled on a batch of points together with its first derivatives. Derivative
    arrays put the differentiation index first: d_phi[..., k, i, j] = d_k phi_ij, d_xi[..., k, i] = d_k xi^i and
    d_eta[..., k, i] = d_k eta_i.
    """

    def __init__(
            self,
            acms: ACMS,
            d_phi: np.ndarray,
            d_xi: np.ndarray,
            d_eta: np.ndarray,
            phi3: Optional[ThreeFormLike] = None,
            points: Optional[np.ndarray] = None
    ):
        self.acms = acms
        self.d_phi = d_phi
        self.d_xi = d_xi
        self.d_eta = d_eta
        self.phi3 = None if phi3 is None else dense_three_form(phi3)
        self.points = points

    @property
    def d_omega(self) -> np.ndarray:
        """
        Derivatives of the fundamental 2-form, d_omega[..., k, i, j] = d_k omega_ij.

        Returns
        -------
        d_omega : np.ndarray
            Shape (..., 7, 7, 7).
        """
        return np.einsum("il,...klj->...kij", self.acms.g, self.d_phi)

    def __len__(self) -> int:
        return int(np.prod(self.acms.batch_shape))


def standard_structure_field(
        phi3: ThreeFormLike,
        g: np.ndarray,
        xi: np.ndarray,
        d_xi: np.ndarray,
        points: Optional[np.ndarray] = None
) -> StructureField:
    """
    Standard structure of a unit vector field with its exact derivatives. Since X -> xi × X is linear in xi, the
    derivative of phi is the cross product matrix of the derivative of xi.

    Parameters
    ----------
    phi3 : ThreeFormLike
        The parallel G2 3-form.
    g : np.ndarray
        The constant metric.
    xi : np.ndarray
        Unit vectors, shape (P, 7).
    d_xi : np.ndarray
        Derivatives d_k xi^i, shape (P, 7, 7).
    points : Optional[np.ndarray]
        Sample points, shape (P, 7).

    Returns
    -------
    field : StructureField
        The structure field.
    """
    acms = standard_structure(phi3, g, xi)
    d_phi = cross_product_matrix(phi3, g, d_xi)
    d_eta = d_xi @ acms.g
    logger.debug(f"Built standard structure field on {len(xi)} points.")

    return StructureField(acms, d_phi=d_phi, d_xi=d_xi, d_eta=d_eta, phi3=phi3, points=points)
