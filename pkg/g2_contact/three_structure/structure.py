from __future__ import annotations
import logging
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

from ..acms import ACMS, ACS, standard_structure_field, StructureField
from ..algebra7 import cross, dense_three_form, model_three_form, ThreeFormLike
from ..fields import DegenerateFieldError, DifferentiationContext, LatticeSampling, UnitVectorField

logger = logging.getLogger(__name__)

DEGENERATE_PAIR_THRESHOLD = 1e-8

FieldLike = Union[UnitVectorField, np.ndarray]


class AlmostContact3(NamedTuple):
    """
    Three almost contact metric structures sharing the metric g, sampled with their first derivatives, and the
    input fields u and v at the sample points.
    """
    fields: Tuple[StructureField, StructureField, StructureField]
    u: np.ndarray
    v: np.ndarray
    g: np.ndarray
    phi3: np.ndarray
    points: np.ndarray

    @property
    def structures(self) -> Tuple[ACMS, ACMS, ACMS]:
        return tuple(field.acms for field in self.fields)

    def __len__(self) -> int:
        return len(self.points)


def _unit_field(field: FieldLike, g: np.ndarray) -> UnitVectorField:
    if isinstance(field, UnitVectorField):
        return field
    return UnitVectorField.constant(np.asarray(field, dtype=float), g)


def build(
        u: FieldLike,
        v: FieldLike,
        sampling: Union[LatticeSampling, np.ndarray],
        phi3: Optional[ThreeFormLike] = None,
        context: DifferentiationContext = DifferentiationContext()
) -> AlmostContact3:
    """
    Almost contact metric 3-structure of two nowhere parallel unit fields u and v,

        xi_1 = u, xi_2 = u × v / |u × v|, phi_i = xi_i × (.), eta_i = g(xi_i, .) for i = 1, 2,
        phi_3 = phi_1 phi_2 - eta_2 (x) xi_1, xi_3 = phi_1 xi_2, eta_3 = eta_1 o phi_2.

    v need not be orthogonal to u. Derivatives follow from the product rule applied to the derivatives of u and v.

    Parameters
    ----------
    u : FieldLike
        Unit field, or a constant vector normalized with the metric.
    v : FieldLike
        Unit field, or a constant vector normalized with the metric.
    sampling : Union[LatticeSampling, np.ndarray]
        Sample points, or a sampling providing them.
    phi3 : Optional[ThreeFormLike]
        The parallel G2 3-form. The model form if not given.
    context : DifferentiationContext
        Differentiation mode and metric.

    Returns
    -------
    ac3 : AlmostContact3
        The three structures.
    """
    points = sampling.points if isinstance(sampling, LatticeSampling) else np.atleast_2d(sampling)
    phi3 = dense_three_form(model_three_form() if phi3 is None else phi3)
    g = context.g

    u_values, d_u = _unit_field(u, g).jet(points, context)
    v_values, d_v = _unit_field(v, g).jet(points, context)

    w = cross(phi3, g, u_values, v_values)
    d_w = cross(phi3, g, d_u, v_values[:, None, :]) + cross(phi3, g, u_values[:, None, :], d_v)
    norms = np.sqrt(np.einsum("pi,ij,pj->p", w, g, w))

    degenerate = np.flatnonzero(norms <= DEGENERATE_PAIR_THRESHOLD)
    if degenerate.size:
        raise DegenerateFieldError(f"degenerate pair at sample point {points[degenerate[0]].tolist()}")

    d_norms = np.einsum("pki,ij,pj->pk", d_w, g, w) / norms[:, None]
    xi2 = w / norms[:, None]
    d_xi2 = d_w / norms[:, None, None] - np.einsum("pi,pk->pki", w, d_norms) / norms[:, None, None] ** 2

    first = standard_structure_field(phi3, g, u_values, d_u, points=points)
    second = standard_structure_field(phi3, g, xi2, d_xi2, points=points)

    phi1, xi1, eta1 = first.acms.acs
    phi2, _, eta2 = second.acms.acs
    d_phi1, d_xi1, d_eta1 = first.d_phi, first.d_xi, first.d_eta
    d_phi2, d_eta2 = second.d_phi, second.d_eta

    phi_3 = phi1 @ phi2 - np.einsum("pi,pj->pij", xi1, eta2)
    xi3 = np.einsum("pij,pj->pi", phi1, xi2)
    eta3 = np.einsum("pi,pij->pj", eta1, phi2)

    d_phi_3 = (
        np.einsum("pkil,plj->pkij", d_phi1, phi2)
        + np.einsum("pil,pklj->pkij", phi1, d_phi2)
        - np.einsum("pki,pj->pkij", d_xi1, eta2)
        - np.einsum("pi,pkj->pkij", xi1, d_eta2)
    )
    d_xi3 = np.einsum("pkij,pj->pki", d_phi1, xi2) + np.einsum("pij,pkj->pki", phi1, d_xi2)
    d_eta3 = np.einsum("pki,pij->pkj", d_eta1, phi2) + np.einsum("pi,pkij->pkj", eta1, d_phi2)

    third = StructureField(ACMS(ACS(phi_3, xi3, eta3), g), d_phi=d_phi_3, d_xi=d_xi3, d_eta=d_eta3, points=points)
    logger.info(f"Built almost contact metric 3-structure on {len(points)} points, min |u x v| = {norms.min():.3e}")

    return AlmostContact3(
        fields=(first, second, third),
        u=u_values,
        v=v_values,
        g=g,
        phi3=phi3,
        points=points
    )
