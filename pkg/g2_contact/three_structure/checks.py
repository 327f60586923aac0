from __future__ import annotations
import logging
from typing import Dict, NamedTuple, Tuple

import numpy as np

from ..acms import exterior_derivative_1form, normality_tensors, StructureField
from ..algebra7 import cross_product_matrix
from ..fields import exterior_derivative, omega_jet
from .structure import AlmostContact3

logger = logging.getLogger(__name__)

KUO_TOLERANCE = 1e-10
COSYMPLECTIC_TOLERANCE = 1e-12
CYCLIC_PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _max_norm(tensor: np.ndarray) -> float:
    tensor = np.asarray(tensor)
    return float(np.max(np.linalg.norm(tensor.reshape(len(tensor), -1), axis=1), initial=0.0))


def _label(name: str, permutation: Tuple[int, int, int]) -> str:
    return f"{name} ({', '.join(str(index + 1) for index in permutation)})"


class KuoReport(NamedTuple):
    """
    Maximum residuals of the 3-structure axioms for each cyclic permutation, of the conditions on the first two
    structures, of the derived identities, and of the axioms of each structure on its own.
    """
    residuals: Dict[str, float]
    precondition: Dict[str, float]
    derived: Dict[str, float]
    structures: Dict[str, Dict[str, float]]
    tolerance: float

    @property
    def passed(self) -> bool:
        return not self.violated

    @property
    def violated(self) -> Dict[str, float]:
        flat = {**self.precondition, **self.residuals, **self.derived}
        for structure, residuals in self.structures.items():
            flat.update({f"{structure} {name}": residual for name, residual in residuals.items()})
        return {name: residual for name, residual in flat.items() if residual > self.tolerance}


def kuo_axioms(ac3: AlmostContact3, tolerance: float = KUO_TOLERANCE) -> KuoReport:
    """
    Checks, for every cyclic permutation (i, j, k) of (1, 2, 3),

        eta_i(xi_j) = eta_j(xi_i) = 0,
        phi_i xi_j = -phi_j xi_i = xi_k,
        eta_i o phi_j = -eta_j o phi_i = eta_k,
        phi_i phi_j - eta_j (x) xi_i = -phi_j phi_i + eta_i (x) xi_j = phi_k,

    the four conditions on structures 1 and 2 from which the third structure is derived, and the identities
    xi_3 = (-v + eta_1(v) u) / |u × v|, g(xi_i, xi_j) = delta_ij and phi_3 = -xi_3 × (.) + 2 (eta_1 (x) xi_2 -
    eta_2 (x) xi_1).

    Parameters
    ----------
    ac3 : AlmostContact3
        The 3-structure.
    tolerance : float
        Tolerance of every residual.

    Returns
    -------
    report : KuoReport
        The residuals.
    """
    structures = ac3.structures
    phi = [s.phi for s in structures]
    xi = [s.xi for s in structures]
    eta = [s.eta for s in structures]

    def apply(matrix, vector):
        return np.einsum("pij,pj->pi", matrix, vector)

    def compose(form, matrix):
        return np.einsum("pi,pij->pj", form, matrix)

    def outer(vector, form):
        return np.einsum("pi,pj->pij", vector, form)

    def pairing(form, vector):
        return np.einsum("pi,pi->p", form, vector)

    residuals = {}
    for permutation in CYCLIC_PERMUTATIONS:
        i, j, k = permutation
        residuals[_label("ac3s1", permutation)] = max(
            _max_norm(pairing(eta[i], xi[j])[:, None]), _max_norm(pairing(eta[j], xi[i])[:, None])
        )
        residuals[_label("ac3s2", permutation)] = max(
            _max_norm(apply(phi[i], xi[j]) - xi[k]), _max_norm(apply(phi[j], xi[i]) + xi[k])
        )
        residuals[_label("ac3s3", permutation)] = max(
            _max_norm(compose(eta[i], phi[j]) - eta[k]), _max_norm(compose(eta[j], phi[i]) + eta[k])
        )
        residuals[_label("ac3s4", permutation)] = max(
            _max_norm(phi[i] @ phi[j] - outer(xi[i], eta[j]) - phi[k]),
            _max_norm(phi[j] @ phi[i] - outer(xi[j], eta[i]) + phi[k])
        )

    precondition = {
        "ac3s5": max(_max_norm(pairing(eta[0], xi[1])[:, None]), _max_norm(pairing(eta[1], xi[0])[:, None])),
        "ac3s6": _max_norm(apply(phi[0], xi[1]) + apply(phi[1], xi[0])),
        "ac3s7": _max_norm(compose(eta[0], phi[1]) + compose(eta[1], phi[0])),
        "ac3s8": _max_norm(phi[0] @ phi[1] - outer(xi[0], eta[1]) + phi[1] @ phi[0] - outer(xi[1], eta[0]))
    }

    u, v, g = ac3.u, ac3.v, ac3.g
    inner_uv = np.einsum("pi,ij,pj->p", u, g, v)
    cross_norms = np.sqrt(np.clip(1.0 - inner_uv ** 2, 0.0, None))
    expected_xi3 = (-v + inner_uv[:, None] * u) / cross_norms[:, None]
    reeb = np.stack(xi, axis=1)
    gram = np.einsum("pai,ij,pbj->pab", reeb, g, reeb) - np.eye(3)
    phi3_cross = -cross_product_matrix(ac3.phi3, g, xi[2]) + 2 * (outer(xi[1], eta[0]) - outer(xi[0], eta[1]))

    derived = {
        "xi3 = (-v + eta1(v) u) / |u x v|": _max_norm(xi[2] - expected_xi3),
        "reeb orthonormality": _max_norm(gram),
        "phi3 cross form": _max_norm(phi[2] - phi3_cross)
    }

    report = KuoReport(
        residuals=residuals,
        precondition=precondition,
        derived=derived,
        structures={f"structure {index + 1}": s.axiom_residuals() for index, s in enumerate(structures)},
        tolerance=tolerance
    )
    if not report.passed:
        logger.warning(f"3-structure axioms violated: {report.violated}")

    return report


class ThreeCosymplecticReport(NamedTuple):
    """
    Maxima of |d omega_i|, |d eta_i| and |N1_i| per structure, the Killing defect |L_xi g| of xi_1 and xi_2, and
    the derivative of phi_3 with the residual of its expansion through the derivatives of structures 1 and 2.
    """
    d_omega: Tuple[float, float, float]
    d_eta: Tuple[float, float, float]
    n1: Tuple[float, float, float]
    killing: Tuple[float, float]
    nabla_xi: Tuple[float, float]
    nabla_phi3: float
    chain_residual: float
    tolerance: float

    @property
    def is_three_cosymplectic(self) -> bool:
        return all(value <= self.tolerance for value in (*self.d_omega, *self.d_eta, *self.n1))

    @property
    def killing_equivalence(self) -> bool:
        """
        d omega_i = 0 exactly when xi_i is Killing, for i = 1, 2.
        """
        return all(
            (d_omega <= self.tolerance) == (killing <= self.tolerance)
            for d_omega, killing in zip(self.d_omega[:2], self.killing)
        )

    @property
    def parallel_phi3_holds(self) -> bool:
        """
        nabla xi_1 = nabla xi_2 = 0 forces nabla phi_3 = 0.
        """
        if max(self.nabla_xi) > self.tolerance:
            return True
        return self.nabla_phi3 <= self.tolerance


def _structure_measures(field: StructureField) -> Tuple[float, float, float]:
    d_omega = exterior_derivative(omega_jet(field))
    d_eta = exterior_derivative_1form(field.d_eta)
    n1 = normality_tensors(field).n1

    return _max_norm(d_omega), _max_norm(d_eta), _max_norm(n1)


def three_cosymplectic_check(ac3: AlmostContact3, tolerance: float = COSYMPLECTIC_TOLERANCE) -> ThreeCosymplecticReport:
    """
    Tests d omega_i = 0, d eta_i = 0 and N1_i = 0 for the three structures, the equivalence between closed omega_i
    and Killing xi_i for the two standard structures, and

        (nabla_X phi_3) Y = (nabla_X phi_1)(phi_2 Y) + phi_1 ((nabla_X phi_2) Y) - ((nabla_X eta_2) Y) xi_1
                            - eta_2(Y) nabla_X xi_1,

    evaluated through the cross-product form of phi_3, which vanishes when xi_1 and xi_2 are parallel.

    Parameters
    ----------
    ac3 : AlmostContact3
        The 3-structure.
    tolerance : float
        Absolute tolerance.

    Returns
    -------
    report : ThreeCosymplecticReport
        The measures.
    """
    measures = [_structure_measures(field) for field in ac3.fields]
    first, second, third = ac3.fields

    killing = tuple(_max_norm(field.d_eta + np.swapaxes(field.d_eta, -2, -1)) for field in (first, second))

    # phi_3 = -xi_3 x (.) + 2 (eta_1 (x) xi_2 - eta_2 (x) xi_1), differentiated term by term
    cross_derivative = (
        -cross_product_matrix(ac3.phi3, ac3.g, third.d_xi)
        + 2 * np.einsum("pki,pj->pkij", second.d_xi, first.acms.eta)
        + 2 * np.einsum("pi,pkj->pkij", second.acms.xi, first.d_eta)
        - 2 * np.einsum("pki,pj->pkij", first.d_xi, second.acms.eta)
        - 2 * np.einsum("pi,pkj->pkij", first.acms.xi, second.d_eta)
    )

    report = ThreeCosymplecticReport(
        d_omega=tuple(m[0] for m in measures),
        d_eta=tuple(m[1] for m in measures),
        n1=tuple(m[2] for m in measures),
        killing=killing,
        nabla_xi=(_max_norm(first.d_xi), _max_norm(second.d_xi)),
        nabla_phi3=_max_norm(third.d_phi),
        chain_residual=_max_norm(third.d_phi - cross_derivative),
        tolerance=tolerance
    )
    logger.info(f"3-cosymplectic: {report.is_three_cosymplectic}, max |nabla phi_3| = {report.nabla_phi3:.3e}")

    return report
