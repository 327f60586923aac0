"""
Claims ledger for the containment theorem on standard structures xi -| phi over a parallel G2 3-form. Each case
states that, under its hypotheses and nabla xi != 0, nabla omega lies in a sum of classes. The cases are measured as
claims. The pointwise identities relating the components of nabla omega to the derivatives of xi are asserted, as is
the reverse direction d omega != 0 for every non-parallel field.
"""
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Tuple

import numpy as np

from ..acms import normality_tensors, StructureField
from ..enum import ChineaGonzalezClass, Hypothesis, Status
from ..fields import (
    codifferential,
    DifferentiationContext,
    eta_jet,
    exterior_derivative,
    lie_derivative_3form,
    LatticeSampling,
    nabla_omega,
    nabla_omega_leibniz,
    omega_jet,
    sample_structure,
    UnitVectorField
)
from .decomposition import class_span, ClassDecomposition, decompose, DEFAULT_RELATIVE_TOLERANCE, PARALLEL_TOLERANCE
from .invariants import frame_components, invariants_from_frame_components, QuadraticInvariants
from .subspaces import frame_structure

logger = logging.getLogger(__name__)

HYPOTHESIS_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-8
LEIBNIZ_TOLERANCE = 1e-9
D_OMEGA_THRESHOLD = 1e-4
LEIBNIZ_IDENTITY = "nabla omega closed form = Leibniz"


class TheoremCase(NamedTuple):
    case: int
    hypotheses: Tuple[Hypothesis, ...]
    span: FrozenSet[ChineaGonzalezClass]


THEOREM_CASES: Tuple[TheoremCase, ...] = (
    TheoremCase(1, (), class_span(5, 6, 7, 8, 9, 10, 12)),
    TheoremCase(2, (Hypothesis.DIVERGENCE_FREE,), class_span(6, 7, 8, 9, 10, 12)),
    TheoremCase(3, (Hypothesis.GEODESIC,), class_span(5, 6, 7, 8, 9, 10)),
    TheoremCase(4, (Hypothesis.DIVERGENCE_FREE, Hypothesis.GEODESIC), class_span(6, 7, 8, 9, 10)),
    TheoremCase(5, (Hypothesis.NORMAL,), class_span(5, 6, 7, 8)),
    TheoremCase(6, (Hypothesis.NORMAL, Hypothesis.DIVERGENCE_FREE), class_span(6, 7, 8))
)


class FieldEvaluation(NamedTuple):
    """
    Everything the ledger needs from one field: its decomposition, its invariants, the measured size of each
    hypothesis and the residuals of the pointwise identities.
    """
    name: str
    decomposition: ClassDecomposition
    invariants: QuadraticInvariants
    hypothesis_measures: Dict[Hypothesis, float]
    identity_residuals: Dict[str, float]
    d_omega_max: float = 0.0
    tolerance: float = HYPOTHESIS_TOLERANCE

    @property
    def active(self) -> np.ndarray:
        return self.decomposition.alpha_norm > PARALLEL_TOLERANCE

    def holds(self, hypothesis: Hypothesis) -> bool:
        if hypothesis == Hypothesis.NON_PARALLEL:
            return bool(np.any(self.active))
        return self.hypothesis_measures[hypothesis] <= self.tolerance

    def hypotheses(self) -> Dict[str, bool]:
        return {str(hypothesis): self.holds(hypothesis) for hypothesis in Hypothesis}


class ClaimResult(NamedTuple):
    case: int
    hypotheses: Tuple[Hypothesis, ...]
    span: Tuple[ChineaGonzalezClass, ...]
    status: Status
    worst_ratio: Optional[float]
    excluded_norms: Dict[str, float]
    fields_exercised: List[str]
    tolerance: float


class IdentityResult(NamedTuple):
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


class ClosednessResult(NamedTuple):
    """
    d omega = 0 exactly where nabla xi = 0. A non-parallel field keeps max |d omega| above `threshold`, a parallel
    one within `tolerance`.
    """
    name: str
    non_parallel: bool
    d_omega_max: float
    threshold: float
    tolerance: float

    @property
    def label(self) -> str:
        if self.non_parallel:
            return f"d omega != 0 for non-parallel {self.name}"
        return f"d omega = 0 for parallel {self.name}"

    @property
    def passed(self) -> bool:
        if self.non_parallel:
            return self.d_omega_max > self.threshold
        return self.d_omega_max <= self.tolerance


class TheoremLedger(NamedTuple):
    claims: List[ClaimResult]
    identities: List[IdentityResult]
    closedness: List[ClosednessResult]
    fields: Dict[str, Dict[str, bool]]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in (*self.identities, *self.closedness))

    @property
    def first_failure(self) -> Optional[str]:
        for identity in self.identities:
            if not identity.passed:
                return identity.name
        for result in self.closedness:
            if not result.passed:
                return result.label
        return None


def _relative(residual: np.ndarray, scale: float) -> float:
    return float(np.max(np.abs(residual), initial=0.0) / max(scale, 1.0))


def _pointwise_norms(tensor: np.ndarray) -> np.ndarray:
    return np.linalg.norm(tensor.reshape(len(tensor), -1), axis=1)


def evaluate_field(
        name: str,
        xi: UnitVectorField,
        sampling: LatticeSampling,
        context: DifferentiationContext = DifferentiationContext(),
        hypothesis_tolerance: float = HYPOTHESIS_TOLERANCE
) -> FieldEvaluation:
    """
    Samples the standard structure of a unit field, decomposes nabla omega at every point and measures the
    hypotheses and identities of the containment theorem.

    Parameters
    ----------
    name : str
        Label of the field in the ledger.
    xi : UnitVectorField
        The unit field.
    sampling : LatticeSampling
        Sample points.
    context : DifferentiationContext
        Differentiation mode and metric.
    hypothesis_tolerance : float
        Absolute tolerance below which a hypothesis counts as satisfied at every point.

    Returns
    -------
    evaluation : FieldEvaluation
        Measures of the field.
    """
    field: StructureField = sample_structure(xi, sampling.points, context)
    g = context.g
    acms = field.acms

    alpha = nabla_omega(field)
    structure = frame_structure(acms)
    decomposition = decompose(alpha, structure, g=g)
    invariants = invariants_from_frame_components(frame_components(alpha, structure.frames), structure.phi)

    # nabla_{f_j} xi for the frame vectors, V[p, j, i]
    derivatives_along_frame = np.einsum("pki,pkj->pji", field.d_xi, structure.frames)
    frame_norms_sq = np.einsum("pji,il,pjl->pj", derivatives_along_frame, g, derivatives_along_frame)
    horizontal_sq = frame_norms_sq[:, :-1].sum(axis=1)
    geodesic_sq = frame_norms_sq[:, -1]

    delta_eta = codifferential(eta_jet(field), context)
    delta_omega = codifferential(omega_jet(field), context)
    delta_omega_xi = np.einsum("pi,pi->p", delta_omega, acms.xi)
    d_omega = exterior_derivative(omega_jet(field))

    normality = normality_tensors(field)

    norms_sq = decomposition.component_norms ** 2
    i = {m: invariants.invariant(m) for m in (1, 5, 6, 16)}
    scale_sq = float(np.max(invariants.norm_sq, initial=0.0))
    scale = np.sqrt(scale_sq)
    g_inv = np.linalg.inv(g)

    identity_residuals = {
        "i1 = 4 i6": _relative(i[1] - 4 * i[6], scale_sq),
        "i6 = sum |nabla_e xi|^2": _relative(i[6] - horizontal_sq, scale_sq),
        "i5 = 4 i16": _relative(i[5] - 4 * i[16], scale_sq),
        "i16 = |nabla_xi xi|^2": _relative(i[16] - geodesic_sq, scale_sq),
        "|beta11|^2 = i5": _relative(norms_sq[:, 10] - i[5], scale_sq),
        "|beta12|^2 = 2 i16": _relative(norms_sq[:, 11] - 2 * i[16], scale_sq),
        "|beta5|^2 = (delta eta)^2 / 3": _relative(norms_sq[:, 4] - delta_eta ** 2 / 3, scale_sq),
        "|beta6|^2 = (delta omega(xi))^2 / 3": _relative(norms_sq[:, 5] - delta_omega_xi ** 2 / 3, scale_sq),
        "c12(nabla omega) = -delta omega": _relative(
            np.einsum("xy,pxyz->pz", g_inv, alpha) + delta_omega, scale
        ),
        "-d omega = L_xi phi": _relative(d_omega + lie_derivative_3form(field.d_xi, field.phi3), scale),
        LEIBNIZ_IDENTITY: _relative(alpha - nabla_omega_leibniz(xi, sampling.points, context), scale),
        "nabla omega in C(V)": _relative(decomposition.residual_norm, scale)
    }
    for identity, residual in invariants.norm_identity_residuals().items():
        identity_residuals[f"{identity} identity"] = _relative(residual, scale_sq)

    hypothesis_measures = {
        Hypothesis.NON_PARALLEL: float(np.max(decomposition.alpha_norm, initial=0.0)),
        Hypothesis.DIVERGENCE_FREE: float(np.max(np.abs(delta_eta), initial=0.0)),
        Hypothesis.GEODESIC: float(np.sqrt(np.max(geodesic_sq, initial=0.0))),
        Hypothesis.NORMAL: float(np.max(_pointwise_norms(normality.n1), initial=0.0))
    }
    logger.debug(f"Evaluated field {name}: {hypothesis_measures}")

    return FieldEvaluation(
        name=name,
        decomposition=decomposition,
        invariants=invariants,
        hypothesis_measures=hypothesis_measures,
        identity_residuals=identity_residuals,
        d_omega_max=float(np.max(_pointwise_norms(d_omega), initial=0.0)),
        tolerance=hypothesis_tolerance
    )


def _claim(case: TheoremCase, evaluations: List[FieldEvaluation], tol_rel: float) -> ClaimResult:
    outside = [c for c in ChineaGonzalezClass.irreducible() if c not in case.span]
    exercised = [
        evaluation for evaluation in evaluations
        if evaluation.holds(Hypothesis.NON_PARALLEL) and all(evaluation.holds(h) for h in case.hypotheses)
    ]

    if not exercised:
        logger.warning(f"Case {case.case} of the containment theorem is not exercised by any field.")
        return ClaimResult(
            case=case.case,
            hypotheses=case.hypotheses,
            span=tuple(sorted(case.span, key=lambda c: c.index)),
            status=Status.NOT_EXERCISED,
            worst_ratio=None,
            excluded_norms={},
            fields_exercised=[],
            tolerance=tol_rel
        )

    worst_ratio = 0.0
    excluded_norms = {str(c): 0.0 for c in outside}
    for evaluation in exercised:
        decomposition = evaluation.decomposition
        active = evaluation.active
        for c in outside:
            norms = decomposition.norm(c)[active]
            excluded_norms[str(c)] = max(excluded_norms[str(c)], float(np.max(norms)))
            worst_ratio = max(worst_ratio, float(np.max(norms / decomposition.alpha_norm[active])))

    return ClaimResult(
        case=case.case,
        hypotheses=case.hypotheses,
        span=tuple(sorted(case.span, key=lambda c: c.index)),
        status=Status.PASS if worst_ratio <= tol_rel else Status.FAIL,
        worst_ratio=worst_ratio,
        excluded_norms=excluded_norms,
        fields_exercised=[evaluation.name for evaluation in exercised],
        tolerance=tol_rel
    )


def ledger_from_evaluations(
        evaluations: List[FieldEvaluation],
        tol_rel: float = DEFAULT_RELATIVE_TOLERANCE,
        identity_tolerance: float = IDENTITY_TOLERANCE
) -> TheoremLedger:
    """
    Assembles the ledger of already evaluated fields. Identity residuals are the worst over all fields; each field
    also checks that d omega vanishes exactly when it is parallel.
    """
    identities = {}
    for evaluation in evaluations:
        for identity, residual in evaluation.identity_residuals.items():
            identities[identity] = max(identities.get(identity, 0.0), residual)

    return TheoremLedger(
        claims=[_claim(case, evaluations, tol_rel) for case in THEOREM_CASES],
        identities=[
            IdentityResult(
                name,
                residual,
                min(identity_tolerance, LEIBNIZ_TOLERANCE) if name == LEIBNIZ_IDENTITY else identity_tolerance
            )
            for name, residual in identities.items()
        ],
        closedness=[
            ClosednessResult(
                name=evaluation.name,
                non_parallel=evaluation.holds(Hypothesis.NON_PARALLEL),
                d_omega_max=evaluation.d_omega_max,
                threshold=D_OMEGA_THRESHOLD,
                tolerance=evaluation.tolerance
            )
            for evaluation in evaluations
        ],
        fields={evaluation.name: evaluation.hypotheses() for evaluation in evaluations}
    )


def theorem_suite(
        fields: Mapping[str, UnitVectorField],
        sampling: LatticeSampling,
        context: DifferentiationContext = DifferentiationContext(),
        tol_rel: float = DEFAULT_RELATIVE_TOLERANCE,
        identity_tolerance: float = IDENTITY_TOLERANCE,
        max_workers: int = 1
) -> TheoremLedger:
    """
    Runs the containment theorem over a family of unit fields.

    Each of the six cases gets the status PASS when every exercising field keeps the components outside the case's
    span within tol_rel * |nabla omega| at its non-parallel points, FAIL otherwise, and NOT_EXERCISED when no field
    satisfies its hypotheses. The pointwise identities between the components and the derivatives of xi, together
    with d omega != 0 for every non-parallel field, decide whether the ledger passes.

    Parameters
    ----------
    fields : Mapping[str, UnitVectorField]
        Named unit fields.
    sampling : LatticeSampling
        Sample points.
    context : DifferentiationContext
        Differentiation mode and metric.
    tol_rel : float
        Relative tolerance of the containments.
    identity_tolerance : float
        Tolerance of the identity residuals, relative to the largest |nabla omega|.
    max_workers : int
        Number of threads evaluating fields.

    Returns
    -------
    ledger : TheoremLedger
        Claims and identities.
    """
    if not fields:
        raise ValueError("At least one field is required, got an empty family.")

    def evaluate(item):
        return evaluate_field(item[0], item[1], sampling, context)

    logger.info(f"Running the containment theorem over {len(fields)} fields on {len(sampling)} points.")
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            evaluations = list(executor.map(evaluate, fields.items()))
    else:
        evaluations = [evaluate(item) for item in fields.items()]

    return ledger_from_evaluations(evaluations, tol_rel, identity_tolerance)
