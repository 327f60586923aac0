from __future__ import annotations
import logging
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional

import numpy as np

from ..acms import ACMS
from ..enum import ChineaGonzalezClass, NamedType
from .invariants import coordinate_components, frame_components
from .subspaces import all_bases, frame_structure, FrameStructure, SubspaceBasis

logger = logging.getLogger(__name__)

PARALLEL_TOLERANCE = 1e-12
DEFAULT_RELATIVE_TOLERANCE = 1e-8


def class_span(*indices: int) -> FrozenSet[ChineaGonzalezClass]:
    """
    The classes C_m for the given numbers m.
    """
    return frozenset(ChineaGonzalezClass(f"C{i}") for i in indices)


NAMED_TYPE_SPANS: Dict[NamedType, FrozenSet[ChineaGonzalezClass]] = {
    NamedType.COSYMPLECTIC: class_span(),
    NamedType.ALMOST_COSYMPLECTIC: class_span(2, 9),
    NamedType.QUASI_SASAKIAN: class_span(6, 7),
    NamedType.A_KENMOTSU: class_span(5),
    NamedType.A_SASAKIAN: class_span(6),
    NamedType.NEARLY_K_COSYMPLECTIC: class_span(1),
    NamedType.QUASI_K_COSYMPLECTIC: class_span(1, 2, 9, 10),
    NamedType.SEMI_COSYMPLECTIC: class_span(1, 2, 3, 7, 8, 9, 10, 11, 12),
    NamedType.TRANS_SASAKIAN: class_span(5, 6),
    NamedType.NEARLY_TRANS_SASAKIAN: class_span(1, 5, 6),
    NamedType.ALMOST_K_CONTACT: class_span(*range(1, 11)),
    NamedType.NORMAL: class_span(*range(3, 9))
}


class ClassDecomposition(NamedTuple):
    """
    Orthogonal decomposition alpha = beta_1 + ... + beta_12 + residual of tensors sampled on a batch of points.
    beta[n, m - 1] holds the coordinate components of beta_m at point n.
    """
    beta: np.ndarray
    component_norms: np.ndarray
    residual_norm: np.ndarray
    alpha_norm: np.ndarray

    def norm(self, class_id: ChineaGonzalezClass) -> np.ndarray:
        return self.component_norms[:, ChineaGonzalezClass(class_id).index - 1]

    def __len__(self) -> int:
        return len(self.alpha_norm)


def decompose(
        alpha: np.ndarray,
        structure: FrameStructure,
        bases: Optional[Mapping[ChineaGonzalezClass, SubspaceBasis]] = None,
        g: Optional[np.ndarray] = None
) -> ClassDecomposition:
    """
    Projects tensors of C(V) onto the twelve classes, beta_m = sum_b <alpha, b> b over an orthonormal basis of C_m.

    Parameters
    ----------
    alpha : np.ndarray
        Coordinate components, shape (n, 7, 7, 7).
    structure : FrameStructure
        Frames at the points and the frame matrices of phi.
    bases : Optional[Mapping[ChineaGonzalezClass, SubspaceBasis]]
        Bases of the classes. Built from the frame matrices of phi if not given.
    g : Optional[np.ndarray]
        The metric the frames are orthonormal for. Identity if not given.

    Returns
    -------
    decomposition : ClassDecomposition
        The components.
    """
    alpha = np.asarray(alpha, dtype=float).reshape(-1, 7, 7, 7)
    if bases is None:
        bases = all_bases(structure.phi)

    flat = frame_components(alpha, structure.frames).reshape(len(alpha), -1)

    components = []
    norms = []
    for class_id in ChineaGonzalezClass.irreducible():
        coefficients = flat @ bases[class_id].vectors
        components.append(coefficients @ bases[class_id].vectors.T)
        norms.append(np.linalg.norm(coefficients, axis=1))

    components = np.stack(components, axis=1)
    residual = flat - components.sum(axis=1)
    beta = coordinate_components(
        components.reshape(len(alpha), len(components[0]), 7, 7, 7),
        structure.frames[:, None],
        g
    )
    logger.debug(f"Decomposed {len(alpha)} tensors.")

    return ClassDecomposition(
        beta=beta,
        component_norms=np.stack(norms, axis=1),
        residual_norm=np.linalg.norm(residual, axis=1),
        alpha_norm=np.linalg.norm(flat, axis=1)
    )


def decompose_structure(alpha: np.ndarray, acms: ACMS) -> ClassDecomposition:
    """
    Decomposition in the unitary frames of a structure sampled on the same points as alpha.
    """
    return decompose(alpha, frame_structure(acms), g=acms.g)


class ClassificationReport(NamedTuple):
    """
    Verdict per named type, with the largest ratio |beta_m| / |alpha| over classes outside the type's span and
    over the non-parallel points.
    """
    verdicts: Dict[NamedType, bool]
    worst_ratios: Dict[NamedType, float]
    tolerance: float
    n_points: int
    parallel_points: int

    @property
    def satisfied(self) -> List[NamedType]:
        """
        Satisfied types, smallest span first.
        """
        return sorted(
            (named_type for named_type, verdict in self.verdicts.items() if verdict),
            key=lambda named_type: (len(NAMED_TYPE_SPANS[named_type]), list(NamedType).index(named_type))
        )

    @property
    def verdict(self) -> Optional[NamedType]:
        satisfied = self.satisfied
        return satisfied[0] if satisfied else None


def classify(
        decomposition: ClassDecomposition,
        tol_rel: float = DEFAULT_RELATIVE_TOLERANCE,
        parallel_tolerance: float = PARALLEL_TOLERANCE
) -> ClassificationReport:
    """
    Decides which named types a sampled structure belongs to. A type holds when, at every point off the parallel
    locus |alpha| <= parallel_tolerance, every component outside its span has |beta_m| <= tol_rel * |alpha|.

    Parameters
    ----------
    decomposition : ClassDecomposition
        Decomposition of nabla omega at every sample point.
    tol_rel : float
        Relative tolerance.
    parallel_tolerance : float
        Norm below which a point belongs to the parallel locus.

    Returns
    -------
    report : ClassificationReport
        Verdicts.
    """
    active = decomposition.alpha_norm > parallel_tolerance
    ratios = decomposition.component_norms[active] / decomposition.alpha_norm[active, None]

    verdicts = {}
    worst_ratios = {}
    for named_type, span in NAMED_TYPE_SPANS.items():
        outside = [c.index - 1 for c in ChineaGonzalezClass.irreducible() if c not in span]
        worst = float(np.max(ratios[:, outside], initial=0.0)) if outside else 0.0
        worst_ratios[named_type] = worst
        verdicts[named_type] = worst <= tol_rel

    report = ClassificationReport(
        verdicts=verdicts,
        worst_ratios=worst_ratios,
        tolerance=tol_rel,
        n_points=len(decomposition),
        parallel_points=int(np.sum(~active))
    )
    logger.info(f"Classified {report.n_points} points, most specific type: {report.verdict}")

    return report
