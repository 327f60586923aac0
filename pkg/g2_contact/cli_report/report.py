from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
import json
import logging
import os
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..acms import StructureField
from ..algebra7 import (
    cross,
    double_cross_check,
    four_term_check,
    inner,
    metric_from_three_form,
    model_three_form
)
from ..chinea_gonzalez import (
    all_bases,
    ClassDecomposition,
    classify,
    decompose,
    decompose_structure,
    evaluate_field,
    frame_components,
    frame_structure,
    FrameStructure,
    invariants_from_frame_components,
    ledger_from_evaluations,
    LEIBNIZ_TOLERANCE,
    N_INVARIANTS,
    PARALLEL_TOLERANCE,
    TheoremLedger
)
from ..enum import ChineaGonzalezClass, OutputFormat, Suite
from ..fields import (
    DifferentiationContext,
    LatticeSampling,
    nabla_omega,
    nabla_omega_leibniz,
    normalize,
    parallel_free_family,
    random_trig_vector_field,
    sample_structure,
    UnitVectorField
)
from ..three_structure import build, kuo_axioms, three_cosymplectic_check
from .config import RunConfig, thread_cap

logger = logging.getLogger(__name__)

ALGEBRA_SAMPLES = 10_000
FAMILY_SIZE = 2
CSV_FLOAT_FORMAT = "%.16e"
REPORT_FILE_NAMES = {
    OutputFormat.JSON: "report.json",
    OutputFormat.CSV: "report.csv",
    OutputFormat.TEXT: "report.txt"
}

COORDINATE_COLUMNS = [f"x{k}" for k in range(1, 8)]
INVARIANT_COLUMNS = [f"i{m}" for m in range(1, N_INVARIANTS + 1)]
CLASS_COLUMNS = [str(c) for c in ChineaGonzalezClass.irreducible()]


class Assertion(NamedTuple):
    """
    A measured value against its bound. The value must stay within the tolerance, or exceed it when `at_least`.
    """
    name: str
    residual: float
    tolerance: float
    at_least: bool = False

    @property
    def passed(self) -> bool:
        if self.at_least:
            return self.residual > self.tolerance
        return self.residual <= self.tolerance


def _plain(value: Any) -> Any:
    """
    Converts numpy scalars, enums, tuples and nested containers to JSON types.
    """
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, dict):
        return {str(_plain(key)): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class Report(NamedTuple):
    """
    Outcome of a run. Every verdict carries the tolerance it was judged against. `points` is the per-point table
    of coordinates, invariants, |nabla omega| and component norms when the classify suite ran.
    """
    config: Dict[str, Any]
    metadata: Dict[str, Any]
    assertions: List[Assertion]
    points: Optional[pd.DataFrame] = None
    component_summary: Optional[Dict[str, Dict[str, float]]] = None
    classification: Optional[Dict[str, Any]] = None
    theorems: Optional[Dict[str, Any]] = None
    three_structure: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return all(assertion.passed for assertion in self.assertions)

    @property
    def first_failure(self) -> Optional[Assertion]:
        return next((assertion for assertion in self.assertions if not assertion.passed), None)

    def to_dict(self) -> Dict[str, Any]:
        """
        Nested JSON-compatible representation.

        Returns
        -------
        report : Dict[str, Any]
            The report.
        """
        points = None
        if self.points is not None:
            points = {"columns": list(self.points.columns), "data": self.points.to_numpy().tolist()}

        return _plain({
            "config": self.config,
            "metadata": self.metadata,
            "passed": self.passed,
            "assertions": [
                {
                    "name": a.name,
                    "residual": a.residual,
                    "tolerance": a.tolerance,
                    "at_least": a.at_least,
                    "passed": a.passed
                }
                for a in self.assertions
            ],
            "points": points,
            "component_summary": self.component_summary,
            "classification": self.classification,
            "theorems": self.theorems,
            "three_structure": self.three_structure
        })

    @classmethod
    def from_dict(cls, content: Dict[str, Any]) -> Report:
        points = content.get("points")
        return cls(
            config=content["config"],
            metadata=content["metadata"],
            assertions=[
                Assertion(a["name"], a["residual"], a["tolerance"], a.get("at_least", False))
                for a in content["assertions"]
            ],
            points=None if points is None else pd.DataFrame(points["data"], columns=points["columns"]),
            component_summary=content.get("component_summary"),
            classification=content.get("classification"),
            theorems=content.get("theorems"),
            three_structure=content.get("three_structure")
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def load(cls, path: str) -> Report:
        with open(path) as file:
            return cls.from_dict(json.load(file))


def _max(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def _algebra_suite(rng: np.random.Generator, tolerance: float) -> List[Assertion]:
    phi = model_three_form()
    g = metric_from_three_form(phi)
    x, y, z = (rng.normal(size=(ALGEBRA_SAMPLES, 7)) for _ in range(3))
    norm_x, norm_y, norm_z = (np.sqrt(inner(g, v, v)) for v in (x, y, z))

    product = cross(phi, g, x, y)
    squared_norms = (norm_x * norm_y) ** 2
    lagrange = inner(g, product, product) - (squared_norms - inner(g, x, y) ** 2)
    antisymmetry = np.linalg.norm(product + cross(phi, g, y, x), axis=-1)

    return [
        Assertion("algebra: metric of the model 3-form", _max(g - np.eye(7)), tolerance),
        Assertion("algebra: x × y = -y × x", _max(antisymmetry / (norm_x * norm_y)), tolerance),
        Assertion("algebra: x × y orthogonal to x", _max(inner(g, product, x) / (norm_x ** 2 * norm_y)), tolerance),
        Assertion("algebra: x × y orthogonal to y", _max(inner(g, product, y) / (norm_x * norm_y ** 2)), tolerance),
        Assertion("algebra: |x × y|^2 = |x|^2 |y|^2 - g(x, y)^2", _max(lagrange / squared_norms), tolerance),
        Assertion(
            "algebra: double cross product",
            _max(double_cross_check(g, phi, x, y) / (norm_x ** 2 * norm_y)),
            tolerance
        ),
        Assertion(
            "algebra: four-term identity",
            _max(four_term_check(phi, g, x, y, z) / (norm_x ** 3 * norm_y * norm_z)),
            tolerance
        )
    ]


def _structure_assertions(label: str, field: StructureField, tolerance: float) -> List[Assertion]:
    return [
        Assertion(f"{label}: {name}", residual, tolerance)
        for name, residual in field.acms.axiom_residuals().items()
    ]


def _decompose_chunks(
        alpha: np.ndarray,
        structure: FrameStructure,
        g: np.ndarray,
        threads: int
) -> ClassDecomposition:
    bases = all_bases(structure.phi)
    if threads == 1:
        return decompose(alpha, structure, bases, g)

    chunks = np.array_split(np.arange(len(alpha)), min(threads, len(alpha)))

    def evaluate(indices: np.ndarray) -> ClassDecomposition:
        return decompose(alpha[indices], FrameStructure(structure.frames[indices], structure.phi[indices]), bases, g)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        parts = list(executor.map(evaluate, chunks))

    return ClassDecomposition(*(np.concatenate(arrays) for arrays in zip(*parts)))


def _component_summary(decomposition: ClassDecomposition) -> Dict[str, Dict[str, float]]:
    norms = decomposition.component_norms
    return {
        name: {"min": float(norms[:, m].min()), "max": float(norms[:, m].max()), "mean": float(norms[:, m].mean())}
        for m, name in enumerate(CLASS_COLUMNS)
    }


def _classify_suite(
        field: StructureField,
        xi: UnitVectorField,
        context: DifferentiationContext,
        tolerances: Dict[str, float],
        threads: int
) -> Tuple[pd.DataFrame, Dict[str, Dict[str, float]], Dict[str, Any], List[Assertion]]:
    g = field.acms.g
    alpha = nabla_omega(field)
    structure = frame_structure(field.acms)
    decomposition = _decompose_chunks(alpha, structure, g, threads)
    invariants = invariants_from_frame_components(frame_components(alpha, structure.frames), structure.phi)
    report = classify(decomposition, tolerances["relative"])

    points = pd.DataFrame(field.points, columns=COORDINATE_COLUMNS)
    points[INVARIANT_COLUMNS] = invariants.i
    points["alpha_norm"] = decomposition.alpha_norm
    points[CLASS_COLUMNS] = decomposition.component_norms

    scale = max(float(np.max(decomposition.alpha_norm, initial=0.0)), 1.0)
    assertions = [
        Assertion(
            "classify: nabla omega closed form = Leibniz",
            _max(alpha - nabla_omega_leibniz(xi, field.points, context)) / scale,
            min(tolerances["identity"], LEIBNIZ_TOLERANCE)
        ),
        Assertion("classify: nabla omega in C(V)", _max(decomposition.residual_norm) / scale, tolerances["identity"])
    ]
    for name, residual in invariants.norm_identity_residuals().items():
        assertions.append(Assertion(f"classify: {name} identity", _max(residual) / scale ** 2, tolerances["identity"]))

    classification = {
        "verdict": report.verdict,
        "satisfied": report.satisfied,
        "verdicts": report.verdicts,
        "worst_ratios": report.worst_ratios,
        "tolerance": report.tolerance,
        "parallel_points": report.parallel_points,
        "parallel_tolerance": PARALLEL_TOLERANCE
    }

    return points, _component_summary(decomposition), classification, assertions


def _ledger_dict(ledger: TheoremLedger) -> Dict[str, Any]:
    return {
        "claims": [claim._asdict() for claim in ledger.claims],
        "identities": [
            {"name": i.name, "residual": i.residual, "tolerance": i.tolerance, "passed": i.passed}
            for i in ledger.identities
        ],
        "closedness": [
            {
                "name": c.name,
                "non_parallel": c.non_parallel,
                "d_omega_max": c.d_omega_max,
                "threshold": c.threshold,
                "tolerance": c.tolerance,
                "passed": c.passed
            }
            for c in ledger.closedness
        ],
        "fields": ledger.fields
    }


def _theorem_suite(
        xi: UnitVectorField,
        sampling: LatticeSampling,
        context: DifferentiationContext,
        rng: np.random.Generator,
        tolerances: Dict[str, float],
        threads: int
) -> Tuple[Dict[str, Any], List[Assertion]]:
    fields = {"xi": xi}
    for index in range(1, FAMILY_SIZE + 1):
        fields[f"generic {index}"] = normalize(random_trig_vector_field(rng), sampling, context.metric)
    for index in range(1, FAMILY_SIZE + 1):
        fields[f"parallel-free {index}"] = normalize(parallel_free_family(rng), sampling, context.metric)

    def evaluate(item):
        return evaluate_field(item[0], item[1], sampling, context, tolerances["hypothesis"])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            evaluations = list(executor.map(evaluate, fields.items()))
    else:
        evaluations = [evaluate(item) for item in fields.items()]

    ledger = ledger_from_evaluations(evaluations, tolerances["relative"], tolerances["identity"])
    assertions = [Assertion(f"theorems: {i.name}", i.residual, i.tolerance) for i in ledger.identities]
    for closedness in ledger.closedness:
        if closedness.non_parallel:
            assertions.append(
                Assertion(f"theorems: {closedness.label}", closedness.d_omega_max, closedness.threshold, at_least=True)
            )
        else:
            assertions.append(Assertion(f"theorems: {closedness.label}", closedness.d_omega_max, closedness.tolerance))

    return _ledger_dict(ledger), assertions


def _three_structure_suite(
        config: RunConfig,
        sampling: LatticeSampling,
        context: DifferentiationContext
) -> Tuple[Dict[str, Any], List[Assertion]]:
    tolerances = config.tolerances
    u = UnitVectorField(config.spec.u, context.metric)
    v = UnitVectorField(config.spec.v, context.metric)
    ac3 = build(u, v, sampling, context=context)

    kuo = kuo_axioms(ac3, tolerances["kuo"])
    cosymplectic = three_cosymplectic_check(ac3, tolerances["cosymplectic"])

    assertions = [
        Assertion(f"three_structure: {name}", residual, tolerances["kuo"])
        for name, residual in {**kuo.precondition, **kuo.residuals, **kuo.derived}.items()
    ]
    for structure, residuals in kuo.structures.items():
        assertions.extend(
            Assertion(f"three_structure: {structure} {name}", residual, tolerances["kuo"])
            for name, residual in residuals.items()
        )
    assertions.append(Assertion("three_structure: nabla phi3 expansion", cosymplectic.chain_residual, tolerances["kuo"]))
    if not cosymplectic.parallel_phi3_holds:
        assertions.append(
            Assertion("three_structure: nabla phi3 = 0 for parallel xi1, xi2", cosymplectic.nabla_phi3,
                      tolerances["cosymplectic"])
        )

    classifications = {}
    for index, field in enumerate(ac3.fields, start=1):
        alpha = field.d_omega if field.phi3 is None else nabla_omega(field)
        decomposition = decompose_structure(alpha, field.acms)
        entry = {"component_summary": _component_summary(decomposition)}
        # the containment results concern the standard structures 1 and 2 only
        if field.phi3 is not None:
            entry["verdict"] = classify(decomposition, tolerances["relative"]).verdict
        classifications[f"structure {index}"] = entry

    three_structure = {
        "kuo": {"residuals": kuo.residuals, "precondition": kuo.precondition, "derived": kuo.derived,
                "structures": kuo.structures, "tolerance": kuo.tolerance, "passed": kuo.passed},
        "cosymplectic": {**cosymplectic._asdict(),
                         "is_three_cosymplectic": cosymplectic.is_three_cosymplectic,
                         "killing_equivalence": cosymplectic.killing_equivalence,
                         "parallel_phi3_holds": cosymplectic.parallel_phi3_holds},
        "classifications": classifications
    }

    return three_structure, assertions


def run(config: RunConfig) -> Report:
    """
    Runs the selected suites in order: algebra identities, structure build, nabla omega and its decomposition,
    the containment theorem, then the 3-structure.

    Parameters
    ----------
    config : RunConfig
        A validated configuration.

    Returns
    -------
    report : Report
        The outcome.
    """
    config.validate()
    threads = thread_cap()
    tolerances = dict(config.tolerances)
    suites = config.ordered_suites
    sampling = config.sampling
    context = DifferentiationContext(mode=config.mode)
    rng = np.random.default_rng(config.seed)

    assertions: List[Assertion] = []
    report_parts: Dict[str, Any] = {}

    if Suite.ALGEBRA in suites:
        logger.info("Running the algebra suite.")
        assertions.extend(_algebra_suite(rng, tolerances["algebra"]))

    if Suite.CLASSIFY in suites or Suite.THEOREMS in suites:
        logger.info(f"Building the structure of xi on {len(sampling)} points.")
        xi = normalize(config.spec.xi, sampling, context.metric)
        field = sample_structure(xi, sampling.points, context)
        assertions.extend(_structure_assertions("structure", field, tolerances["axiom"]))

        if Suite.CLASSIFY in suites:
            logger.info("Running the classify suite.")
            points, summary, classification, classify_assertions = _classify_suite(
                field, xi, context, tolerances, threads
            )
            report_parts.update(points=points, component_summary=summary, classification=classification)
            assertions.extend(classify_assertions)

        if Suite.THEOREMS in suites:
            logger.info("Running the theorems suite.")
            ledger, theorem_assertions = _theorem_suite(xi, sampling, context, rng, tolerances, threads)
            report_parts["theorems"] = ledger
            assertions.extend(theorem_assertions)

    if Suite.THREE_STRUCTURE in suites:
        logger.info("Running the three_structure suite.")
        three_structure, three_assertions = _three_structure_suite(config, sampling, context)
        report_parts["three_structure"] = three_structure
        assertions.extend(three_assertions)

    report = Report(
        config=_plain(config.summary()),
        metadata={"package": "g2-contact", "version": __version__, "n_points": len(sampling)},
        assertions=assertions,
        **report_parts
    )
    if report.passed:
        logger.info(f"All {len(assertions)} assertions passed.")
    else:
        logger.warning(f"Assertion failed: {report.first_failure.name}")

    return report


def _text_summary(report: Report) -> str:
    lines = [
        f"g2-contact {report.metadata['version']}",
        f"config: {report.config['config']}  suites: {', '.join(report.config['suites'])}  "
        f"seed: {report.config['seed']}  points: {report.metadata['n_points']}",
        f"status: {'PASS' if report.passed else 'FAIL'}"
    ]
    if not report.passed:
        lines.append(f"first failing assertion: {report.first_failure.name}")

    if report.component_summary is not None:
        lines += ["", f"{'class':<6}{'min':>14}{'max':>14}{'mean':>14}"]
        for name in CLASS_COLUMNS:
            stats = report.component_summary[name]
            lines.append(f"{name:<6}{stats['min']:>14.6e}{stats['max']:>14.6e}{stats['mean']:>14.6e}")

    if report.classification is not None:
        lines += ["", f"most specific type: {report.classification['verdict']} "
                      f"(tol {report.classification['tolerance']:g})"]

    if report.theorems is not None:
        lines += ["", "containment cases:"]
        for claim in report.theorems["claims"]:
            ratio = "-" if claim["worst_ratio"] is None else f"{claim['worst_ratio']:.3e}"
            lines.append(f"  case {claim['case']}: {claim['status']}  worst ratio {ratio}")
        lines += ["", "max |d omega| per field:"]
        for entry in report.theorems.get("closedness", []):
            kind = "non-parallel" if entry["non_parallel"] else "parallel"
            lines.append(f"  {entry['name']} ({kind}): {entry['d_omega_max']:.3e}  "
                         f"{'PASS' if entry['passed'] else 'FAIL'}")

    if report.three_structure is not None:
        cosymplectic = report.three_structure["cosymplectic"]
        lines += ["", f"3-structure axioms: {'PASS' if report.three_structure['kuo']['passed'] else 'FAIL'}",
                  f"3-cosymplectic: {cosymplectic['is_three_cosymplectic']}"]

    return "\n".join(lines) + "\n"


def emit(
        report: Report,
        formats: Sequence[Union[str, OutputFormat]] = (OutputFormat.JSON,),
        out: str = "."
) -> List[str]:
    """
    Writes the report: JSON (the full nested report), CSV (one row per sample point) or text (summary).

    Parameters
    ----------
    report : Report
        The report.
    formats : Sequence[Union[str, OutputFormat]]
        Output formats.
    out : str
        Output directory, created if needed.

    Returns
    -------
    paths : List[str]
        Written files.
    """
    os.makedirs(out, exist_ok=True)

    paths = []
    for output_format in (OutputFormat(f) for f in formats):
        path = os.path.join(out, REPORT_FILE_NAMES[output_format])
        if output_format == OutputFormat.JSON:
            with open(path, "w") as file:
                file.write(report.to_json())
        elif output_format == OutputFormat.CSV:
            if report.points is None:
                raise ValueError("CSV output needs the per-point table of the classify suite.")
            report.points.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        else:
            with open(path, "w") as file:
                file.write(_text_summary(report))
        logger.info(f"Wrote {path}")
        paths.append(path)

    return paths
