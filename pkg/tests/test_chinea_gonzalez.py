import logging

import numpy as np
import pytest

from g2_contact.acms import standard_structure
from g2_contact.chinea_gonzalez import (
    AMBIENT,
    all_bases,
    c12,
    cache_info,
    class_span,
    classify,
    CLASS_DIMENSIONS,
    ClosednessResult,
    coordinate_components,
    CV_DIMENSION,
    D_OMEGA_THRESHOLD,
    decompose,
    decompose_structure,
    frame_structure,
    FrameStructure,
    invariants_from_frame_components,
    LEIBNIZ_TOLERANCE,
    membership_residual,
    NAMED_TYPE_SPANS,
    quadratic_invariants,
    RELATION_ROWS,
    relation_check,
    subspace_basis,
    theorem_suite
)
from g2_contact.enum import ChineaGonzalezClass, Hypothesis, NamedType, Status
from g2_contact.fields import (
    adapted_frame,
    nabla_omega,
    orthonormal_frame,
    parallel_free_family,
    random_trig_vector_field,
    sample_structure,
    UnitVectorField
)
from .conftest import E

IRREDUCIBLE = ChineaGonzalezClass.irreducible()


def _element(basis, rng, scale=1.0):
    return scale * (basis.vectors @ rng.normal(size=basis.dimension)).reshape(7, 7, 7)


def _batch(structure, n):
    return FrameStructure(np.repeat(structure.frames, n, axis=0), np.repeat(structure.phi, n, axis=0))


class TestSubspaces:

    def test_ambient_dimension(self, cv_basis):
        assert cv_basis.class_id == AMBIENT
        assert cv_basis.dimension == CV_DIMENSION == 84

    @pytest.mark.parametrize("class_id", list(CLASS_DIMENSIONS))
    def test_class_dimension(self, class_id, reeb_point):
        assert subspace_basis(class_id, reeb_point[1].phi).dimension == CLASS_DIMENSIONS[class_id]

    def test_classes_are_orthogonal_and_complete(self, reeb_point):
        vectors = np.concatenate([basis.vectors for basis in all_bases(reeb_point[1].phi).values()], axis=1)
        assert vectors.shape == (343, CV_DIMENSION)
        assert np.allclose(vectors.T @ vectors, np.eye(CV_DIMENSION), atol=1e-10)

    def test_basis_tensors_satisfy_their_equations(self, reeb_point):
        phi = reeb_point[1].phi[0]
        for class_id, basis in all_bases(phi).items():
            assert np.max(membership_residual(class_id, basis.tensors, phi)) <= 1e-10, class_id
            assert np.max(membership_residual(AMBIENT, basis.tensors, phi)) <= 1e-10, class_id

    def test_d1_is_sum_of_first_four_classes(self, reeb_point):
        phi = reeb_point[1].phi
        d1 = subspace_basis(ChineaGonzalezClass.D1, phi).vectors
        for class_id in class_span(1, 2, 3, 4):
            vectors = subspace_basis(class_id, phi).vectors
            assert np.allclose(d1 @ (d1.T @ vectors), vectors, atol=1e-10)

    def test_bases_are_shared_between_points(self, phi0, rng):
        xi = rng.normal(size=(10, 7))
        xi /= np.linalg.norm(xi, axis=1, keepdims=True)
        acms = standard_structure(phi0, np.eye(7), xi)
        structure = frame_structure(acms)
        assert np.allclose(structure.phi, structure.phi[:1], atol=1e-12)
        all_bases(acms)
        hits_before = cache_info()[1].hits
        all_bases(acms)
        assert cache_info()[1].hits == hits_before + len(IRREDUCIBLE)

    def test_inconsistent_frame_matrices_are_rejected(self, reeb_point):
        phi = np.concatenate([reeb_point[1].phi, -reeb_point[1].phi])
        with pytest.raises(ValueError, match="single frame representation"):
            subspace_basis(ChineaGonzalezClass.C1, phi)

    def test_reducible_class_has_no_index(self):
        with pytest.raises(ValueError):
            ChineaGonzalezClass.D1.index


class TestInvariants:

    @pytest.mark.parametrize("class_id", IRREDUCIBLE)
    def test_relation_rows(self, class_id, reeb_point, rng):
        phi = reeb_point[1].phi[0]
        basis = subspace_basis(class_id, phi)
        a = np.stack([_element(basis, rng) for _ in range(5)])
        report = relation_check(class_id, invariants_from_frame_components(a, phi))
        assert report.passed, report.violated

    def test_every_class_has_a_row(self):
        assert set(RELATION_ROWS) == set(IRREDUCIBLE)

    def test_norm_identities_on_generic_tensor(self, cv_basis, reeb_point, rng):
        a = np.stack([_element(cv_basis, rng) for _ in range(5)])
        invariants = invariants_from_frame_components(a, reeb_point[1].phi[0])
        for name, residual in invariants.norm_identity_residuals().items():
            assert np.max(np.abs(residual)) <= 1e-10, name

    def test_frame_invariance(self, cv_basis, reeb_point, rng):
        acms, structure = reeb_point
        a = _element(cv_basis, rng)[None]
        alpha = coordinate_components(a, structure.frames)
        reference = quadratic_invariants(alpha, structure.frames, acms.phi[0])
        for frames in (adapted_frame(acms.xi), orthonormal_frame(acms.xi)):
            other = quadratic_invariants(alpha, frames, acms.phi[0])
            assert np.allclose(other.i, reference.i, atol=1e-10)
            assert np.allclose(other.norm_sq, reference.norm_sq)

    def test_non_orthonormal_frame_is_rejected(self, reeb_point):
        with pytest.raises(ValueError, match="not orthonormal"):
            quadratic_invariants(np.zeros((1, 7, 7, 7)), 2 * np.eye(7), reeb_point[0].phi[0])

    def test_invariant_numbering(self, cv_basis, reeb_point, rng):
        invariants = invariants_from_frame_components(_element(cv_basis, rng)[None], reeb_point[1].phi[0])
        with pytest.raises(ValueError):
            invariants.invariant(19)


class TestDecomposition:

    def test_sum_of_class_elements_is_recovered(self, reeb_point, rng):
        structure = reeb_point[1]
        bases = all_bases(structure.phi)
        elements = [_element(bases[class_id], rng, scale=0.1 * class_id.index) for class_id in IRREDUCIBLE]
        a = np.sum(elements, axis=0)[None]
        alpha = coordinate_components(a, structure.frames)

        decomposition = decompose(alpha, structure)
        assert len(decomposition) == 1
        assert decomposition.residual_norm[0] <= 1e-10
        for class_id, element in zip(IRREDUCIBLE, elements):
            assert decomposition.norm(class_id)[0] == pytest.approx(np.linalg.norm(element), abs=1e-10)
            expected = coordinate_components(element[None], structure.frames)[0]
            assert np.allclose(decomposition.beta[0, class_id.index - 1], expected, atol=1e-10)

    def test_c12_of_class_element(self, reeb_point, rng):
        basis = subspace_basis(ChineaGonzalezClass.C6, reeb_point[1].phi)
        a = _element(basis, rng)[None]
        assert np.allclose(c12(a)[0, :6], 0.0, atol=1e-12)

    def test_decomposition_of_a_sampled_structure(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        field = sample_structure(xi, small_sampling.points)
        decomposition = decompose_structure(nabla_omega(field), field.acms)
        assert len(decomposition) == len(small_sampling)
        assert np.max(decomposition.residual_norm) <= 1e-10 * max(np.max(decomposition.alpha_norm), 1.0)
        assert np.allclose(
            np.sum(decomposition.component_norms ** 2, axis=1),
            decomposition.alpha_norm ** 2,
            rtol=1e-10,
            atol=1e-20
        )


class TestClassification:

    def _classify_class_element(self, class_indices, reeb_point, rng):
        structure = _batch(reeb_point[1], 3)
        a = np.stack([
            sum(_element(subspace_basis(class_id, structure.phi), rng) for class_id in class_span(*class_indices))
            for _ in range(3)
        ])
        return classify(decompose(coordinate_components(a, structure.frames), structure))

    def test_zero_tensor_is_cosymplectic(self, reeb_point):
        decomposition = decompose(np.zeros((2, 7, 7, 7)), _batch(reeb_point[1], 2))
        report = classify(decomposition)
        assert report.verdict == NamedType.COSYMPLECTIC
        assert report.parallel_points == 2
        assert all(report.verdicts.values())

    def test_c6_element_is_a_sasakian(self, reeb_point, rng):
        report = self._classify_class_element((6,), reeb_point, rng)
        assert report.verdict == NamedType.A_SASAKIAN
        assert report.verdicts[NamedType.QUASI_SASAKIAN]
        assert report.verdicts[NamedType.TRANS_SASAKIAN]
        assert not report.verdicts[NamedType.A_KENMOTSU]
        assert not report.verdicts[NamedType.COSYMPLECTIC]
        assert report.parallel_points == 0

    def test_c12_element_is_not_almost_k_contact(self, reeb_point, rng):
        report = self._classify_class_element((12,), reeb_point, rng)
        assert not report.verdicts[NamedType.ALMOST_K_CONTACT]
        assert report.verdict == NamedType.SEMI_COSYMPLECTIC

    def test_trans_sasakian(self, reeb_point, rng):
        report = self._classify_class_element((5, 6), reeb_point, rng)
        assert report.verdict == NamedType.TRANS_SASAKIAN
        assert report.satisfied.index(NamedType.TRANS_SASAKIAN) < report.satisfied.index(NamedType.NORMAL)

    def test_worst_ratio_of_unsatisfied_type(self, reeb_point, rng):
        report = self._classify_class_element((1,), reeb_point, rng)
        assert report.verdict == NamedType.NEARLY_K_COSYMPLECTIC
        assert report.worst_ratios[NamedType.COSYMPLECTIC] == pytest.approx(1.0)

    def test_named_type_spans(self):
        assert NAMED_TYPE_SPANS[NamedType.NORMAL] == class_span(3, 4, 5, 6, 7, 8)
        assert NAMED_TYPE_SPANS[NamedType.ALMOST_K_CONTACT] == class_span(*range(1, 11))


class TestTheoremSuite:

    def test_constant_field_exercises_nothing(self, small_sampling, caplog):
        with caplog.at_level(logging.WARNING):
            ledger = theorem_suite({"constant": UnitVectorField.constant(E[6])}, small_sampling)
        assert ledger.passed
        assert [claim.status for claim in ledger.claims] == [Status.NOT_EXERCISED] * 6
        assert not ledger.fields["constant"][str(Hypothesis.NON_PARALLEL)]
        assert "not exercised" in caplog.text

    def test_generic_field(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng, n_terms=2, amplitude=0.2))
        ledger = theorem_suite({"generic": xi}, small_sampling)
        assert ledger.passed, ledger.first_failure
        assert ledger.first_failure is None

        claims = {claim.case: claim for claim in ledger.claims}
        assert claims[1].status == Status.FAIL
        assert claims[1].worst_ratio > claims[1].tolerance
        assert claims[1].fields_exercised == ["generic"]
        assert sorted(claims[1].excluded_norms) == ["C1", "C11", "C2", "C3", "C4"]
        assert max(claims[1].excluded_norms[c] for c in ("C1", "C2", "C3", "C4")) > 0.0
        assert claims[2].status == Status.NOT_EXERCISED

    def test_parallel_free_field_exercises_geodesic_cases(self, rng, small_sampling):
        xi = UnitVectorField(parallel_free_family(rng))
        ledger = theorem_suite({"parallel free": xi}, small_sampling)
        assert ledger.passed, ledger.first_failure

        hypotheses = ledger.fields["parallel free"]
        assert hypotheses[str(Hypothesis.DIVERGENCE_FREE)]
        assert hypotheses[str(Hypothesis.GEODESIC)]

        statuses = {claim.case: claim.status for claim in ledger.claims}
        assert all(statuses[case] != Status.NOT_EXERCISED for case in (1, 2, 3, 4))

    def test_d_omega_vanishes_only_for_parallel_fields(self, rng, small_sampling):
        fields = {f"random {k}": UnitVectorField(random_trig_vector_field(rng)) for k in range(20)}
        fields["constant"] = UnitVectorField.constant(E[6])
        ledger = theorem_suite(fields, small_sampling)
        assert ledger.passed, ledger.first_failure

        closedness = {result.name: result for result in ledger.closedness}
        assert len(closedness) == 21
        for k in range(20):
            result = closedness[f"random {k}"]
            assert result.non_parallel
            assert result.d_omega_max > D_OMEGA_THRESHOLD
        assert not closedness["constant"].non_parallel
        assert closedness["constant"].d_omega_max == 0.0

    def test_closed_omega_on_non_parallel_field_fails_the_ledger(self, small_sampling):
        ledger = theorem_suite({"constant": UnitVectorField.constant(E[6])}, small_sampling)
        closed = ClosednessResult("flat", non_parallel=True, d_omega_max=1e-6, threshold=D_OMEGA_THRESHOLD,
                                  tolerance=1e-10)
        broken = ledger._replace(closedness=[closed])
        assert not broken.passed
        assert broken.first_failure == "d omega != 0 for non-parallel flat"

    def test_leibniz_identity_is_held_to_its_own_tolerance(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        ledger = theorem_suite({"generic": xi}, small_sampling, identity_tolerance=1e-6)
        tolerances = {identity.name: identity.tolerance for identity in ledger.identities}
        assert tolerances["nabla omega closed form = Leibniz"] == LEIBNIZ_TOLERANCE
        assert tolerances["i1 = 4 i6"] == 1e-6

    def test_threads_do_not_change_the_ledger(self, rng, small_sampling):
        fields = {
            f"field {k}": UnitVectorField(random_trig_vector_field(rng, n_terms=2, amplitude=0.2)) for k in range(3)
        }
        serial = theorem_suite(fields, small_sampling)
        threaded = theorem_suite(fields, small_sampling, max_workers=3)
        assert [claim.worst_ratio for claim in serial.claims] == [claim.worst_ratio for claim in threaded.claims]
        assert serial.identities == threaded.identities
        assert serial.closedness == threaded.closedness

    def test_empty_family(self, small_sampling):
        with pytest.raises(ValueError, match="empty family"):
            theorem_suite({}, small_sampling)
