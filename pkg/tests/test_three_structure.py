import numpy as np
import pytest

from g2_contact.enum import DifferentiationMode
from g2_contact.fields import (
    DegenerateFieldError,
    DifferentiationContext,
    LatticeSampling,
    random_trig_vector_field,
    UnitVectorField
)
from g2_contact.three_structure import build, kuo_axioms, three_cosymplectic_check
from .conftest import E


@pytest.fixture
def generic_pair(rng):
    u = UnitVectorField(random_trig_vector_field(rng, n_terms=1, max_wave=1, amplitude=0.1, base=E[0]))
    v = UnitVectorField(random_trig_vector_field(rng, n_terms=1, max_wave=1, amplitude=0.1, base=E[1]))
    return u, v


class TestConstantPairs:

    def test_orthonormal_pair(self, small_sampling):
        ac3 = build(E[0], E[1], small_sampling)
        first, second, third = ac3.structures
        assert len(ac3) == len(small_sampling)
        assert np.allclose(first.xi, E[0])
        assert np.allclose(second.xi, E[2])
        assert np.allclose(third.xi, -E[1])

    def test_constant_pair_is_three_cosymplectic(self, small_sampling):
        ac3 = build(E[0], E[1], small_sampling)
        assert kuo_axioms(ac3).passed

        report = three_cosymplectic_check(ac3)
        assert report.is_three_cosymplectic
        assert report.nabla_phi3 == 0.0
        assert report.parallel_phi3_holds
        assert report.killing_equivalence

    def test_non_orthogonal_pair(self, small_sampling):
        ac3 = build(E[1] + 0.3 * E[0], E[0], small_sampling)
        report = kuo_axioms(ac3)
        assert report.passed, report.violated
        assert report.derived["xi3 = (-v + eta1(v) u) / |u x v|"] <= 1e-12

    def test_points_instead_of_sampling(self):
        points = np.zeros((2, 7))
        ac3 = build(E[0], E[3], points)
        assert len(ac3) == 2
        assert np.allclose(ac3.structures[1].xi, E[4])

    def test_parallel_pair_is_degenerate(self, small_sampling):
        with pytest.raises(DegenerateFieldError, match="degenerate pair at sample point"):
            build(E[0], -2 * E[0], small_sampling)


class TestGenericPairs:

    def test_kuo_axioms_hold_pointwise(self, generic_pair, small_sampling):
        report = kuo_axioms(build(*generic_pair, small_sampling))
        assert report.passed, report.violated
        assert len(report.residuals) == 12
        assert set(report.structures) == {"structure 1", "structure 2", "structure 3"}

    def test_generic_pair_is_not_three_cosymplectic(self, generic_pair, small_sampling):
        report = three_cosymplectic_check(build(*generic_pair, small_sampling))
        assert not report.is_three_cosymplectic
        assert report.chain_residual <= 1e-10
        assert report.nabla_phi3 > 1e-6
        assert report.killing_equivalence
        assert report.parallel_phi3_holds

    def test_product_rule_agrees_with_finite_differences(self, generic_pair, small_sampling):
        exact = build(*generic_pair, small_sampling)
        context = DifferentiationContext(mode=DifferentiationMode.FINITE_DIFFERENCE, step=2 * np.pi / 64)
        approximate = build(*generic_pair, small_sampling, context=context)
        for exact_field, approximate_field in zip(exact.fields, approximate.fields):
            assert np.max(np.abs(exact_field.d_phi - approximate_field.d_phi)) <= 1e-3

    def test_broken_precondition_is_reported(self, generic_pair):
        ac3 = build(*generic_pair, LatticeSampling(resolution=4, subsamples=10))
        ac3.structures[1].xi[:] = ac3.structures[0].xi
        report = kuo_axioms(ac3, tolerance=1e-10)
        assert not report.passed
        assert "ac3s5" in report.violated
