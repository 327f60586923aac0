import numpy as np
import pytest
from hypothesis import given, settings

from g2_contact.algebra7 import (
    cross,
    cross_product_matrix,
    dense_three_form,
    double_cross_check,
    four_term_check,
    index_combinations,
    inner,
    interior,
    inverse_metric,
    KForm7,
    metric_from_three_form,
    model_three_form,
    permutation_sign,
    pullback,
    three_form_bilinear,
    volume_form,
    wedge
)
from .conftest import E, vectors

TRIALS = 10_000


class TestForms:

    def test_index_combinations_count(self):
        assert len(index_combinations(3)) == 35
        assert len(index_combinations(7)) == 1

    def test_permutation_sign(self):
        assert permutation_sign((0, 1, 2)) == 1
        assert permutation_sign((1, 0, 2)) == -1
        assert permutation_sign((2, 0, 1)) == 1
        assert permutation_sign((0, 0, 1)) == 0

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            KForm7(8)

    def test_from_monomials_reorders_indices(self):
        form = KForm7.from_monomials(2, {(2, 1): 3.0})
        assert form[(0, 1)] == -3.0
        assert form[(1, 0)] == 3.0

    def test_dense_round_trip(self, phi0):
        assert np.allclose(KForm7.from_dense(phi0.components).coefficients, phi0.coefficients)

    def test_from_dense_rejects_symmetric_array(self):
        with pytest.raises(ValueError, match="antisymmetric"):
            KForm7.from_dense(np.ones((7, 7)))

    def test_wedge_of_coordinate_forms(self):
        dx1 = KForm7(1, E[0])
        dx2 = KForm7(1, E[1])
        product = wedge(dx1, dx2)
        assert product[(0, 1)] == 1.0
        assert wedge(dx2, dx1)[(0, 1)] == -1.0
        assert wedge(dx1, dx1).norm() == 0.0

    def test_wedge_degree_overflow(self):
        with pytest.raises(ValueError):
            wedge(KForm7(4), KForm7(4))

    def test_interior_of_zero_form(self):
        with pytest.raises(ValueError):
            interior(E[0], KForm7(0, [1.0]))

    def test_interior_evaluates_first_slot(self, phi0, rng):
        x, y, z = rng.normal(size=(3, 7))
        assert interior(x, phi0).evaluate(y, z) == pytest.approx(phi0.evaluate(x, y, z), abs=1e-12)

    def test_volume_form(self):
        assert volume_form().coefficients[0] == 1.0
        assert volume_form(2 * np.eye(7)).coefficients[0] == pytest.approx(np.sqrt(2.0 ** 7))
        with pytest.raises(ValueError, match="degenerate metric"):
            volume_form(-np.eye(7))

    def test_model_form_has_seven_terms(self, phi0):
        assert np.count_nonzero(phi0.coefficients) == 7
        assert phi0[(0, 1, 2)] == 1.0
        assert phi0[(2, 4, 5)] == -1.0


class TestMetricRecovery:

    def test_model_form_gives_euclidean_metric(self, phi0):
        assert np.allclose(metric_from_three_form(phi0), np.eye(7), atol=1e-12)

    def test_bilinear_of_model_form(self, phi0):
        assert np.allclose(three_form_bilinear(phi0), 6 * np.eye(7), atol=1e-12)

    def test_scaled_form(self, phi0):
        assert np.allclose(metric_from_three_form(phi0 * 8.0), 4 * np.eye(7), atol=1e-10)

    def test_pullback_gives_pulled_back_metric(self, phi0, rng):
        linear_map = np.eye(7) + 0.1 * rng.normal(size=(7, 7))
        if np.linalg.det(linear_map) < 0:
            linear_map[:, 0] *= -1
        g = metric_from_three_form(pullback(phi0, linear_map))
        assert np.allclose(g, linear_map.T @ linear_map, atol=1e-9)

    def test_negative_form_is_rejected(self, phi0):
        with pytest.raises(ValueError, match="not a positive 3-form"):
            metric_from_three_form(-phi0)

    def test_degenerate_metric_is_rejected(self):
        g = np.eye(7)
        g[6, 6] = 0.0
        with pytest.raises(ValueError, match="degenerate metric"):
            inverse_metric(g)


class TestCrossProduct:

    def test_basis_products(self, phi0):
        g = np.eye(7)
        assert np.allclose(cross(phi0, g, E[0], E[1]), E[2])
        assert np.allclose(cross(phi0, g, E[0], E[2]), -E[1])
        assert np.allclose(cross(phi0, g, E[1], E[3]), E[5])
        assert np.allclose(cross(phi0, g, E[2], E[3]), -E[6])

    def test_matrix_agrees_with_product(self, phi0, rng):
        xi, x = rng.normal(size=(2, 7))
        matrix = cross_product_matrix(phi0, np.eye(7), xi)
        assert np.allclose(matrix @ x, cross(phi0, np.eye(7), xi, x), atol=1e-12)

    def test_batched_product(self, phi0, rng):
        x, y = rng.normal(size=(2, 5, 7))
        batched = cross(phi0, np.eye(7), x, y)
        assert batched.shape == (5, 7)
        assert np.allclose(batched[3], cross(phi0, np.eye(7), x[3], y[3]))

    def test_dense_three_form_shape_check(self):
        with pytest.raises(ValueError):
            dense_three_form(np.zeros((7, 7)))

    @settings(max_examples=50, deadline=None)
    @given(x=vectors(), y=vectors())
    def test_product_is_orthogonal_and_antisymmetric(self, x, y):
        phi0 = model_three_form()
        g = np.eye(7)
        product = cross(phi0, g, x, y)
        scale = 1.0 + np.linalg.norm(x) * np.linalg.norm(y)
        assert abs(inner(g, product, x)) <= 1e-10 * scale * (1.0 + np.linalg.norm(x))
        assert abs(inner(g, product, y)) <= 1e-10 * scale * (1.0 + np.linalg.norm(y))
        assert np.allclose(product, -cross(phi0, g, y, x), atol=1e-10 * scale)

    @settings(max_examples=50, deadline=None)
    @given(x=vectors(), y=vectors())
    def test_norm_of_product(self, x, y):
        phi0 = model_three_form()
        g = np.eye(7)
        product = cross(phi0, g, x, y)
        expected = inner(g, x, x) * inner(g, y, y) - inner(g, x, y) ** 2
        scale = 1.0 + inner(g, x, x) * inner(g, y, y)
        assert abs(inner(g, product, product) - expected) <= 1e-10 * scale

    def test_random_pairs_are_antisymmetric_and_orthogonal(self, phi0, rng):
        g = np.eye(7)
        x, y = rng.normal(size=(2, TRIALS, 7))
        norm_x, norm_y = np.linalg.norm(x, axis=1), np.linalg.norm(y, axis=1)
        product = cross(phi0, g, x, y)
        assert np.max(np.linalg.norm(product + cross(phi0, g, y, x), axis=1) / (norm_x * norm_y)) <= 1e-12
        assert np.max(np.abs(inner(g, product, x)) / (norm_x ** 2 * norm_y)) <= 1e-12
        assert np.max(np.abs(inner(g, product, y)) / (norm_x * norm_y ** 2)) <= 1e-12
        lagrange = inner(g, product, product) - (norm_x ** 2 * norm_y ** 2 - inner(g, x, y) ** 2)
        assert np.max(np.abs(lagrange) / (norm_x * norm_y) ** 2) <= 1e-12

    def test_double_cross_on_random_pairs(self, phi0, rng):
        x, y = rng.normal(size=(2, TRIALS, 7))
        residual = double_cross_check(np.eye(7), phi0, x, y)
        assert np.max(residual / (np.linalg.norm(x, axis=1) ** 2 * np.linalg.norm(y, axis=1))) <= 1e-12

    def test_four_term_identity_on_random_triples(self, phi0, rng):
        u, v, x = rng.normal(size=(3, TRIALS, 7))
        norm_u, norm_v, norm_x = (np.linalg.norm(w, axis=1) for w in (u, v, x))
        residual = four_term_check(phi0, np.eye(7), u, v, x)
        assert np.max(residual / (norm_u ** 3 * norm_v * norm_x)) <= 1e-12

    def test_identities_for_pulled_back_structure(self, phi0, rng):
        linear_map = np.eye(7) + 0.2 * rng.normal(size=(7, 7))
        if np.linalg.det(linear_map) < 0:
            linear_map[:, 0] *= -1
        phi = pullback(phi0, linear_map)
        g = metric_from_three_form(phi)
        x, y, z = rng.normal(size=(3, 50, 7))
        assert np.max(double_cross_check(g, phi, x, y)) <= 1e-8
        assert np.max(four_term_check(phi, g, x, y, z)) <= 1e-8
