import numpy as np
import pytest

from g2_contact.acms import (
    ACMS,
    ACS,
    exterior_derivative_1form,
    nijenhuis,
    NijenhuisReport,
    normality_tensors,
    standard_structure
)
from g2_contact.algebra7 import metric_from_three_form, pullback
from g2_contact.fields import random_trig_vector_field, sample_structure, UnitVectorField
from .conftest import E


def _orientation_preserving(rng, scale=0.2):
    linear_map = np.eye(7) + scale * rng.normal(size=(7, 7))
    if np.linalg.det(linear_map) < 0:
        linear_map[:, 0] *= -1
    return linear_map


class TestStandardStructure:

    def test_reeb_axis_satisfies_axioms(self, reeb_point):
        acms, _ = reeb_point
        residuals = acms.axiom_residuals()
        assert max(residuals.values()) <= 1e-12, residuals

    def test_reeb_axis_rank_and_nondegeneracy(self, reeb_point):
        acms, _ = reeb_point
        assert acms.acs.rank().tolist() == [6]
        assert acms.nondegeneracy()[0] == pytest.approx(-6.0)

    def test_phi_is_cross_product_with_xi(self, reeb_point):
        acms, _ = reeb_point
        assert np.allclose(acms.phi[0] @ E[0], E[5])
        assert np.allclose(acms.phi[0] @ E[5], -E[0])

    def test_random_batch(self, phi0, rng):
        xi = rng.normal(size=(1000, 7))
        xi /= np.linalg.norm(xi, axis=1, keepdims=True)
        acms = standard_structure(phi0, np.eye(7), xi)
        assert acms.batch_shape == (1000,)
        assert max(acms.axiom_residuals().values()) <= 1e-12
        assert np.allclose(acms.nondegeneracy(), -6.0)

    def test_pulled_back_structure(self, phi0, rng):
        linear_map = _orientation_preserving(rng)
        phi = pullback(phi0, linear_map)
        g = metric_from_three_form(phi)
        xi = np.linalg.solve(linear_map, E[2])
        acms = standard_structure(phi, g, xi)
        assert max(acms.axiom_residuals().values()) <= 1e-9

    def test_unnormalized_xi_is_rejected(self, phi0):
        with pytest.raises(ValueError, match="xi not normalized"):
            standard_structure(phi0, np.eye(7), 2 * E[6])

    def test_broken_structure_shows_residuals(self):
        acs = ACS(phi=np.zeros((7, 7)), xi=E[6], eta=E[6])
        residuals = ACMS(acs, np.eye(7)).axiom_residuals()
        assert residuals["phi_squared"] > 1.0
        assert residuals["rank"] == 6.0
        assert residuals["duality"] == 0.0


class TestNormality:

    def test_constant_field_is_normal(self, small_sampling):
        field = sample_structure(UnitVectorField.constant(E[6]), small_sampling.points)
        report = normality_tensors(field)
        assert report.max_norms == (0.0, 0.0, 0.0, 0.0)
        assert report.is_normal()
        assert report.implication_holds()

    def test_generic_field_is_not_normal(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng, n_terms=2, amplitude=0.2))
        report = normality_tensors(sample_structure(xi, small_sampling.points))
        assert not report.is_normal()
        assert report.max_norms[0] > 1e-6
        assert report.implication_holds()

    def test_implication_fails_on_inconsistent_tensors(self):
        report = NijenhuisReport(
            n1=np.zeros((1, 7, 7, 7)),
            n2=np.ones((1, 7, 7)),
            n3=np.zeros((1, 7, 7)),
            n4=np.zeros((1, 7))
        )
        assert report.is_normal()
        assert not report.implication_holds()

    def test_nijenhuis_of_constant_endomorphism(self, reeb_point):
        acms, _ = reeb_point
        assert np.all(nijenhuis(acms.phi, np.zeros((1, 7, 7, 7))) == 0.0)

    def test_exterior_derivative_is_antisymmetric(self, rng):
        d_eta = rng.normal(size=(3, 7, 7))
        d = exterior_derivative_1form(d_eta)
        assert np.allclose(d, -np.swapaxes(d, -2, -1))
