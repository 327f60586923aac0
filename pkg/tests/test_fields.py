import json

import numpy as np
import pytest

from g2_contact.acms import standard_structure_field
from g2_contact.algebra7 import cross_product_matrix
from g2_contact.enum import DifferentiationMode, Phase
from g2_contact.fields import (
    adapted_frame,
    central_difference,
    codifferential,
    DegenerateFieldError,
    DifferentiationContext,
    eta_jet,
    exterior_derivative,
    FieldSpecReader,
    FormJet,
    frame_inverse,
    frame_residual,
    integrate,
    LatticeSampling,
    lie_derivative_3form,
    nabla_omega,
    nabla_omega_leibniz,
    nabla_xi,
    normalize,
    orthonormal_frame,
    parallel_free_family,
    random_trig_vector_field,
    sample_structure,
    stokes_volume,
    TORUS_VOLUME,
    TrigField,
    TrigVectorField,
    unitary_frame,
    UnitVectorField
)
from .conftest import E


def _random_unit_vectors(rng, count):
    vectors = rng.normal(size=(count, 7))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


class TestTrigField:

    def test_gradient_matches_central_difference(self, rng):
        field = random_trig_vector_field(rng, n_terms=3, max_wave=2)
        points = rng.uniform(0, 2 * np.pi, size=(10, 7))
        numerical = central_difference(field, points, 1e-3)
        assert np.allclose(field.gradient()(points), numerical, atol=1e-8)

    def test_derivative_of_single_term(self):
        field = TrigVectorField([E[0]], [[0, 2, 0, 0, 0, 0, 0]], [Phase.SIN])
        points = np.array([[0, 0.3, 0, 0, 0, 0, 0]])
        assert np.allclose(field.derivative(1)(points), 2 * np.cos(0.6) * E[0][None])
        assert len(field.derivative(0)) == 0

    def test_divergence(self):
        field = TrigVectorField([E[0], E[1]], [E[0], E[0]], [Phase.SIN, Phase.SIN])
        points = np.array([[0.4, 0, 0, 0, 0, 0, 0]])
        assert np.allclose(field.divergence()(points), [np.cos(0.4)])

    def test_non_integer_waves_are_rejected(self):
        with pytest.raises(ValueError, match="integers"):
            TrigVectorField([E[0]], [[0.5, 0, 0, 0, 0, 0, 0]], [Phase.COS])

    def test_terms_round_trip(self, rng):
        field = random_trig_vector_field(rng)
        rebuilt = TrigVectorField.from_terms(field.to_terms())
        points = rng.uniform(0, 2 * np.pi, size=(5, 7))
        assert np.allclose(rebuilt(points), field(points))

    def test_missing_term_keys(self):
        with pytest.raises(ValueError, match="missing keys"):
            TrigVectorField.from_terms([{"coeff": [0] * 7, "wave": [0] * 7}])

    def test_arithmetic(self, rng):
        a = random_trig_vector_field(rng)
        b = random_trig_vector_field(rng)
        points = rng.uniform(0, 2 * np.pi, size=(5, 7))
        assert np.allclose((a - 2.0 * b)(points), a(points) - 2 * b(points))
        assert isinstance(a + b, TrigVectorField)


class TestSampling:

    def test_full_grid(self):
        sampling = LatticeSampling(resolution=4)
        assert sampling.is_full_grid
        assert len(sampling) == 4 ** 7
        assert sampling.points.shape == (4 ** 7, 7)
        assert np.all((sampling.points >= 0) & (sampling.points < 2 * np.pi))

    def test_subsample_is_deterministic(self):
        first = LatticeSampling(resolution=8, subsamples=50, seed=3)
        second = LatticeSampling(resolution=8, subsamples=50, seed=3)
        assert len(first) == 50
        assert not first.is_full_grid
        assert np.array_equal(first.points, second.points)
        assert len(np.unique(first.indices, axis=0)) == 50

    @pytest.mark.parametrize("resolution, subsamples", [(3, None), (4, 0), (4, 4 ** 7 + 1)])
    def test_invalid_sampling(self, resolution, subsamples):
        with pytest.raises(ValueError):
            LatticeSampling(resolution=resolution, subsamples=subsamples)

    def test_quadrature(self):
        sampling = LatticeSampling(resolution=4)
        assert integrate(np.ones(len(sampling)), sampling) == pytest.approx(TORUS_VOLUME)
        assert integrate(lambda points: np.cos(points[:, 0]), sampling) == pytest.approx(0.0, abs=1e-6)

    def test_quadrature_requires_full_grid(self, small_sampling):
        with pytest.raises(ValueError, match="quadrature requires full grid"):
            integrate(np.ones(len(small_sampling)), small_sampling)

    def test_stokes_volume(self, rng):
        sampling = LatticeSampling(resolution=4)
        assert stokes_volume(UnitVectorField.constant(E[6]), sampling) == pytest.approx(TORUS_VOLUME, rel=1e-10)
        xi = UnitVectorField(random_trig_vector_field(rng, n_terms=2, max_wave=1, amplitude=0.2))
        assert stokes_volume(xi, sampling) == pytest.approx(TORUS_VOLUME, rel=1e-10)


class TestUnitVectorField:

    def test_vanishing_field(self):
        raw = TrigVectorField([E[6]], [E[0]], [Phase.COS])
        with pytest.raises(DegenerateFieldError, match="vanishing field at sample point"):
            normalize(raw, LatticeSampling(resolution=4))

    def test_values_are_unit(self, rng, small_sampling):
        xi = normalize(random_trig_vector_field(rng), small_sampling)
        assert np.allclose(np.linalg.norm(xi(small_sampling.points), axis=1), 1.0)

    def test_gradient_is_orthogonal_to_xi(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        points = small_sampling.points
        d_xi = xi.gradient(points)
        assert np.max(np.abs(np.einsum("pki,pi->pk", d_xi, xi(points)))) <= 1e-12

    def test_finite_difference_agrees_with_exact(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng, n_terms=2, max_wave=1, amplitude=0.2))
        points = small_sampling.points
        context = DifferentiationContext(mode=DifferentiationMode.FINITE_DIFFERENCE, step=2 * np.pi / 64)
        assert np.max(np.abs(xi.gradient(points, context) - xi.gradient(points))) <= 1e-3

    def test_nabla_xi_is_transposed_gradient(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        points = small_sampling.points
        assert np.array_equal(nabla_xi(xi, points), np.swapaxes(xi.gradient(points), 1, 2))


class TestCalculus:

    def test_d_squared_vanishes(self, rng):
        one_form = random_trig_vector_field(rng, n_terms=4)
        points = rng.uniform(0, 2 * np.pi, size=(6, 7))
        assert np.allclose(exterior_derivative(exterior_derivative(one_form))(points), 0.0, atol=1e-12)

    def test_exterior_derivative_of_jet_matches_symbolic(self, rng):
        one_form = random_trig_vector_field(rng)
        points = rng.uniform(0, 2 * np.pi, size=(6, 7))
        jet = FormJet(one_form(points), one_form.gradient()(points))
        assert np.allclose(exterior_derivative(jet), exterior_derivative(one_form)(points))

    def test_codifferential_is_minus_divergence(self, rng):
        one_form = random_trig_vector_field(rng)
        points = rng.uniform(0, 2 * np.pi, size=(6, 7))
        assert np.allclose(codifferential(one_form)(points), -one_form.divergence()(points))

    def test_codifferential_of_function_is_zero(self):
        jet = FormJet(np.ones(3), np.zeros((3, 7)))
        assert np.all(codifferential(jet) == 0.0)

    def test_parallel_free_family(self, rng, small_sampling):
        xi = UnitVectorField(parallel_free_family(rng))
        field = sample_structure(xi, small_sampling.points)
        values = field.acms.xi
        assert np.max(np.abs(codifferential(eta_jet(field)))) <= 1e-12
        assert np.max(np.abs(np.einsum("pk,pki->pi", values, field.d_xi))) <= 1e-12
        assert np.max(np.abs(field.d_xi)) > 1e-3

    def test_parallel_free_span_must_contain_reeb_axis(self, rng):
        with pytest.raises(ValueError, match="must contain axis"):
            parallel_free_family(rng, span=(0, 1))

    def test_nabla_omega_matches_leibniz_form(self, rng, small_sampling):
        for _ in range(5):
            xi = UnitVectorField(random_trig_vector_field(rng))
            field = sample_structure(xi, small_sampling.points)
            assert np.max(np.abs(nabla_omega(field) - nabla_omega_leibniz(xi, small_sampling.points))) <= 1e-9

    def test_leibniz_form_rejects_wrong_derivatives(self, phi0, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        points = small_sampling.points
        values, d_xi = xi.jet(points)
        corrupted = standard_structure_field(phi0, np.eye(7), values, d_xi + 0.1 * rng.normal(size=d_xi.shape))
        assert np.max(np.abs(nabla_omega(corrupted) - nabla_omega_leibniz(xi, points))) > 1e-3

    def test_leibniz_form_in_finite_difference_mode(self, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        context = DifferentiationContext(mode=DifferentiationMode.FINITE_DIFFERENCE, step=2 * np.pi / 64)
        field = sample_structure(xi, small_sampling.points, context)
        leibniz = nabla_omega_leibniz(xi, small_sampling.points, context)
        assert np.max(np.abs(nabla_omega(field) - leibniz)) <= 1e-9

    def test_lie_derivative_is_d_of_contraction(self, phi0, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        points = small_sampling.points
        values, d_xi = xi.jet(points)
        contraction = FormJet(
            np.einsum("pm,mbc->pbc", values, phi0.components),
            np.einsum("pam,mbc->pabc", d_xi, phi0.components)
        )
        assert np.allclose(lie_derivative_3form(d_xi), exterior_derivative(contraction), atol=1e-12)

    def test_lie_derivative_is_minus_d_omega(self, phi0, rng, small_sampling):
        xi = UnitVectorField(random_trig_vector_field(rng))
        field = sample_structure(xi, small_sampling.points)
        d_omega = exterior_derivative(FormJet(field.acms.omega, field.d_omega))
        assert np.allclose(lie_derivative_3form(field.d_xi), -d_omega, atol=1e-12)


class TestFrames:

    def test_frames_are_orthonormal(self, phi0, rng):
        xi = _random_unit_vectors(rng, 30)
        phi = cross_product_matrix(phi0, np.eye(7), xi)
        for frame in (adapted_frame(xi), orthonormal_frame(xi), unitary_frame(phi, xi)):
            assert frame_residual(frame) <= 1e-12
            assert np.allclose(frame[..., 6], xi)

    def test_adapted_frame_carries_model_form(self, phi0, rng):
        frame = adapted_frame(_random_unit_vectors(rng, 30))
        components = np.einsum("ijk,pia,pjb,pkc->pabc", phi0.components, frame, frame, frame)
        assert np.allclose(components, phi0.components[None], atol=1e-12)

    def test_unitary_frame_gives_constant_phi_matrix(self, phi0, rng):
        xi = _random_unit_vectors(rng, 30)
        phi = cross_product_matrix(phi0, np.eye(7), xi)
        frame = unitary_frame(phi, xi)
        matrices = frame_inverse(frame) @ phi @ frame
        assert np.allclose(matrices, matrices[:1], atol=1e-12)
        assert np.allclose(matrices[0, 1, 0], 1.0)

    def test_frames_for_coordinate_axes(self):
        frame = adapted_frame(E[6])
        assert np.allclose(frame, np.eye(7))


class TestFieldSpecReader:

    def test_bundled_specs(self):
        assert FieldSpecReader.bundled_names() == ["constant_xi", "generic_xi", "parallel_free_xi", "three_structure"]
        spec = FieldSpecReader.bundled("constant_xi").read()
        assert spec.resolution == 8
        assert spec.u is None
        assert np.allclose(spec.xi(np.zeros((1, 7))), E[6][None])

    def test_bundled_three_structure(self):
        spec = FieldSpecReader.bundled("three_structure").read()
        assert spec.u is not None and spec.v is not None

    def test_toml_spec(self, tmp_path):
        path = tmp_path / "field.toml"
        path.write_text(
            'resolution = 6\n'
            '[[xi.terms]]\n'
            'coeff = [0, 0, 0, 0, 0, 0, 1]\n'
            'wave = [0, 0, 0, 0, 0, 0, 0]\n'
            'phase = "cos"\n'
            '[tolerances]\n'
            'relative = 1e-6\n'
        )
        spec = FieldSpecReader(str(path)).read()
        assert spec.resolution == 6
        assert spec.tolerances == {"relative": 1e-6}
        assert len(spec.xi) == 1

    @pytest.mark.parametrize("content, message", [
        ({"xi": [], "speed": 1}, "Unknown keys"),
        ({"u": [{"coeff": [1, 0, 0, 0, 0, 0, 0], "wave": [0] * 7, "phase": "cos"}]}, "given together"),
        ({"xi": []}, "non-empty list"),
        ({"resolution": 8.5}, "must be an integer")
    ])
    def test_invalid_specs(self, tmp_path, content, message):
        path = tmp_path / "field.json"
        path.write_text(json.dumps(content))
        with pytest.raises(ValueError, match=message):
            FieldSpecReader(str(path)).read()

    def test_unsupported_extension(self):
        with pytest.raises(ValueError, match="Unsupported"):
            FieldSpecReader("field.yaml")
