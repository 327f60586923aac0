from __future__ import annotations
import logging
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from ..acms import standard_structure, standard_structure_field, StructureField
from ..algebra7 import dense_three_form, inverse_metric, model_three_form, three_form_bilinear, ThreeFormLike
from ..enum import DifferentiationMode
from .base import DegenerateFieldError, TrigField, TrigVectorField
from .sampling import LatticeSampling, TORUS_VOLUME

logger = logging.getLogger(__name__)

DIMENSION = 7
VANISHING_THRESHOLD = 1e-8
LEIBNIZ_STEP = 5e-4


class DifferentiationContext(NamedTuple):
    """
    How derivatives are taken on the flat torus. The connection is flat, so covariant derivatives of coordinate
    components are partial derivatives.
    """
    mode: DifferentiationMode = DifferentiationMode.EXACT
    step: float = 2 * np.pi / 32
    metric: Optional[np.ndarray] = None

    @property
    def g(self) -> np.ndarray:
        return np.eye(DIMENSION) if self.metric is None else np.asarray(self.metric, dtype=float)


class FormJet(NamedTuple):
    """
    Dense components of a form sampled on points, values (P, 7, ..., 7), with their partial derivatives,
    gradient (P, 7, 7, ..., 7) carrying the differentiation index at axis 1.
    """
    values: np.ndarray
    gradient: np.ndarray

    @property
    def degree(self) -> int:
        return self.values.ndim - 1


FormLike = Union[TrigField, FormJet]


class UnitVectorField:
    """
    The pointwise normalization xi = X / |X| of a trigonometric vector field. Derivatives follow from the quotient
    rule d(X / |X|) = dX / |X| - X g(X, dX) / |X|^3 applied to the exact derivatives of X, or from the 4th order
    central stencil in finite-difference mode.
    """

    def __init__(self, raw: TrigVectorField, metric: Optional[np.ndarray] = None):
        self.raw = raw
        self.g = np.eye(DIMENSION) if metric is None else np.asarray(metric, dtype=float)
        self._raw_gradient = raw.gradient()

    @classmethod
    def constant(cls, vector: np.ndarray, metric: Optional[np.ndarray] = None) -> UnitVectorField:
        return cls(TrigVectorField.constant(vector), metric)

    def _norms(self, raw_values: np.ndarray, points: np.ndarray) -> np.ndarray:
        norms = np.sqrt(np.einsum("pi,ij,pj->p", raw_values, self.g, raw_values))
        vanishing = np.flatnonzero(norms <= VANISHING_THRESHOLD)
        if vanishing.size:
            raise DegenerateFieldError(f"vanishing field at sample point {points[vanishing[0]].tolist()}")
        return norms

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """
        Unit vectors at the points.

        Parameters
        ----------
        points : np.ndarray
            Points of shape (P, 7).

        Returns
        -------
        values : np.ndarray
            Unit vectors of shape (P, 7).
        """
        points = np.atleast_2d(points)
        raw_values = self.raw(points)
        return raw_values / self._norms(raw_values, points)[:, None]

    def gradient(self, points: np.ndarray, context: DifferentiationContext = DifferentiationContext()) -> np.ndarray:
        """
        Partial derivatives d_k xi^i at the points.

        Parameters
        ----------
        points : np.ndarray
            Points of shape (P, 7).
        context : DifferentiationContext
            Exact or finite-difference differentiation.

        Returns
        -------
        gradient : np.ndarray
            Array of shape (P, 7, 7), index [p, k, i].
        """
        points = np.atleast_2d(points)
        mode = DifferentiationMode(context.mode)

        if mode == DifferentiationMode.EXACT:
            raw_values = self.raw(points)
            raw_gradient = self._raw_gradient(points)
            norms = self._norms(raw_values, points)
            projections = np.einsum("pki,ij,pj->pk", raw_gradient, self.g, raw_values)
            return (
                raw_gradient / norms[:, None, None]
                - np.einsum("pi,pk->pki", raw_values, projections) / norms[:, None, None] ** 3
            )

        return central_difference(self.evaluate, points, context.step)

    def jet(self, points: np.ndarray, context: DifferentiationContext = DifferentiationContext()) -> FormJet:
        return FormJet(self.evaluate(points), self.gradient(points, context))


def central_difference(function: Callable[[np.ndarray], np.ndarray], points: np.ndarray, step: float) -> np.ndarray:
    """
    Fourth order central differences (-f(x + 2h) + 8 f(x + h) - 8 f(x - h) + f(x - 2h)) / 12h along every axis.

    Parameters
    ----------
    function : Callable[[np.ndarray], np.ndarray]
        Function of points (P, 7) returning values (P, ...).
    points : np.ndarray
        Points of shape (P, 7).
    step : float
        The step h.

    Returns
    -------
    gradient : np.ndarray
        Array of shape (P, 7, ...), differentiation index at axis 1.
    """
    derivatives = []
    for k in range(DIMENSION):
        shift = np.zeros(DIMENSION)
        shift[k] = step
        derivatives.append(
            (
                -function(points + 2 * shift)
                + 8 * function(points + shift)
                - 8 * function(points - shift)
                + function(points - 2 * shift)
            ) / (12 * step)
        )

    return np.stack(derivatives, axis=1)


def normalize(
        xi_raw: TrigVectorField,
        sampling: LatticeSampling,
        metric: Optional[np.ndarray] = None
) -> UnitVectorField:
    """
    Normalizes a trigonometric field, checking that it vanishes at no sample point.

    Parameters
    ----------
    xi_raw : TrigVectorField
        The raw field.
    sampling : LatticeSampling
        Sample points to check.
    metric : Optional[np.ndarray]
        The constant metric. Identity if not given.

    Returns
    -------
    xi : UnitVectorField
        The unit field.
    """
    xi = UnitVectorField(xi_raw, metric)
    xi.evaluate(sampling.points)

    return xi


def sample_structure(
        xi: UnitVectorField,
        points: np.ndarray,
        context: DifferentiationContext = DifferentiationContext(),
        phi3: Optional[ThreeFormLike] = None
) -> StructureField:
    """
    Standard structure of a unit field sampled on points, with derivatives taken according to the context.

    Parameters
    ----------
    xi : UnitVectorField
        The unit field.
    points : np.ndarray
        Points of shape (P, 7).
    context : DifferentiationContext
        Differentiation mode and metric.
    phi3 : Optional[ThreeFormLike]
        The parallel 3-form. The model form if not given.

    Returns
    -------
    field : StructureField
        The structure with its jets.
    """
    phi3 = model_three_form() if phi3 is None else phi3
    values, gradient = xi.jet(points, context)

    return standard_structure_field(phi3, context.g, values, gradient, points=points)


def nabla_xi(xi: UnitVectorField, points: np.ndarray, context: DifferentiationContext = DifferentiationContext()):
    """
    The endomorphism X -> nabla_X xi at each point, M[p, i, k] = d_k xi^i.

    Returns
    -------
    nabla : np.ndarray
        Array of shape (P, 7, 7).
    """
    return np.swapaxes(xi.gradient(points, context), -2, -1)


def omega_jet(field: StructureField) -> FormJet:
    return FormJet(field.acms.omega, field.d_omega)


def eta_jet(field: StructureField) -> FormJet:
    return FormJet(field.acms.eta, field.d_eta)


def nabla_omega(field: StructureField) -> np.ndarray:
    """
    Covariant derivative of the fundamental form of a standard structure over a parallel 3-form,
    (nabla_X omega)(Y, Z) = g(Y, nabla_X xi × Z) = phi(nabla_X xi, Z, Y).

    Parameters
    ----------
    field : StructureField
        The structure field.

    Returns
    -------
    alpha : np.ndarray
        Components alpha[p, x, y, z], shape (P, 7, 7, 7).
    """
    assert field.phi3 is not None, "The structure field does not carry its 3-form."

    return np.einsum("azy,...xa->...xyz", field.phi3, field.d_xi)


def nabla_omega_leibniz(
        xi: UnitVectorField,
        points: np.ndarray,
        context: DifferentiationContext = DifferentiationContext(),
        phi3: Optional[ThreeFormLike] = None,
        step: Optional[float] = None
) -> np.ndarray:
    """
    (nabla_X omega)(Y, Z) = X omega(Y, Z) - omega(nabla_X Y, Z) - omega(Y, nabla_X Z) on coordinate fields. These are
    parallel for the flat connection, so only the derivatives of the components omega_yz(x) = g(e_y, xi(x) × e_z)
    remain. They are taken by 4th order central differences of the sampled 2-form, without the jets of xi.

    Parameters
    ----------
    xi : UnitVectorField
        The unit field.
    points : np.ndarray
        Points of shape (P, 7).
    context : DifferentiationContext
        Supplies the metric. In finite-difference mode its step is used.
    phi3 : Optional[ThreeFormLike]
        The parallel 3-form. The model form if not given.
    step : Optional[float]
        Stencil step. LEIBNIZ_STEP, or the context step in finite-difference mode, if not given.

    Returns
    -------
    alpha : np.ndarray
        Components alpha[p, x, y, z], shape (P, 7, 7, 7).
    """
    phi3 = model_three_form() if phi3 is None else phi3
    if step is None:
        finite = DifferentiationMode(context.mode) == DifferentiationMode.FINITE_DIFFERENCE
        step = context.step if finite else LEIBNIZ_STEP
    g = context.g

    def omega(at: np.ndarray) -> np.ndarray:
        return standard_structure(phi3, g, xi(at)).omega

    return central_difference(omega, np.atleast_2d(points), step)


def _alternate(gradient: np.ndarray, axis: int) -> np.ndarray:
    degree = gradient.ndim - axis - 1
    if degree >= DIMENSION:
        raise ValueError(f"Exterior derivative of a {degree}-form on a 7-manifold is undefined.")

    return sum((-1) ** j * np.moveaxis(gradient, axis, axis + j) for j in range(degree + 1))


def exterior_derivative(form: FormLike) -> Union[TrigField, np.ndarray]:
    """
    Exterior derivative (d theta)_{i_0 ... i_k} = sum_j (-1)^j d_{i_j} theta_{i_0 ... (i_j omitted) ... i_k}. On
    1-forms this is (d eta)(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y]).

    Parameters
    ----------
    form : FormLike
        A trigonometric form field (exact symbolic result) or a sampled form jet.

    Returns
    -------
    derivative : Union[TrigField, np.ndarray]
        A TrigField for a TrigField input, dense values of shape (P, 7, ..., 7) for a jet.
    """
    if isinstance(form, TrigField):
        gradient = form.gradient()
        coefficients = _alternate(gradient.coefficients, axis=1)
        return TrigField(coefficients, gradient.waves, gradient.phases, shape=coefficients.shape[1:]).pruned()

    return _alternate(form.gradient, axis=1)


def codifferential(form: FormLike, context: DifferentiationContext = DifferentiationContext()):
    """
    Codifferential delta = -sum_i e_i -| nabla_{e_i} for the flat metric, (delta theta)_{J} = -g^{ij} d_i theta_{jJ}.
    Zero on 0-forms.

    Parameters
    ----------
    form : FormLike
        A trigonometric form field or a sampled form jet.
    context : DifferentiationContext
        Supplies the constant metric.

    Returns
    -------
    codifferential : Union[TrigField, np.ndarray]
        The (k - 1)-form.
    """
    g_inv = inverse_metric(context.g)

    if isinstance(form, TrigField):
        if len(form.shape) == 0:
            return TrigField([], [], [], shape=())
        gradient = form.gradient()
        coefficients = -np.einsum("ij,tij...->t...", g_inv, gradient.coefficients)
        return TrigField(coefficients, gradient.waves, gradient.phases, shape=coefficients.shape[1:]).pruned()

    if form.degree == 0:
        return np.zeros_like(form.values)

    return -np.einsum("ij,pij...->p...", g_inv, form.gradient)


def lie_derivative_3form(d_xi: np.ndarray, phi3: Optional[ThreeFormLike] = None) -> np.ndarray:
    """
    Lie derivative of a parallel 3-form along a vector field,
    (L_xi phi)_abc = phi_mbc d_a xi^m + phi_amc d_b xi^m + phi_abm d_c xi^m.
    By the Cartan formula it equals d(xi -| phi) since d phi = 0.

    Parameters
    ----------
    d_xi : np.ndarray
        Derivatives d_k xi^m, shape (P, 7, 7).
    phi3 : Optional[ThreeFormLike]
        The constant 3-form. The model form if not given.

    Returns
    -------
    lie_derivative : np.ndarray
        Array of shape (P, 7, 7, 7).
    """
    phi = dense_three_form(model_three_form() if phi3 is None else phi3)

    return (
        np.einsum("mbc,pam->pabc", phi, d_xi)
        + np.einsum("amc,pbm->pabc", phi, d_xi)
        + np.einsum("abm,pcm->pabc", phi, d_xi)
    )


def integrate(values: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]], sampling: LatticeSampling) -> float:
    """
    Periodic trapezoidal quadrature over the torus, mean value times (2 pi)^7. Exact for trigonometric polynomials
    whose wave numbers stay below the resolution.

    Parameters
    ----------
    values : Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]
        Scalar values on the sample points, or a function evaluating them.
    sampling : LatticeSampling
        A full-grid sampling.

    Returns
    -------
    integral : float
        The integral.
    """
    if not sampling.is_full_grid:
        raise ValueError("quadrature requires full grid")

    if callable(values):
        values = values(sampling.points)

    return float(np.mean(values) * TORUS_VOLUME)


def stokes_volume(
        xi: UnitVectorField,
        sampling: LatticeSampling,
        phi3: Optional[ThreeFormLike] = None
) -> float:
    """
    (1/6) of the integral of (xi -| phi) ^ (xi -| phi) ^ phi over the torus, which equals its volume (2 pi)^7 for
    a unit field.

    Parameters
    ----------
    xi : UnitVectorField
        The unit field.
    sampling : LatticeSampling
        A full-grid sampling.
    phi3 : Optional[ThreeFormLike]
        The 3-form as a KForm7. The model form if not given.

    Returns
    -------
    volume : float
        The integral.
    """
    bilinear = three_form_bilinear(model_three_form() if phi3 is None else phi3)

    def density(points: np.ndarray) -> np.ndarray:
        values = xi(points)
        return np.einsum("pi,ij,pj->p", values, bilinear, values) / 6.0

    return integrate(density, sampling)
