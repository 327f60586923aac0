from __future__ import annotations
import logging
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ...enum import Phase

logger = logging.getLogger(__name__)

DIMENSION = 7


class TrigField:
    """
    Tensor-valued trigonometric polynomial on the torus R^7 / (2 pi Z)^7,

        F(x) = sum_t C_t cos(w_t . x)  or  C_t sin(w_t . x),

    with coefficient tensors C_t of a common shape and integer wave vectors w_t. Differentiation maps a term to a term,
    so derivatives of any order are exact.
    """

    def __init__(
            self,
            coefficients: Union[np.ndarray, Sequence],
            waves: Union[np.ndarray, Sequence],
            phases: Sequence[Union[str, Phase]],
            shape: Tuple[int, ...] = None
    ):
        """
        Initializes the field.

        Parameters
        ----------
        coefficients : Union[np.ndarray, Sequence]
            Coefficient tensors, shape (T, *shape).
        waves : Union[np.ndarray, Sequence]
            Integer wave vectors, shape (T, 7).
        phases : Sequence[Union[str, Phase]]
            Phase tag of every term.
        shape : Tuple[int, ...], optional
            Value shape, needed only when there are no terms.
        """
        waves = np.asarray(waves, dtype=float).reshape(-1, DIMENSION)
        if not np.array_equal(waves, np.round(waves)):
            raise ValueError("Wave vectors must be integers for the field to be periodic.")

        if len(waves) == 0:
            shape = tuple(shape) if shape is not None else (DIMENSION,)
            coefficients = np.zeros((0, *shape))
        else:
            coefficients = np.asarray(coefficients, dtype=float)
            if shape is not None and coefficients.shape[1:] != tuple(shape):
                raise ValueError(f"Coefficients of shape {coefficients.shape[1:]} do not match {shape}.")

        if len(coefficients) != len(waves) or len(phases) != len(waves):
            raise ValueError(
                f"Got {len(coefficients)} coefficients, {len(waves)} waves and {len(phases)} phases."
            )

        self.coefficients = coefficients
        self.waves = waves.astype(int)
        self.phases = [Phase(phase) for phase in phases]

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.coefficients.shape[1:]

    def __len__(self) -> int:
        return len(self.waves)

    @property
    def _is_cos(self) -> np.ndarray:
        return np.array([phase == Phase.COS for phase in self.phases], dtype=bool)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """
        Evaluates the field.

        Parameters
        ----------
        points : np.ndarray
            Points of shape (P, 7).

        Returns
        -------
        values : np.ndarray
            Values of shape (P, *shape).
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(self) == 0:
            return np.zeros((len(points), *self.shape))

        arguments = points @ self.waves.T
        trig = np.where(self._is_cos, np.cos(arguments), np.sin(arguments))

        return np.tensordot(trig, self.coefficients, axes=(1, 0))

    def gradient(self) -> TrigField:
        """
        Exact gradient, a field of shape (7, *shape) whose component [k, ...] is the partial derivative d_k. A cosine
        term C cos(w.x) becomes -w_k C sin(w.x) and a sine term C sin(w.x) becomes w_k C cos(w.x).

        Returns
        -------
        gradient : TrigField
            The gradient field.
        """
        signs = np.where(self._is_cos, -1.0, 1.0)
        coefficients = np.einsum("t,tk,t...->tk...", signs, self.waves.astype(float), self.coefficients)
        phases = [Phase.SIN if phase == Phase.COS else Phase.COS for phase in self.phases]

        return TrigField(coefficients, self.waves, phases, shape=(DIMENSION, *self.shape)).pruned()

    def derivative(self, k: int) -> TrigField:
        """
        Exact partial derivative d_k.

        Parameters
        ----------
        k : int
            Coordinate index, 0-based.

        Returns
        -------
        derivative : TrigField
            The derivative field.
        """
        gradient = self.gradient()
        return TrigField(gradient.coefficients[:, k], gradient.waves, gradient.phases, shape=self.shape).pruned()

    def map_coefficients(self, function) -> TrigField:
        """
        Applies a linear map to every coefficient tensor. Linear maps commute with evaluation.
        """
        coefficients = np.stack([function(c) for c in self.coefficients]) if len(self) else None
        shape = None if coefficients is not None else np.shape(function(np.zeros(self.shape)))

        return TrigField(coefficients, self.waves, self.phases, shape=shape).pruned()

    def pruned(self, atol: float = 0.0) -> TrigField:
        keep = [i for i, c in enumerate(self.coefficients) if np.max(np.abs(c), initial=0.0) > atol]
        return TrigField(self.coefficients[keep], self.waves[keep], [self.phases[i] for i in keep], shape=self.shape)

    def __add__(self, other: TrigField) -> TrigField:
        if self.shape != other.shape:
            raise ValueError(f"Cannot add fields of shapes {self.shape} and {other.shape}.")
        return type(self)._from_parts(
            np.concatenate([self.coefficients, other.coefficients]),
            np.concatenate([self.waves, other.waves]),
            self.phases + other.phases,
            self.shape
        )

    def __neg__(self) -> TrigField:
        return self * -1.0

    def __sub__(self, other: TrigField) -> TrigField:
        return self + (-other)

    def __mul__(self, scalar: float) -> TrigField:
        return type(self)._from_parts(scalar * self.coefficients, self.waves, self.phases, self.shape)

    __rmul__ = __mul__

    @classmethod
    def _from_parts(cls, coefficients, waves, phases, shape) -> TrigField:
        return TrigField(coefficients, waves, phases, shape=shape)

    @classmethod
    def constant(cls, value: np.ndarray) -> TrigField:
        value = np.asarray(value, dtype=float)
        return cls._from_parts(value[None], np.zeros((1, DIMENSION)), [Phase.COS], value.shape)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(shape={self.shape}, terms={len(self)})"


class TrigVectorField(TrigField):
    """
    Vector field on the torus given by a finite list of terms (coefficient vector, integer wave vector, phase).
    """

    def __init__(
            self,
            coefficients: Union[np.ndarray, Sequence],
            waves: Union[np.ndarray, Sequence],
            phases: Sequence[Union[str, Phase]]
    ):
        super().__init__(coefficients, waves, phases, shape=(DIMENSION,))

    @classmethod
    def _from_parts(cls, coefficients, waves, phases, shape) -> TrigField:
        if tuple(shape) != (DIMENSION,):
            return TrigField(coefficients, waves, phases, shape=shape)
        return cls(coefficients, waves, phases)

    @classmethod
    def from_terms(cls, terms: Iterable[Dict[str, Any]]) -> TrigVectorField:
        """
        Builds a field from terms {"coeff": [7 reals], "wave": [7 ints], "phase": "cos" | "sin"}.

        Parameters
        ----------
        terms : Iterable[Dict[str, Any]]
            The terms.

        Returns
        -------
        field : TrigVectorField
            The vector field.
        """
        terms = list(terms)
        for term in terms:
            missing = {"coeff", "wave", "phase"} - set(term)
            if missing:
                raise ValueError(f"Field term {term} is missing keys {sorted(missing)}.")
            if len(term["coeff"]) != DIMENSION or len(term["wave"]) != DIMENSION:
                raise ValueError(f"Field term {term} must have 7 coefficients and 7 wave numbers.")

        return cls(
            [term["coeff"] for term in terms],
            [term["wave"] for term in terms],
            [term["phase"] for term in terms]
        )

    def to_terms(self) -> List[Dict[str, Any]]:
        return [
            {"coeff": c.tolist(), "wave": w.tolist(), "phase": str(p)}
            for c, w, p in zip(self.coefficients, self.waves, self.phases)
        ]

    def divergence(self) -> TrigField:
        """
        Exact divergence sum_k d_k X^k.
        """
        return self.gradient().map_coefficients(np.trace)
