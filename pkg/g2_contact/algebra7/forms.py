from __future__ import annotations
from functools import lru_cache
from itertools import combinations, permutations
import logging
from math import comb
from typing import Mapping, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

DIMENSION = 7


@lru_cache(maxsize=None)
def index_combinations(degree: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Canonical ordered index tuples i_1 < ... < i_k (0-based) of a k-form on R^7.

    Parameters
    ----------
    degree : int
        The degree k.

    Returns
    -------
    combinations : Tuple[Tuple[int, ...], ...]
        The C(7, k) index tuples in lexicographic order.
    """
    return tuple(combinations(range(DIMENSION), degree))


@lru_cache(maxsize=None)
def _combination_position(degree: int) -> Mapping[Tuple[int, ...], int]:
    return {c: position for position, c in enumerate(index_combinations(degree))}


def permutation_sign(sequence: Sequence[int]) -> int:
    """
    Sign of the permutation sorting a sequence of distinct integers, 0 if an index repeats.

    Parameters
    ----------
    sequence : Sequence[int]
        The indices.

    Returns
    -------
    sign : int
        +1, -1 or 0.
    """
    if len(set(sequence)) != len(sequence):
        return 0

    inversions = sum(
        1 for i in range(len(sequence)) for j in range(i + 1, len(sequence)) if sequence[i] > sequence[j]
    )
    return -1 if inversions % 2 else 1


class KForm7:
    """
    An exterior k-form on R^7 stored by its canonical coefficients a_{i_1...i_k}, i_1 < ... < i_k. The dense totally
    antisymmetric array of all 7^k components is materialized on demand.
    """

    def __init__(self, degree: int, coefficients: Union[np.ndarray, Sequence[float], None] = None):
        """
        Initializes the form.

        Parameters
        ----------
        degree : int
            The degree k, 0 <= k <= 7.
        coefficients : Union[np.ndarray, Sequence[float]], optional
            The C(7, k) canonical coefficients. Zero form if not given.
        """
        if not 0 <= degree <= DIMENSION:
            raise ValueError(f"Invalid form degree: {degree}")

        size = comb(DIMENSION, degree)
        if coefficients is None:
            coefficients = np.zeros(size)
        coefficients = np.array(coefficients, dtype=float)

        if coefficients.shape != (size,):
            raise ValueError(f"A {degree}-form needs {size} coefficients, got shape {coefficients.shape}.")

        self.degree = degree
        self.coefficients = coefficients

    @classmethod
    def from_monomials(cls, degree: int, monomials: Mapping[Tuple[int, ...], float]) -> KForm7:
        """
        Builds a form from monomials written with 1-based indices, e.g. {(1, 2, 3): 1.0} for dx^123.

        Parameters
        ----------
        degree : int
            The degree k.
        monomials : Mapping[Tuple[int, ...], float]
            Map from index tuples (any order, 1-based) to coefficients.

        Returns
        -------
        form : KForm7
            The form.
        """
        form = cls(degree)
        positions = _combination_position(degree)
        for indices, value in monomials.items():
            if len(indices) != degree:
                raise ValueError(f"Monomial {indices} does not have degree {degree}.")
            zero_based = tuple(i - 1 for i in indices)
            sign = permutation_sign(zero_based)
            if sign:
                form.coefficients[positions[tuple(sorted(zero_based))]] += sign * value

        return form

    @classmethod
    def from_dense(cls, components: np.ndarray, atol: float = 1e-10) -> KForm7:
        """
        Builds a form from its dense array of components.

        Parameters
        ----------
        components : np.ndarray
            Totally antisymmetric array of shape (7,) * k.
        atol : float
            Tolerance of the antisymmetry check.

        Returns
        -------
        form : KForm7
            The form.
        """
        components = np.asarray(components, dtype=float)
        degree = components.ndim
        form = cls(degree, [components[c] for c in index_combinations(degree)])

        if degree > 1 and not np.allclose(form.components, components, atol=atol):
            raise ValueError("Components are not totally antisymmetric.")

        return form

    @property
    def components(self) -> np.ndarray:
        """
        Dense totally antisymmetric array of components.

        Returns
        -------
        components : np.ndarray
            Array of shape (7,) * k.
        """
        if self.degree == 0:
            return np.array(self.coefficients[0])

        dense = np.zeros((DIMENSION,) * self.degree)
        for position, indices in enumerate(index_combinations(self.degree)):
            value = self.coefficients[position]
            if value == 0.0:
                continue
            for permutation in permutations(range(self.degree)):
                dense[tuple(indices[p] for p in permutation)] = permutation_sign(permutation) * value

        return dense

    def __getitem__(self, indices: Tuple[int, ...]) -> float:
        sign = permutation_sign(indices)
        if not sign:
            return 0.0
        return sign * self.coefficients[_combination_position(self.degree)[tuple(sorted(indices))]]

    def evaluate(self, *vectors: np.ndarray) -> float:
        """
        Evaluates the form on k vectors.

        Returns
        -------
        value : float
            a(v_1, ..., v_k).
        """
        if len(vectors) != self.degree:
            raise ValueError(f"A {self.degree}-form takes {self.degree} vectors, got {len(vectors)}.")

        value = self.components
        for vector in vectors:
            value = np.tensordot(np.asarray(vector, dtype=float), value, axes=(0, 0))

        return float(value)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def __add__(self, other: KForm7) -> KForm7:
        if self.degree != other.degree:
            raise ValueError(f"Cannot add forms of degrees {self.degree} and {other.degree}.")
        return KForm7(self.degree, self.coefficients + other.coefficients)

    def __sub__(self, other: KForm7) -> KForm7:
        return self + (-other)

    def __neg__(self) -> KForm7:
        return KForm7(self.degree, -self.coefficients)

    def __mul__(self, scalar: float) -> KForm7:
        return KForm7(self.degree, scalar * self.coefficients)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = [
            f"{value:+g} dx^{''.join(str(i + 1) for i in indices)}"
            for indices, value in zip(index_combinations(self.degree), self.coefficients) if value != 0.0
        ]
        return f"KForm7(degree={self.degree}, {' '.join(terms) or '0'})"


def wedge(a: KForm7, b: KForm7) -> KForm7:
    """
    Exterior product in the shuffle convention, (a ^ b)(v_1, ..., v_{j+k}) = sum over (j, k)-shuffles s of
    sign(s) a(v_s(1), ...) b(v_s(j+1), ...). With it dx^1 ^ dx^2 has component (1, 2) equal to 1.

    Parameters
    ----------
    a : KForm7
        A j-form.
    b : KForm7
        A k-form.

    Returns
    -------
    product : KForm7
        The (j + k)-form a ^ b.
    """
    degree = a.degree + b.degree
    if degree > DIMENSION:
        raise ValueError(f"Wedge of degrees {a.degree} and {b.degree} exceeds dimension {DIMENSION}.")

    product = KForm7(degree)
    positions = _combination_position(degree)
    for i, left in enumerate(index_combinations(a.degree)):
        if a.coefficients[i] == 0.0:
            continue
        for j, right in enumerate(index_combinations(b.degree)):
            if b.coefficients[j] == 0.0:
                continue
            merged = left + right
            sign = permutation_sign(merged)
            if sign:
                product.coefficients[positions[tuple(sorted(merged))]] += sign * a.coefficients[i] * b.coefficients[j]

    return product


def interior(x: np.ndarray, a: KForm7) -> KForm7:
    """
    Interior product (x -| a)(v_2, ..., v_k) = a(x, v_2, ..., v_k).

    Parameters
    ----------
    x : np.ndarray
        The vector.
    a : KForm7
        A k-form with k >= 1.

    Returns
    -------
    contraction : KForm7
        The (k - 1)-form.
    """
    if a.degree == 0:
        raise ValueError("Interior product of a 0-form is undefined.")

    contracted = np.tensordot(np.asarray(x, dtype=float), a.components, axes=(0, 0))
    if a.degree == 1:
        return KForm7(0, [float(contracted)])

    return KForm7.from_dense(contracted)


def volume_form(g: np.ndarray = None) -> KForm7:
    """
    Metric volume form sqrt(det g) dx^1 ^ ... ^ dx^7, dx^1 ^ ... ^ dx^7 being positively oriented.

    Parameters
    ----------
    g : np.ndarray, optional
        The metric. Identity if not given.

    Returns
    -------
    volume : KForm7
        The 7-form.
    """
    determinant = 1.0 if g is None else float(np.linalg.det(g))
    if determinant <= 0:
        raise ValueError("degenerate metric")

    return KForm7(DIMENSION, [np.sqrt(determinant)])


def pullback(a: KForm7, linear_map: np.ndarray) -> KForm7:
    """
    Pull back a form under a linear map A, (A* a)(v_1, ...) = a(A v_1, ...).

    Parameters
    ----------
    a : KForm7
        The form.
    linear_map : np.ndarray
        The 7x7 matrix A.

    Returns
    -------
    pulled_back : KForm7
        The form A* a.
    """
    components = a.components
    for axis in range(a.degree):
        components = np.moveaxis(np.tensordot(components, linear_map, axes=([axis], [0])), -1, axis)

    return KForm7.from_dense(components)
