import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from g2_contact.acms import standard_structure
from g2_contact.algebra7 import model_three_form
from g2_contact.chinea_gonzalez import ambient_basis, frame_structure
from g2_contact.fields import LatticeSampling

E = np.eye(7)


def vectors(min_value: float = -10.0, max_value: float = 10.0):
    return arrays(np.float64, 7, elements=st.floats(min_value, max_value, allow_nan=False, allow_infinity=False))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def phi0():
    return model_three_form()


@pytest.fixture(scope="session")
def reeb_point(phi0):
    """
    Standard structure of xi = e_7 at a single point, with its unitary frame.
    """
    acms = standard_structure(phi0, np.eye(7), E[6][None, :])
    return acms, frame_structure(acms)


@pytest.fixture(scope="session")
def cv_basis(reeb_point):
    return ambient_basis(reeb_point[1].phi)


@pytest.fixture
def small_sampling():
    return LatticeSampling(resolution=8, subsamples=24, seed=1)
