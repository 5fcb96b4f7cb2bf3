import math

import numpy as np
import pytest
from hypothesis import strategies as st

from lgvariants.qubit import PureState, Schedule, density_from_pure

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
thetas = st.floats(min_value=0.0, max_value=math.pi)
phis = st.floats(min_value=0.0, max_value=2 * math.pi)


@st.composite
def configs(draw, n_min=2, n_max=8):
    """A random (rho, schedule) pair with one coupling per interval."""
    n = draw(st.integers(n_min, n_max))
    gs = draw(st.lists(angles, min_size=n - 1, max_size=n - 1))
    rho = density_from_pure(PureState(draw(thetas), draw(phis)))
    return rho, Schedule.from_list(n, gs)


def random_config(rng: np.random.Generator, n: int = 3):
    rho = density_from_pure(PureState(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)))
    return rho, Schedule.from_list(n, list(rng.uniform(0, math.pi, n - 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def ket0():
    return density_from_pure(PureState(0.0, 0.0))
