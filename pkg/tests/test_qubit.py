import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lgvariants.errors import DomainError
from lgvariants.qubit import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    PureState,
    Schedule,
    density_from_pure,
    evolution,
    heisenberg_observable,
    is_density,
    is_involution,
    is_unitary,
    projector,
)

from conftest import angles, phis, thetas


@pytest.mark.parametrize(
    "theta, phi, expected",
    [
        (0.0, 0.0, np.diag([1, 0])),
        (math.pi / 2, 0.0, np.diag([0, 1])),
        (math.pi / 4, math.pi / 2, np.array([[0.5, 0.5j], [-0.5j, 0.5]])),
    ],
)
def test_density_examples(theta, phi, expected):
    assert np.allclose(density_from_pure(PureState(theta, phi)), expected, atol=1e-12)


@pytest.mark.parametrize("theta, phi", [(-0.1, 0), (3.2, 0), (0, -0.1), (0, 6.3), (math.nan, 0), (0, math.inf)])
def test_state_domain(theta, phi):
    with pytest.raises(DomainError):
        PureState(theta, phi)


def test_evolution_examples():
    assert np.allclose(evolution(0.0), IDENTITY)
    assert np.allclose(evolution(math.pi / 2), -1j * SIGMA_X)
    c = math.cos(math.pi / 6)
    assert np.allclose(evolution(math.pi / 6), [[c, -0.5j], [-0.5j, c]])


def test_evolution_matches_series():
    # truncated power series of exp(-i g sigma_x)
    g = 0.7
    acc, term = np.zeros((2, 2), complex), np.eye(2, dtype=complex)
    for k in range(1, 40):
        acc += term
        term = term @ (-1j * g * SIGMA_X) / k
    assert np.allclose(evolution(g), acc, atol=1e-14)


@pytest.mark.parametrize("g", [math.nan, math.inf, -math.inf])
def test_evolution_non_finite(g):
    with pytest.raises(DomainError):
        evolution(g)


@given(angles, angles)
def test_evolution_group(a, b):
    assert is_unitary(evolution(a))
    assert np.allclose(evolution(a) @ evolution(b), evolution(a + b), atol=1e-12)


def test_heisenberg_examples():
    sched = Schedule.equal(3, 0.3)
    assert np.allclose(heisenberg_observable(1, sched), SIGMA_Z)
    m2 = heisenberg_observable(2, Schedule.equal(2, math.pi / 4))
    assert abs(m2[0, 0]) < 1e-12
    g = 0.37
    assert heisenberg_observable(3, Schedule.equal(3, g))[0, 0].real == pytest.approx(math.cos(4 * g))


@given(st.lists(angles, min_size=1, max_size=6))
def test_heisenberg_is_rotated_sigma_z(gs):
    sched = Schedule.from_list(len(gs) + 1, gs)
    for i in range(1, sched.n + 1):
        m = heisenberg_observable(i, sched)
        u = evolution(sched.cumulative(i))
        assert np.allclose(m, u.conj().T @ SIGMA_Z @ u, atol=1e-12)
        two_g = 2 * sched.cumulative(i)
        assert np.allclose(m, math.cos(two_g) * SIGMA_Z + math.sin(two_g) * SIGMA_Y, atol=1e-12)
        assert is_involution(m)


@pytest.mark.parametrize("i", [0, 4, -1])
def test_heisenberg_index(i):
    with pytest.raises(DomainError):
        heisenberg_observable(i, Schedule.equal(3, 0.1))


def test_projector_examples():
    assert np.allclose(projector(SIGMA_Z, 1), np.diag([1, 0]))
    assert np.allclose(projector(SIGMA_Z, -1), np.diag([0, 1]))
    assert np.allclose(projector(SIGMA_X, 1), np.full((2, 2), 0.5))


def test_projector_errors():
    with pytest.raises(DomainError):
        projector(SIGMA_Z, 0)
    with pytest.raises(DomainError):
        projector(2 * SIGMA_Z, 1)


@given(thetas, phis)
def test_density_is_pure_state(theta, phi):
    rho = density_from_pure(PureState(theta, phi))
    assert is_density(rho)
    assert np.trace(rho @ rho).real == pytest.approx(1.0)


def test_schedule_shapes():
    assert Schedule.from_list(4, [0.2]).couplings == (0.2, 0.2, 0.2)
    assert Schedule.from_list(3, [0.1, 0.2]).cumulative(3) == pytest.approx(0.3)
    with pytest.raises(DomainError):
        Schedule.from_list(3, [0.1, 0.2, 0.3])
