import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgvariants.errors import ContractError, DomainError, ResourceError
from lgvariants.qubit import Schedule, heisenberg_observable
from lgvariants.sequential import (
    check_measurement_set,
    correlator_nested,
    correlator_oracle,
    joint_distribution,
    joint_probability,
    marginal,
)

from conftest import configs, ket0


def _subsets(n):
    return st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True).map(sorted)


@st.composite
def config_with_subset(draw):
    rho, sched = draw(configs())
    return rho, sched, draw(_subsets(sched.n))


def test_joint_probability_examples():
    assert joint_probability(ket0(), Schedule.equal(2, 0.0), (1, 2), (1, 1)) == pytest.approx(1.0)
    assert joint_probability(ket0(), Schedule.equal(2, math.pi / 4), (2,), (1,)) == pytest.approx(0.5)


def test_joint_probability_length_mismatch():
    with pytest.raises(ContractError):
        joint_probability(ket0(), Schedule.equal(3, 0.1), (1, 2), (1,))


@pytest.mark.parametrize("performed", [(), (2, 1), (1, 1), (0,), (4,)])
def test_bad_measurement_sets(performed):
    with pytest.raises(ContractError):
        check_measurement_set(performed, 3)


def test_bad_density():
    with pytest.raises(DomainError):
        joint_distribution(np.eye(3), Schedule.equal(3, 0.1), (1,))


def test_resource_guard():
    with pytest.raises(ResourceError):
        joint_distribution(ket0(), Schedule.equal(21, 0.1), range(1, 22))


def _brute_force(rho, sched, performed):
    """Lueders chain written out one outcome string at a time."""
    out = {}
    for outs in product((1, -1), repeat=len(performed)):
        op = np.eye(2, dtype=complex)
        for i, m in zip(performed, outs):
            op = (np.eye(2) + m * heisenberg_observable(i, sched)) / 2 @ op
        out[outs] = np.trace(op @ rho @ op.conj().T).real
    return out


@given(config_with_subset())
@settings(max_examples=60)
def test_distribution_matches_brute_force(cfg):
    rho, sched, performed = cfg
    if len(performed) > 6:
        performed = performed[:6]
    dist = joint_distribution(rho, sched, performed)
    for outs, p in _brute_force(rho, sched, performed).items():
        idx = tuple(0 if m == 1 else 1 for m in outs)
        assert dist[idx] == pytest.approx(p, abs=1e-12)
    assert dist.sum() == pytest.approx(1.0, abs=1e-10)
    assert (dist >= 0).all()


def test_correlator_examples():
    assert correlator_oracle(ket0(), Schedule.equal(3, 0.4), (1,)) == pytest.approx(1.0)
    assert correlator_oracle(ket0(), Schedule.equal(2, math.pi / 4), (1, 2)) == pytest.approx(0.0, abs=1e-12)
    sched = Schedule.equal(3, 0.3)
    assert correlator_oracle(ket0(), sched, (1, 2, 3)) == pytest.approx(
        correlator_nested(ket0(), sched, (1, 2, 3)), abs=1e-12
    )


def test_nested_small_cases_by_hand():
    rng = np.random.default_rng(3)
    sched = Schedule.from_list(3, list(rng.uniform(0, 3, 2)))
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    m1, m2, m3 = (heisenberg_observable(i, sched) for i in (1, 2, 3))
    ac = lambda x, y: x @ y + y @ x  # noqa: E731
    assert correlator_nested(rho, sched, (2,)) == pytest.approx(np.trace(rho @ m2).real)
    assert correlator_nested(rho, sched, (1, 2)) == pytest.approx(np.trace(rho @ ac(m1, m2)).real / 2)
    assert correlator_nested(rho, sched, (1, 2, 3)) == pytest.approx(np.trace(rho @ ac(m1, ac(m2, m3))).real / 4)


@given(config_with_subset())
@settings(max_examples=200)
def test_oracle_nested_equivalence(cfg):
    rho, sched, performed = cfg
    assert abs(correlator_oracle(rho, sched, performed) - correlator_nested(rho, sched, performed)) <= 1e-10


@given(config_with_subset())
@settings(max_examples=60)
def test_final_measurement_marginalizes_away(cfg):
    rho, sched, performed = cfg
    if len(performed) < 2:
        return
    full = joint_distribution(rho, sched, performed)
    short = joint_distribution(rho, sched, performed[:-1])
    assert np.allclose(marginal(full, range(len(performed) - 1)), short, atol=1e-12)
