"""
Sequential projective measurements on a qubit.

Joint outcome statistics come from the Lüders projector chain

    P(m_1, ..., m_k) = Tr[Pi_k ... Pi_1 rho Pi_1 ... Pi_k]

with Heisenberg-picture projectors of the performed slots in time order.
Unmeasured slots only contribute unitary evolution, which is already folded
into the Heisenberg observables.

Correlators are available by two independent routes: the explicit sum over
all outcome strings (:func:`correlator_oracle`) and the closed nested
anticommutator expression (:func:`correlator_nested`)

    <M_1 ... M_k> = 2^(1-k) Tr[rho {M_1, {M_2, ... {M_{k-1}, M_k}...}}]

Outcome arrays returned by :func:`joint_distribution` have one axis per
performed measurement; index 0 on an axis means outcome +1, index 1 means -1.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, ContractError, DomainError, ResourceError
from .qubit import IDENTITY, SIGMA_Z, Schedule, heisenberg_batch, heisenberg_observable, is_density

__all__ = [
    "OUTCOMES",
    "QUANTUM_ENUMERATION_LIMIT",
    "check_measurement_set",
    "joint_distribution",
    "joint_probability",
    "marginal",
    "correlator_oracle",
    "correlator_nested",
    "nested_operator",
    "nested_operator_batch",
    "outcome_signs",
]

OUTCOMES = (1, -1)
QUANTUM_ENUMERATION_LIMIT = 20

# probabilities below this are treated as broken arithmetic, not rounding
_NEGATIVITY_LIMIT = 1e-9


def check_measurement_set(performed: Sequence[int], n: int) -> tuple[int, ...]:
    """Validate a strictly increasing, non-empty subset of ``1..n``."""
    try:
        s = tuple(int(i) for i in performed)
    except (TypeError, ValueError) as exc:
        raise ContractError(f"measurement set must hold integers: {performed!r}") from exc
    if not s:
        raise ContractError("measurement set is empty")
    if any(b <= a for a, b in zip(s, s[1:])):
        raise ContractError(f"measurement set {s} is not strictly increasing")
    if s[0] < 1 or s[-1] > n:
        raise ContractError(f"measurement set {s} not within 1..{n}")
    return s


def _check_rho(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2) or not is_density(rho, tol=1e-10):
        raise DomainError("rho is not a valid 2x2 density operator")
    return rho


def _projector_pair(obs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return (IDENTITY + obs) / 2, (IDENTITY - obs) / 2


def _clamp(p: np.ndarray) -> np.ndarray:
    if np.min(p) < -_NEGATIVITY_LIMIT or np.max(p) > 1 + _NEGATIVITY_LIMIT:
        raise ConsistencyError(
            f"joint probability outside [0, 1] beyond tolerance: [{np.min(p)}, {np.max(p)}]"
        )
    return np.clip(p, 0.0, 1.0)


def joint_distribution(rho: np.ndarray, sched: Schedule, performed: Sequence[int]) -> np.ndarray:
    """Full table of joint probabilities for the performed slots.

    Returns an array of shape ``(2,) * k`` whose entries sum to one.
    """
    rho = _check_rho(rho)
    performed = check_measurement_set(performed, sched.n)
    if len(performed) > QUANTUM_ENUMERATION_LIMIT:
        raise ResourceError(
            f"{len(performed)} measurements exceed the enumeration limit "
            f"{QUANTUM_ENUMERATION_LIMIT}"
        )
    branches = rho[None]
    for i in performed:
        plus, minus = _projector_pair(heisenberg_observable(i, sched))
        branches = np.stack(
            [plus @ branches @ plus, minus @ branches @ minus], axis=1
        ).reshape(-1, 2, 2)
    traces = np.trace(branches, axis1=1, axis2=2)
    if np.max(np.abs(traces.imag)) > _NEGATIVITY_LIMIT:
        raise ConsistencyError("joint probabilities acquired an imaginary part")
    return _clamp(traces.real).reshape((2,) * len(performed))


def joint_probability(
    rho: np.ndarray, sched: Schedule, performed: Sequence[int], outcomes: Sequence[int]
) -> float:
    """Probability of one outcome string for the performed slots."""
    rho = _check_rho(rho)
    performed = check_measurement_set(performed, sched.n)
    outcomes = tuple(outcomes)
    if len(outcomes) != len(performed):
        raise ContractError(
            f"{len(outcomes)} outcomes given for {len(performed)} measurements"
        )
    if any(m not in OUTCOMES for m in outcomes):
        raise ContractError(f"outcomes must be +1 or -1, got {outcomes}")
    state = rho
    for i, m in zip(performed, outcomes):
        p = (IDENTITY + m * heisenberg_observable(i, sched)) / 2
        state = p @ state @ p
    tr = np.trace(state)
    if abs(tr.imag) > _NEGATIVITY_LIMIT:
        raise ConsistencyError("joint probability acquired an imaginary part")
    return float(_clamp(np.array(tr.real)))


def outcome_signs(k: int) -> np.ndarray:
    """Tensor of outcome products ``m_1 ... m_k`` matching the distribution layout."""
    base = np.array(OUTCOMES, dtype=float)
    return reduce(np.multiply.outer, [base] * k) if k else np.array(1.0)


def marginal(dist: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Sum a joint table over every axis not listed (0-based) in ``keep``."""
    drop = tuple(ax for ax in range(dist.ndim) if ax not in set(keep))
    return dist.sum(axis=drop) if drop else dist


def correlator_oracle(rho: np.ndarray, sched: Schedule, performed: Sequence[int]) -> float:
    """Sequential correlator by explicit summation over all outcome strings."""
    dist = joint_distribution(rho, sched, performed)
    return float(np.sum(outcome_signs(dist.ndim) * dist))


def nested_operator(sched: Schedule, performed: Sequence[int]) -> np.ndarray:
    """The operator ``2^(1-k) {M_i1, {M_i2, ... {M_ik-1, M_ik}...}}``."""
    performed = check_measurement_set(performed, sched.n)
    obs = [heisenberg_observable(i, sched) for i in performed]
    acc = obs[-1]
    for m in reversed(obs[:-1]):
        acc = (m @ acc + acc @ m) / 2
    return acc


def correlator_nested(rho: np.ndarray, sched: Schedule, performed: Sequence[int]) -> float:
    """Sequential correlator from the nested anticommutator formula."""
    rho = _check_rho(rho)
    return float(np.trace(rho @ nested_operator(sched, performed)).real)


def nested_operator_batch(
    cumulative: np.ndarray, performed: Sequence[int], observable: np.ndarray = SIGMA_Z
) -> np.ndarray:
    """Batched :func:`nested_operator`.

    ``cumulative`` has shape ``(B, n)`` holding the accumulated angle before
    every slot; ``performed`` indexes its columns (1-based). Returns ``(B, 2, 2)``.
    """
    cumulative = np.atleast_2d(np.asarray(cumulative, dtype=float))
    performed = check_measurement_set(performed, cumulative.shape[1])
    obs = heisenberg_batch(cumulative[:, [i - 1 for i in performed]], observable)
    acc = obs[:, -1]
    for j in range(len(performed) - 2, -1, -1):
        m = obs[:, j]
        acc = (m @ acc + acc @ m) / 2
    return acc
