"""
Exact 2x2 operator algebra for a single qubit.

Operators are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype
``complex128``. The measured observable at the first time slot defaults to
``sigma_z`` and the free evolution between slots is generated by ``sigma_x``:

    U(g) = exp(-i g sigma_x) = cos(g) I - i sin(g) sigma_x

where ``g = omega * tau`` is the dimensionless coupling angle of one interval.
The observable measured at slot ``i`` in the Heisenberg picture is
``M_i = U(G_i)^dagger M_1 U(G_i)`` with ``G_i`` the sum of the couplings of
all intervals before slot ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PureState",
    "Schedule",
    "density_from_pure",
    "evolution",
    "heisenberg_observable",
    "projector",
    "is_hermitian",
    "is_involution",
    "is_unitary",
    "is_density",
]

ALGEBRA_TOL = 1e-12
EIGEN_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


IDENTITY = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    a = np.asarray(a)
    return a.shape == (2, 2) and bool(np.allclose(a, dagger(a), rtol=0, atol=tol))


def is_involution(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    """True for Hermitian operators squaring to the identity (outcomes +-1)."""
    a = np.asarray(a)
    return is_hermitian(a, tol) and bool(np.allclose(a @ a, IDENTITY, rtol=0, atol=tol))


def is_unitary(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    a = np.asarray(a)
    return a.shape == (2, 2) and bool(np.allclose(dagger(a) @ a, IDENTITY, rtol=0, atol=tol))


def is_density(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    a = np.asarray(a)
    if not is_hermitian(a, tol):
        return False
    if abs(np.trace(a) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(a).min() >= -tol)


@dataclass(frozen=True)
class PureState:
    """The pure state ``cos(theta)|0> + exp(-i phi) sin(theta)|1>``."""

    theta: float
    phi: float

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError(f"state angles must be finite, got ({theta}, {phi})")
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"theta={theta} outside [0, pi]")
        if not 0.0 <= phi <= 2 * math.pi:
            raise DomainError(f"phi={phi} outside [0, 2pi]")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta), np.exp(-1j * self.phi) * math.sin(self.theta)],
            dtype=np.complex128,
        )


def density_from_pure(state: PureState) -> np.ndarray:
    """Return the projector ``|psi><psi|`` for a :class:`PureState`."""
    if not isinstance(state, PureState):
        raise DomainError(f"expected PureState, got {type(state).__name__}")
    psi = state.ket()
    return _frozen(np.outer(psi, psi.conj()))


def evolution(g: float) -> np.ndarray:
    """Unitary ``cos(g) I - i sin(g) sigma_x`` for one coupling angle."""
    g = float(g)
    if not math.isfinite(g):
        raise DomainError(f"coupling angle must be finite, got {g}")
    return _frozen(math.cos(g) * IDENTITY - 1j * math.sin(g) * SIGMA_X)


def evolution_batch(g: np.ndarray) -> np.ndarray:
    """Vectorised :func:`evolution`; returns shape ``g.shape + (2, 2)``."""
    g = np.asarray(g, dtype=float)
    c = np.cos(g)[..., None, None]
    s = np.sin(g)[..., None, None]
    return c * IDENTITY - 1j * s * SIGMA_X


@dataclass(frozen=True)
class Schedule:
    """Coupling angles of the ``n - 1`` intervals between ``n`` measurement slots.

    ``observable`` is the dichotomic observable measured at the first slot.
    """

    couplings: tuple[float, ...]
    observable: np.ndarray = field(default=SIGMA_Z, repr=False, compare=False)

    def __post_init__(self):
        couplings = tuple(float(g) for g in self.couplings)
        if len(couplings) < 1:
            raise DomainError("a schedule needs at least two measurement slots")
        if not all(math.isfinite(g) for g in couplings):
            raise DomainError(f"couplings must be finite, got {couplings}")
        obs = np.asarray(self.observable, dtype=np.complex128)
        if not is_involution(obs):
            raise DomainError("initial observable must be a Hermitian involution")
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "observable", _frozen(obs))

    @classmethod
    def equal(cls, n: int, g: float, observable: np.ndarray = SIGMA_Z) -> "Schedule":
        """Equal coupling ``g`` on every interval of an ``n``-slot schedule."""
        if int(n) != n or n < 2:
            raise DomainError(f"measurement count must be an integer >= 2, got {n}")
        return cls((float(g),) * (int(n) - 1), observable)

    @classmethod
    def from_list(cls, n: int, gs: Sequence[float]) -> "Schedule":
        """Build from a list that is either one value (broadcast) or ``n - 1`` values."""
        gs = [float(g) for g in gs]
        if len(gs) == 1:
            return cls.equal(n, gs[0])
        if len(gs) != n - 1:
            raise DomainError(f"need 1 or {n - 1} couplings for n={n}, got {len(gs)}")
        return cls(tuple(gs))

    @property
    def n(self) -> int:
        return len(self.couplings) + 1

    def cumulative(self, i: int) -> float:
        """Total coupling angle accumulated before slot ``i`` (1-based)."""
        self._check_index(i)
        return float(sum(self.couplings[: i - 1]))

    def _check_index(self, i: int) -> None:
        if int(i) != i or not 1 <= i <= self.n:
            raise DomainError(f"time index {i} outside 1..{self.n}")


def heisenberg_observable(i: int, sched: Schedule) -> np.ndarray:
    """Observable measured at slot ``i``, ``U(G_i)^dagger M_1 U(G_i)``."""
    u = evolution(sched.cumulative(i))
    return _frozen(dagger(u) @ sched.observable @ u)


def heisenberg_batch(cumulative: np.ndarray, observable: np.ndarray = SIGMA_Z) -> np.ndarray:
    """Vectorised Heisenberg observables for an array of cumulative angles."""
    u = evolution_batch(cumulative)
    return dagger(u) @ observable @ u


def projector(obs: np.ndarray, outcome: int) -> np.ndarray:
    """Spectral projector ``(I + outcome * obs) / 2`` of a dichotomic observable."""
    if outcome not in (1, -1):
        raise DomainError(f"outcome must be +1 or -1, got {outcome}")
    obs = np.asarray(obs, dtype=np.complex128)
    if not is_involution(obs):
        raise DomainError("projector needs a Hermitian observable with obs @ obs = I")
    return _frozen((IDENTITY + outcome * obs) / 2)
