"""
No-signaling-in-time (NSIT) disturbance quantities for three-slot schedules.

Each ``D`` map compares the statistics of a run in which some earlier
measurement is skipped against the marginal of the run where all three
slots are measured:

* ``D1(m2, m3) = P(M2, M3) - sum_m1 P123``
* ``D2(m1, m3) = P(M1, M3) - sum_m2 P123``
* ``D3(m1, m2) = P(M1, M2) - sum_m3 P123``   (always zero: no backward signalling)
* ``D12(m3)    = P(M3)     - sum_{m1,m2} P123``

``alpha`` and ``beta`` collect the full-run probabilities of the assignments
on which the standard and variant three-slot functionals take the value -3,
so that ``(K3)_123 = 1 - 4 alpha`` and ``(K3var)_123 = 1 - 4 beta``.

Maps are keyed by tuples of outcomes (``+1``/``-1``), with a single outcome
for ``D12`` and the general ``n``-slot map.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ContractError, ResourceError
from .functionals import eval_all_measured, eval_separate, standard_K, variant_K3
from .qubit import Schedule
from .sequential import OUTCOMES, QUANTUM_ENUMERATION_LIMIT, joint_distribution, marginal

__all__ = [
    "DisturbanceReport",
    "ViolationCondition",
    "disturbance_D1",
    "disturbance_D2",
    "disturbance_D3",
    "disturbance_D12",
    "disturbance_general",
    "alpha",
    "beta",
    "gamma",
    "decomposition_check_standard",
    "violation_condition_standard",
    "violation_condition_variant",
    "disturbance_report",
]

_IDX = {1: 0, -1: 1}


def _require_three(sched: Schedule) -> None:
    if sched.n != 3:
        raise ContractError(f"this quantity is defined for n = 3 slots, got n = {sched.n}")


def _pair_map(rho, sched: Schedule, skipped: int) -> dict[tuple[int, int], float]:
    _require_three(sched)
    kept = tuple(i for i in (1, 2, 3) if i != skipped)
    pair = joint_distribution(rho, sched, kept)
    full = marginal(joint_distribution(rho, sched, (1, 2, 3)), [i - 1 for i in kept])
    diff = pair - full
    return {(a, b): float(diff[_IDX[a], _IDX[b]]) for a, b in product(OUTCOMES, OUTCOMES)}


def disturbance_D1(rho, sched: Schedule) -> dict[tuple[int, int], float]:
    """``D1`` keyed by ``(m2, m3)``."""
    return _pair_map(rho, sched, 1)


def disturbance_D2(rho, sched: Schedule) -> dict[tuple[int, int], float]:
    """``D2`` keyed by ``(m1, m3)``."""
    return _pair_map(rho, sched, 2)


def disturbance_D3(rho, sched: Schedule) -> dict[tuple[int, int], float]:
    """``D3`` keyed by ``(m1, m2)``."""
    return _pair_map(rho, sched, 3)


def disturbance_general(rho, sched: Schedule, final: int | None = None) -> dict[int, float]:
    """Disturbance of the last slot by all ``n - 1`` earlier measurements, keyed by ``m_n``."""
    n = sched.n
    if final is None:
        final = n
    if final != n or n < 3:
        raise ContractError(f"final slot must be the last one of an n >= 3 schedule, got {final} of {n}")
    if n > QUANTUM_ENUMERATION_LIMIT:
        raise ResourceError(f"n = {n} is too large for the full joint distribution")
    solo = joint_distribution(rho, sched, (n,))
    full = marginal(joint_distribution(rho, sched, range(1, n + 1)), [n - 1])
    return {m: float(solo[_IDX[m]] - full[_IDX[m]]) for m in OUTCOMES}


def disturbance_D12(rho, sched: Schedule) -> dict[int, float]:
    """``D12`` keyed by ``m3``."""
    _require_three(sched)
    return disturbance_general(rho, sched)


def _full(rho, sched: Schedule) -> np.ndarray:
    _require_three(sched)
    return joint_distribution(rho, sched, (1, 2, 3))


def alpha(rho, sched: Schedule) -> float:
    """``P(+,-,+) + P(-,+,-)`` of the all-measured run."""
    p = _full(rho, sched)
    return float(p[0, 1, 0] + p[1, 0, 1])


def beta(rho, sched: Schedule) -> float:
    """``P(+,-,+) + P(-,+,+)`` of the all-measured run."""
    p = _full(rho, sched)
    return float(p[0, 1, 0] + p[1, 0, 0])


def gamma(rho, sched: Schedule) -> float:
    """``n``-slot threshold ``(1 - (K3var_n)_{1..n}) / 4``; equals :func:`beta` for ``n = 3``."""
    return (1.0 - eval_all_measured(variant_K3(sched.n), rho, sched)) / 4


def decomposition_check_standard(rho, sched: Schedule) -> float:
    """Residual of writing ``K3 - (K3)_123`` through ``D1`` and ``D2``.

    The right-hand side is
    ``sum_{m2=m3} D1 - sum_{m1=m3} D2 - sum_{m2!=m3} D1 + sum_{m1!=m3} D2``.
    """
    _require_three(sched)
    spec = standard_K(3)
    lhs = eval_separate(spec, rho, sched) - eval_all_measured(spec, rho, sched)
    d1, d2 = disturbance_D1(rho, sched), disturbance_D2(rho, sched)
    rhs = (
        sum(v for (a, b), v in d1.items() if a == b)
        - sum(v for (a, b), v in d2.items() if a == b)
        - sum(v for (a, b), v in d1.items() if a != b)
        + sum(v for (a, b), v in d2.items() if a != b)
    )
    return abs(lhs - rhs)


@dataclass(frozen=True)
class ViolationCondition:
    """A functional's violation restated as ``lhs > threshold``."""

    lhs: float
    threshold: float
    violated: bool

    @property
    def condition_holds(self) -> bool:
        return self.lhs > self.threshold


def violation_condition_standard(rho, sched: Schedule) -> ViolationCondition:
    """``sum_{m2=m3} D1 - sum_{m1=m3} D2 > 2 alpha``, against ``K3 > 1``."""
    _require_three(sched)
    d1, d2 = disturbance_D1(rho, sched), disturbance_D2(rho, sched)
    lhs = sum(v for (a, b), v in d1.items() if a == b) - sum(
        v for (a, b), v in d2.items() if a == b
    )
    value = eval_separate(standard_K(3), rho, sched)
    return ViolationCondition(lhs, 2 * alpha(rho, sched), value > 1)


def violation_condition_variant(rho, sched: Schedule) -> ViolationCondition:
    """``-sum_m3 m3 D12(m3) > 4 beta``, against ``K3var > 1``.

    The plain sum of ``D12`` over ``m3`` vanishes identically; the outcome
    weighted sum is the one equal to ``K3var - (K3var)_123``.
    """
    _require_three(sched)
    d12 = disturbance_D12(rho, sched)
    lhs = -sum(m * v for m, v in d12.items())
    value = eval_separate(variant_K3(3), rho, sched)
    return ViolationCondition(lhs, 4 * beta(rho, sched), value > 1)


@dataclass(frozen=True)
class DisturbanceReport:
    d1: dict
    d2: dict
    d3: dict
    d12: dict
    alpha: float
    beta: float
    gamma: float

    def flat(self) -> dict[str, float]:
        """Flat key-value record, e.g. ``{"d1[+,-]": ..., "alpha": ...}``."""
        out: dict[str, float] = {}
        for name in ("d1", "d2", "d3"):
            for (a, b), v in getattr(self, name).items():
                out[f"{name}[{_sym(a)},{_sym(b)}]"] = v
        for m, v in self.d12.items():
            out[f"d12[{_sym(m)}]"] = v
        out["alpha"], out["beta"], out["gamma"] = self.alpha, self.beta, self.gamma
        return out


def _sym(m: int) -> str:
    return "+" if m > 0 else "-"


def disturbance_report(rho, sched: Schedule) -> DisturbanceReport:
    _require_three(sched)
    return DisturbanceReport(
        d1=disturbance_D1(rho, sched),
        d2=disturbance_D2(rho, sched),
        d3=disturbance_D3(rho, sched),
        d12=disturbance_D12(rho, sched),
        alpha=alpha(rho, sched),
        beta=beta(rho, sched),
        gamma=gamma(rho, sched),
    )
