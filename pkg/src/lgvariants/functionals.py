"""
Leggett-Garg type functionals as data.

A functional is a signed sum of sequential correlators,

    F = sum_t sign_t * <prod_{i in S_t} M_i>,

stored as a :class:`FunctionalSpec`. Specs have a canonical text form, e.g.
``+[1,2,3] +[1,2] -[3]``; :func:`parse_spec` also accepts the shortcuts
``K:n``, ``K3var:n`` and ``L3var:n``.

Quantum values come from the measurement simulation in two flavours:

* :func:`eval_separate` measures, in each run, only the slots of one term.
* :func:`eval_all_measured` performs all ``n`` measurements in every run and
  reads each correlator off the marginals of the full joint distribution.

Macrorealist bounds are exact extrema over all ``2**n`` deterministic
outcome assignments.

The module also carries the analytic expressions for the built-in families
as they appear in the literature (:func:`closed_form`,
:func:`closed_form_pi_over_2n`) and expressions re-derived from the Bloch
vector picture of this package (:func:`derived_form`). The re-derived forms
agree with the simulation; the literature forms are kept verbatim and their
deviations are surfaced by :func:`discrepancy_report`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ContractError, ResourceError
from .qubit import PureState, Schedule, density_from_pure
from .sequential import (
    QUANTUM_ENUMERATION_LIMIT,
    check_measurement_set,
    correlator_nested,
    correlator_oracle,
    joint_distribution,
    marginal,
    nested_operator,
    outcome_signs,
)

__all__ = [
    "FunctionalSpec",
    "BoundPair",
    "FAMILIES",
    "CLOSED_FORM_FAMILIES",
    "standard_K",
    "variant_K3",
    "variant_L3",
    "three_time_variant",
    "K3_4",
    "L3_4",
    "relabel",
    "parse_spec",
    "eval_separate",
    "eval_all_measured",
    "functional_operator",
    "macrorealist_bound",
    "closed_form",
    "closed_form_pi_over_2n",
    "large_n_limit",
    "derived_form",
    "discrepancy_report",
]

MAX_ENUMERATION_N = 24
ORACLE_TERM_LIMIT = 12

Term = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class FunctionalSpec:
    """Signed list of ordered time-index subsets over ``n`` slots."""

    n: int
    terms: tuple[Term, ...]
    name: str = ""

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ContractError(f"slot count must be a positive integer, got {self.n}")
        if not self.terms:
            raise ContractError("a functional needs at least one term")
        terms = []
        for sign, subset in self.terms:
            if sign not in (1, -1):
                raise ContractError(f"term sign must be +1 or -1, got {sign}")
            terms.append((int(sign), check_measurement_set(subset, self.n)))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def text(self) -> str:
        return " ".join(
            ("+" if s > 0 else "-") + "[" + ",".join(map(str, sub)) + "]"
            for s, sub in self.terms
        )

    @property
    def algebraic_max(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class BoundPair:
    macrorealist_min: float
    macrorealist_max: float
    algebraic_max: float


def standard_K(n: int) -> FunctionalSpec:
    """``<M1 M2> + ... + <M_{n-1} M_n> - <M1 M_n>``."""
    _check_n(n, 3)
    terms = [(1, (i, i + 1)) for i in range(1, n)] + [(-1, (1, n))]
    return FunctionalSpec(n, tuple(terms), f"K:{n}")


def variant_K3(n: int) -> FunctionalSpec:
    """``<M1 ... M_n> + <M1 ... M_{n-1}> - <M_n>``."""
    _check_n(n, 3)
    full = tuple(range(1, n + 1))
    return FunctionalSpec(n, ((1, full), (1, full[:-1]), (-1, (n,))), f"K3var:{n}")


def variant_L3(n: int) -> FunctionalSpec:
    """``<M1 ... M_{n-1}> + <M2 ... M_n> - <M1 M_n>``; coincides with ``K:3`` at ``n = 3``."""
    _check_n(n, 3)
    full = tuple(range(1, n + 1))
    return FunctionalSpec(n, ((1, full[:-1]), (1, full[1:]), (-1, (1, n))), f"L3var:{n}")


def three_time_variant(i: int, j: int, k: int) -> FunctionalSpec:
    """``<M1 M2 M3> + <M_i M_j> - <M_k>`` over three slots, ``i < j``."""
    if not (1 <= i < j <= 3 and 1 <= k <= 3):
        raise ContractError(f"need 1 <= i < j <= 3 and 1 <= k <= 3, got ({i}, {j}, {k})")
    return FunctionalSpec(3, ((1, (1, 2, 3)), (1, (i, j)), (-1, (k,))), f"K3var[{i}{j},{k}]")


def K3_4() -> FunctionalSpec:
    return variant_K3(4)


def L3_4() -> FunctionalSpec:
    return variant_L3(4)


FAMILIES = {"K": standard_K, "K3var": variant_K3, "L3var": variant_L3}


def _check_n(n: int, least: int) -> None:
    if int(n) != n or n < least:
        raise ContractError(f"this family needs an integer n >= {least}, got {n}")


def relabel(spec: FunctionalSpec, index: int) -> FunctionalSpec:
    """Flip the outcome labels of slot ``index``: every term containing it changes sign."""
    check_measurement_set([index], spec.n)
    terms = tuple((-s if index in sub else s, sub) for s, sub in spec.terms)
    return FunctionalSpec(spec.n, terms, spec.name and f"{spec.name}~{index}")


_TERM_RE = re.compile(r"\s*([+-])\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]")
_SHORTCUT_RE = re.compile(r"^\s*(K|K3var|L3var)\s*:\s*(\d+)\s*$")


def parse_spec(text: str, n: int | None = None) -> FunctionalSpec:
    """Parse the canonical text form or a ``family:n`` shortcut.

    ``n`` defaults to the largest index mentioned; it may be larger.
    """
    m = _SHORTCUT_RE.match(text)
    if m:
        spec = FAMILIES[m.group(1)](int(m.group(2)))
        if n is not None and n != spec.n:
            raise ContractError(f"shortcut {text!r} fixes n={spec.n}, got n={n}")
        return spec
    terms, pos, stripped = [], 0, text.rstrip()
    while pos < len(stripped):
        tm = _TERM_RE.match(stripped, pos)
        if tm is None:
            raise ContractError(f"cannot parse functional at {stripped[pos:]!r}")
        sign = 1 if tm.group(1) == "+" else -1
        terms.append((sign, tuple(int(v) for v in tm.group(2).split(","))))
        pos = tm.end()
    if not terms:
        raise ContractError(f"empty functional {text!r}")
    top = max(max(sub) for _, sub in terms)
    if n is not None and n < top:
        raise ContractError(f"n={n} smaller than largest index {top}")
    return FunctionalSpec(n or top, tuple(terms))


def _check_match(spec: FunctionalSpec, sched: Schedule) -> None:
    if spec.n != sched.n:
        raise ContractError(f"functional has n={spec.n} but schedule has n={sched.n}")


def eval_separate(
    spec: FunctionalSpec, rho: np.ndarray, sched: Schedule, method: str = "auto"
) -> float:
    """Quantum value with each correlator taken from a run measuring only its subset.

    ``method`` picks the correlator route: ``"oracle"`` sums over outcome
    strings, ``"nested"`` uses the anticommutator formula, ``"auto"`` uses the
    oracle for subsets of up to ``ORACLE_TERM_LIMIT`` slots.
    """
    _check_match(spec, sched)
    if method not in ("auto", "oracle", "nested"):
        raise ContractError(f"unknown correlator method {method!r}")
    total = 0.0
    for sign, sub in spec.terms:
        use_oracle = method == "oracle" or (method == "auto" and len(sub) <= ORACLE_TERM_LIMIT)
        corr = correlator_oracle if use_oracle else correlator_nested
        total += sign * corr(rho, sched, sub)
    return total


def eval_all_measured(spec: FunctionalSpec, rho: np.ndarray, sched: Schedule) -> float:
    """Quantum value when every run performs all ``n`` measurements."""
    _check_match(spec, sched)
    if spec.n > QUANTUM_ENUMERATION_LIMIT:
        raise ResourceError(f"full joint distribution over n={spec.n} slots is too large")
    dist = joint_distribution(rho, sched, range(1, spec.n + 1))
    total = 0.0
    for sign, sub in spec.terms:
        marg = marginal(dist, [i - 1 for i in sub])
        total += sign * float(np.sum(outcome_signs(len(sub)) * marg))
    return total


def functional_operator(spec: FunctionalSpec, sched: Schedule) -> np.ndarray:
    """Hermitian ``W`` with ``eval_separate(spec, rho, sched) == Tr[rho W]``."""
    _check_match(spec, sched)
    return sum(s * nested_operator(sched, sub) for s, sub in spec.terms)


def macrorealist_bound(spec: FunctionalSpec) -> BoundPair:
    """Exact extrema over all deterministic assignments ``m in {+1, -1}^n``."""
    if spec.n > MAX_ENUMERATION_N:
        raise ResourceError(f"n={spec.n} exceeds the enumeration guard {MAX_ENUMERATION_N}")
    masks = [sum(1 << (i - 1) for i in sub) for _, sub in spec.terms]
    signs = [s for s, _ in spec.terms]
    lo, hi = math.inf, -math.inf
    total = 1 << spec.n
    block = 1 << 20
    for start in range(0, total, block):
        # bit i-1 set <=> m_i = -1, so a term's product is (-1)^popcount
        a = np.arange(start, min(start + block, total), dtype=np.uint32)
        values = np.zeros(a.shape, dtype=np.int64)
        for s, mask in zip(signs, masks):
            parity = np.bitwise_count(a & np.uint32(mask)) & 1
            values += s * (1 - 2 * parity.astype(np.int64))
        lo, hi = min(lo, int(values.min())), max(hi, int(values.max()))
    return BoundPair(float(lo), float(hi), float(spec.algebraic_max))


# ---------------------------------------------------------------------------
# analytic expressions

CLOSED_FORM_FAMILIES = (
    "K3_std",
    "K3_var3",
    "K3_4var",
    "L3_4var",
    "K3_n_even",
    "K3_n_odd",
    "L3_n_even",
    "L3_n_odd",
)

_FIXED_N = {"K3_std": 3, "K3_var3": 3, "K3_4var": 4, "L3_4var": 4}


def _family_n(family: str, n: int | None) -> int:
    if family not in CLOSED_FORM_FAMILIES:
        raise ContractError(f"unknown closed-form family {family!r}")
    if family in _FIXED_N:
        if n is not None and n != _FIXED_N[family]:
            raise ContractError(f"{family} is defined for n={_FIXED_N[family]} only")
        return _FIXED_N[family]
    if n is None or int(n) != n or n < 3:
        raise ContractError(f"{family} needs an integer n >= 3")
    even = family.endswith("even")
    if (n % 2 == 0) != even:
        raise ContractError(f"{family} does not accept n={n}")
    return int(n)


def closed_form(family: str, n: int | None, g: float, theta: float, phi: float) -> float:
    """Literature expression for a family, transcribed term by term.

    These are not guaranteed to match the simulation; see
    :func:`discrepancy_report`.
    """
    n = _family_n(family, n)
    c2, s2t, c2t, sp = math.cos(2 * g), math.sin(2 * theta), math.cos(2 * theta), math.sin(phi)
    cg2 = math.cos(g) ** 2
    last_c, last_s = math.cos(2 * (n - 1) * g), math.sin(2 * (n - 1) * g)
    if family == "K3_std":
        return 2 * c2 - math.cos(4 * g)
    if family == "K3_var3":
        return c2 * (4 * cg2 * c2t) + math.sin(4 * g) * s2t * sp - 2 * cg2 * c2t
    if family == "K3_4var":
        return 0.5 * (
            1 + math.cos(4 * g) + 8 * c2 * math.sin(2 * g) ** 2 * c2t
            - 2 * math.sin(6 * g) * math.sin(theta) * sp
        )
    if family == "L3_4var":
        return 2 * cg2 * c2 * c2t - math.cos(6 * g) + 0.5 * math.sin(4 * g) * s2t * sp
    tail = last_c * c2t + last_s * s2t * sp
    if family == "K3_n_even":
        return c2 ** (n // 2) + c2 ** (n // 2 - 1) - tail
    if family == "K3_n_odd":
        h = (n - 1) // 2
        return c2**h * c2t + c2**h - tail
    if family == "L3_n_even":
        h = n // 2 - 1
        return c2**h * c2t + c2**h * (c2 * c2t + math.sin(2 * g)) - last_c
    h = (n - 1) // 2
    return c2**h + c2**h - last_c


def closed_form_pi_over_2n(family: str, n: int, theta: float, phi: float) -> float:
    """Literature expressions specialised to equal couplings ``g = pi / (2n)``."""
    if family not in ("K3_n_even", "K3_n_odd", "L3_n_even", "L3_n_odd"):
        raise ContractError(f"{family} has no pi/(2n) specialisation")
    n = _family_n(family, n)
    c, s = math.cos(math.pi / n), math.sin(math.pi / n)
    c2t, s2t, sp = math.cos(2 * theta), math.sin(2 * theta), math.sin(phi)
    if family == "K3_n_even":
        return c ** (n // 2) + c ** (n // 2 - 1) * c2t + c * c2t - s * s2t * sp
    if family == "K3_n_odd":
        h = (n - 1) // 2
        return c**h * c2t + c**h + c * c2t - s * s2t * sp
    if family == "L3_n_even":
        h = n // 2 - 1
        return c**h * c2t + c + c**h * (c * c2t + s * s2t * sp)
    return 2 * c ** ((n - 1) // 2) + c


def large_n_limit(theta: float) -> float:
    """Large-``n`` value ``1 + 2 cos(2 theta)`` of the ``K3var`` family at ``g = pi/(2n)``."""
    return 1 + 2 * math.cos(2 * theta)


def derived_form(family: str, n: int, g: float, theta: float, phi: float) -> float:
    """Equal-coupling value of ``K``, ``K3var`` or ``L3var`` from Bloch vectors.

    With ``r`` the Bloch vector of the state and ``M(G) = cos(2G) sigma_z +
    sin(2G) sigma_y``, two-point correlators are ``cos 2(G_j - G_i)`` and a
    nested product of ``k`` observables collapses to paired cosines, times
    ``<M_first>`` when ``k`` is odd.
    """
    if family not in FAMILIES:
        raise ContractError(f"derived forms exist for {sorted(FAMILIES)}, got {family!r}")
    FAMILIES[family](n)
    c = math.cos(2 * g)

    def mean(k: int) -> float:
        # <M_k> for the slot reached after k - 1 intervals
        G = 2 * (k - 1) * g
        return math.cos(G) * math.cos(2 * theta) - math.sin(G) * math.sin(2 * theta) * math.sin(phi)

    def run(first: int, length: int) -> float:
        return c ** (length // 2) * (mean(first) if length % 2 else 1.0)

    if family == "K":
        return (n - 1) * c - math.cos(2 * (n - 1) * g)
    if family == "K3var":
        return run(1, n) + run(1, n - 1) - mean(n)
    return run(1, n - 1) + run(2, n - 1) - math.cos(2 * (n - 1) * g)


_CLOSED_TO_SPEC = {
    "K3_std": lambda n: standard_K(3),
    "K3_var3": lambda n: variant_K3(3),
    "K3_4var": lambda n: variant_K3(4),
    "L3_4var": lambda n: variant_L3(4),
    "K3_n_even": variant_K3,
    "K3_n_odd": variant_K3,
    "L3_n_even": variant_L3,
    "L3_n_odd": variant_L3,
}

DISCREPANCY_TOL = 1e-6


def discrepancy_report(
    points: Iterable[tuple[str, int | None, float, float, float]],
) -> list[dict]:
    """Compare literature closed forms with the simulation at given points.

    Each point is ``(family, n, g, theta, phi)``. Every record carries the
    printed value, the simulated value, their difference, whether it exceeds
    ``DISCREPANCY_TOL``, and the printed value with ``phi`` mirrored to
    ``2 pi - phi`` (the opposite phase convention for the initial state).
    """
    records = []
    for family, n, g, theta, phi in points:
        n = _family_n(family, n)
        spec = _CLOSED_TO_SPEC[family](n)
        rho = density_from_pure(PureState(theta, phi))
        simulated = eval_separate(spec, rho, Schedule.equal(n, g))
        printed = closed_form(family, n, g, theta, phi)
        mirrored = closed_form(family, n, g, theta, 2 * math.pi - phi)
        records.append(
            {
                "family": family,
                "n": n,
                "g": g,
                "theta": theta,
                "phi": phi,
                "printed": printed,
                "simulated": simulated,
                "difference": printed - simulated,
                "discrepant": abs(printed - simulated) > DISCREPANCY_TOL,
                "printed_mirrored_phi": mirrored,
                "mirrored_matches": abs(mirrored - simulated) <= DISCREPANCY_TOL,
            }
        )
    return records
