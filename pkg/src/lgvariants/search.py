"""
Deterministic search for maximal quantum values of a functional.

The parameters are the coupling angle(s) and the pure initial state
``(theta, phi)``. Every parameter is periodic: a coupling by ``pi`` (the
evolution only changes sign), ``theta`` by ``pi`` (global phase) and ``phi``
by ``2 pi``. With equal couplings the map ``g -> pi - g, phi -> 2 pi - phi``
is a symmetry, so the scan covers ``g in [0, pi/2]`` and results are folded
back into that range.

The search is a dense grid scan followed by coordinate-wise golden-section
refinement from the best grid cells. The reported value is re-evaluated
through the projector-chain simulation, so it is always attained by the
reported parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .errors import ConsistencyError, ContractError
from .functionals import (
    FAMILIES,
    FunctionalSpec,
    closed_form_pi_over_2n,
    eval_separate,
    large_n_limit,
    macrorealist_bound,
)
from .qubit import PureState, Schedule, density_from_pure
from .sequential import nested_operator_batch

__all__ = [
    "SearchConfig",
    "ViolationReport",
    "golden_section_max",
    "optimize",
    "sweep",
    "asymptotic_table",
]

INV_PHI = (math.sqrt(5) - 1) / 2
UNEQUAL_GRID_MAX_N = 6
_CHUNK = 4096


@dataclass(frozen=True)
class SearchConfig:
    g_grid: int = 24
    theta_grid: int = 24
    phi_grid: int = 24
    refine_iterations: int = 80
    tolerance: float = 1e-13
    equal_couplings: bool = True
    top_k: int = 10

    def __post_init__(self):
        if min(self.g_grid, self.theta_grid, self.phi_grid) < 8:
            raise ContractError("grid densities must be at least 8 per axis")
        if not self.tolerance > 0:
            raise ContractError("tolerance must be positive")
        if self.top_k < 1 or self.refine_iterations < 0:
            raise ContractError("top_k must be >= 1 and refine_iterations >= 0")


@dataclass(frozen=True)
class ViolationReport:
    spec: str
    best_value: float
    couplings: tuple[float, ...]
    theta: float
    phi: float
    macrorealist_max: float
    algebraic_max: float
    equal_couplings: bool
    evaluations: int

    @property
    def margin(self) -> float:
        return self.best_value - self.macrorealist_max

    def as_record(self) -> dict:
        return {
            "spec": self.spec,
            "best_value": self.best_value,
            "couplings": list(self.couplings),
            "theta": self.theta,
            "phi": self.phi,
            "macrorealist_max": self.macrorealist_max,
            "algebraic_max": self.algebraic_max,
            "margin": self.margin,
            "equal_couplings": self.equal_couplings,
            "evaluations": self.evaluations,
        }


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, xtol: float = 1e-10, max_iter: int = 200
) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


class _Objective:
    """Vectorised functional value over parameter rows ``[g..., theta, phi]``."""

    def __init__(self, spec: FunctionalSpec, equal: bool):
        self.spec = spec
        self.equal = equal
        self.n_couplings = 1 if equal else spec.n - 1
        self.calls = 0

    def cumulative(self, gs: np.ndarray) -> np.ndarray:
        gs = np.atleast_2d(gs)
        if self.equal:
            return gs[:, :1] * np.arange(self.spec.n)
        return np.concatenate([np.zeros((gs.shape[0], 1)), np.cumsum(gs, axis=1)], axis=1)

    def operators(self, gs: np.ndarray) -> np.ndarray:
        cum = self.cumulative(gs)
        return sum(s * nested_operator_batch(cum, sub) for s, sub in self.spec.terms)

    @staticmethod
    def densities(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        ket = np.stack([np.cos(theta) + 0j, np.exp(-1j * phi) * np.sin(theta)], axis=-1)
        return ket[:, :, None] * ket.conj()[:, None, :]

    def __call__(self, x: np.ndarray) -> float:
        self.calls += 1
        x = np.asarray(x, dtype=float)
        w = self.operators(x[None, : self.n_couplings])[0]
        rho = self.densities(x[None, -2], x[None, -1])[0]
        return float(np.einsum("ij,ji->", rho, w).real)


def _grid(cfg: SearchConfig, obj: _Objective):
    if obj.equal:
        g_axis = np.linspace(0.0, math.pi / 2, cfg.g_grid)
        g_step = g_axis[1] - g_axis[0]
    else:
        g_axis = np.linspace(0.0, math.pi, cfg.g_grid, endpoint=False)
        g_step = math.pi / cfg.g_grid
    thetas = np.linspace(0.0, math.pi, cfg.theta_grid, endpoint=False)
    phis = np.linspace(0.0, 2 * math.pi, cfg.phi_grid, endpoint=False)
    steps = np.array(
        [g_step] * obj.n_couplings + [math.pi / cfg.theta_grid, 2 * math.pi / cfg.phi_grid]
    )
    return g_axis, thetas, phis, steps


def _scan(obj: _Objective, couplings: np.ndarray, states: np.ndarray, k: int):
    """Top-``k`` rows of the full product of coupling rows and state rows."""
    rho = obj.densities(states[:, 0], states[:, 1])
    best_v = np.empty(0)
    best_x = np.empty((0, couplings.shape[1] + 2))
    for start in range(0, len(couplings), _CHUNK):
        gs = couplings[start : start + _CHUNK]
        w = obj.operators(gs)
        values = np.einsum("cij,sji->cs", w, rho).real
        obj.calls += values.size
        flat = values.ravel()
        take = np.argsort(-flat, kind="stable")[:k]
        ci, si = np.divmod(take, len(states))
        cand_x = np.concatenate([gs[ci], states[si]], axis=1)
        best_v = np.concatenate([best_v, flat[take]])
        best_x = np.concatenate([best_x, cand_x])
        keep = np.argsort(-best_v, kind="stable")[:k]
        best_v, best_x = best_v[keep], best_x[keep]
    return best_x


def _refine(obj: _Objective, x0: np.ndarray, steps: np.ndarray, cfg: SearchConfig):
    x = x0.copy()
    fx = obj(x)
    h = steps.copy()
    for _ in range(cfg.refine_iterations):
        start = fx
        for j in range(len(x)):
            def line(t, j=j):
                y = x.copy()
                y[j] = t
                return obj(y)

            t, ft = golden_section_max(line, x[j] - h[j], x[j] + h[j], xtol=max(h[j] * 1e-3, 1e-12))
            if ft > fx:
                x[j], fx = t, ft
        if fx - start <= cfg.tolerance:
            h = h / 2
            if h.max() < 1e-10:
                break
    return x, fx


def _canonical(x: np.ndarray, equal: bool, n_couplings: int) -> tuple[tuple[float, ...], float, float]:
    gs = np.mod(x[:n_couplings], math.pi)
    gs[math.pi - gs < 1e-9] = 0.0
    theta = float(np.mod(x[-2], math.pi))
    phi = float(np.mod(x[-1], 2 * math.pi))
    if equal and gs[0] > math.pi / 2:
        gs = math.pi - gs
        phi = float(np.mod(2 * math.pi - phi, 2 * math.pi))
    return tuple(float(g) for g in gs), theta, phi


def _state_rows(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    return np.array(list(product(thetas, phis)))


def optimize(spec: FunctionalSpec, cfg: SearchConfig = SearchConfig()) -> ViolationReport:
    """Locate the largest quantum value of ``spec`` over couplings and pure states."""
    bounds = macrorealist_bound(spec)
    obj = _Objective(spec, cfg.equal_couplings)
    g_axis, thetas, phis, steps = _grid(cfg, obj)
    states = _state_rows(thetas, phis)

    if obj.equal:
        seeds = _scan(obj, g_axis[:, None], states, cfg.top_k)
    elif spec.n <= UNEQUAL_GRID_MAX_N:
        couplings = np.array(list(product(g_axis, repeat=obj.n_couplings)))
        seeds = _scan(obj, couplings, states, cfg.top_k)
    else:
        # too many coupling axes for a grid: start from the equal-coupling optimum
        eq = _Objective(spec, True)
        eq_axis = np.linspace(0.0, math.pi / 2, cfg.g_grid)
        eq_seeds = _scan(eq, eq_axis[:, None], states, cfg.top_k)
        obj.calls += eq.calls
        seeds = np.concatenate(
            [np.repeat(eq_seeds[:, :1], obj.n_couplings, axis=1), eq_seeds[:, 1:]], axis=1
        )

    best_x, best_f = None, -math.inf
    for seed in seeds:
        x, fx = _refine(obj, seed, steps, cfg)
        if fx > best_f:
            best_x, best_f = x, fx

    couplings, theta, phi = _canonical(best_x, obj.equal, obj.n_couplings)
    sched = Schedule.equal(spec.n, couplings[0]) if obj.equal else Schedule(couplings)
    value = eval_separate(spec, density_from_pure(PureState(theta, phi)), sched)
    if abs(value - best_f) > 1e-9:
        raise ConsistencyError(f"search objective {best_f} disagrees with simulation {value}")
    if value > bounds.algebraic_max + 1e-9:
        raise ConsistencyError(f"value {value} exceeds the algebraic maximum {bounds.algebraic_max}")
    return ViolationReport(
        spec=spec.text,
        best_value=value,
        couplings=sched.couplings,
        theta=theta,
        phi=phi,
        macrorealist_max=bounds.macrorealist_max,
        algebraic_max=bounds.algebraic_max,
        equal_couplings=obj.equal,
        evaluations=obj.calls,
    )


SWEEP_AXES = ("g", "theta", "phi", "n")


def _resolve_family(spec) -> Callable[[int], FunctionalSpec]:
    if callable(spec):
        return spec
    if isinstance(spec, str) and spec in FAMILIES:
        return FAMILIES[spec]
    raise ContractError(f"an n sweep needs a family name from {sorted(FAMILIES)} or a callable")


def sweep(
    spec,
    axis: str,
    values: Sequence[float],
    *,
    g: float | Sequence[float] = 0.0,
    theta: float = 0.0,
    phi: float = 0.0,
) -> list[tuple[float, float]]:
    """Tabulate ``eval_separate`` along one axis, holding the others fixed.

    For ``axis="n"``, ``spec`` is a family (name or ``n -> FunctionalSpec``)
    and the couplings are ``pi / (2n)``.
    """
    if axis not in SWEEP_AXES:
        raise ContractError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    rows = []
    if axis == "n":
        family = _resolve_family(spec)
        rho = density_from_pure(PureState(theta, phi))
        for n in values:
            n = int(n)
            value = eval_separate(family(n), rho, Schedule.equal(n, math.pi / (2 * n)))
            rows.append((n, value))
        return rows
    if not isinstance(spec, FunctionalSpec):
        raise ContractError("sweeps over g, theta or phi need a FunctionalSpec")
    gs = [g] if np.isscalar(g) else list(g)
    for x in values:
        x = float(x)
        if axis == "g":
            sched, state = Schedule.equal(spec.n, x), PureState(theta, phi)
        else:
            sched = Schedule.from_list(spec.n, gs)
            state = PureState(x, phi) if axis == "theta" else PureState(theta, x)
        rows.append((x, eval_separate(spec, density_from_pure(state), sched)))
    return rows


def asymptotic_table(
    family: str, n_list: Sequence[int], theta: float = 0.0, phi: float = math.pi / 2
) -> list[dict]:
    """Closed-form versus simulated values at ``g = pi/(2n)``, one row per ``n``."""
    if family not in ("K3var", "L3var"):
        raise ContractError(f"asymptotic tables exist for K3var and L3var, got {family!r}")
    rows = []
    simulated = dict(sweep(family, "n", n_list, theta=theta, phi=phi))
    for n in n_list:
        n = int(n)
        name = f"{family[:2]}_n_{'even' if n % 2 == 0 else 'odd'}"
        closed = closed_form_pi_over_2n(name, n, theta, phi)
        row = {
            "n": n,
            "closed_form": closed,
            "simulated": simulated[n],
            "difference": closed - simulated[n],
        }
        if family == "K3var":
            row["large_n_limit"] = large_n_limit(theta)
        rows.append(row)
    return rows
