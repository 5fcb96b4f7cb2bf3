"""
Deterministic emission of records and tables, and the one-shot reproduction bundle.

Numbers are written at 12 significant digits. JSON output carries them as
decimal strings so that files diff cleanly across platforms; CSV uses a
plain ``.`` decimal separator. Nothing time- or host-dependent is written,
so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .functionals import (
    closed_form,
    derived_form,
    discrepancy_report,
    eval_all_measured,
    eval_separate,
    macrorealist_bound,
    standard_K,
    variant_K3,
    variant_L3,
)
from .nsit import (
    alpha,
    beta,
    decomposition_check_standard,
    disturbance_D1,
    disturbance_D2,
    disturbance_D3,
    disturbance_D12,
    violation_condition_standard,
    violation_condition_variant,
)
from .qubit import PureState, Schedule, density_from_pure
from .search import SearchConfig, asymptotic_table, optimize, sweep

__all__ = [
    "PRECISION",
    "format_number",
    "render_record",
    "render_table",
    "write_output",
    "ManifestRow",
    "reproduce",
]

PRECISION = 12

# values quoted in the literature, with the parameters they are quoted at
QUOTED_K3_MAX = 1.5
QUOTED_K3VAR3 = (1.93, 1.72, 2.04, math.pi / 2)
QUOTED_K3VAR4 = (2.12, 1.24, 1.90, math.pi / 2)
QUOTED_L3VAR4 = (2.03, 0.42, 0.21, math.pi / 2)
QUOTED_POINT_TOL = 0.02

FIG1_THETA, FIG1_PHI = 2.04, math.pi / 2


def format_number(x: float) -> str:
    s = format(float(x), f".{PRECISION}g")
    return "0" if s == "-0" else s


def _encode(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _csv_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating, int, np.integer)):
        return format_number(value) if isinstance(value, (float, np.floating)) else str(int(value))
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return "" if value is None else str(value)


def render_table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([_encode(r) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    header = list(rows[0]) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


def render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_encode(record), indent=2) + "\n"
    return render_table([record], fmt)


def write_output(text: str, out: str | Path | None) -> None:
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


@dataclass
class ManifestRow:
    name: str
    value: float
    expected: str
    status: str
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "expected": self.expected,
            "status": self.status,
            "note": self.note,
        }


def _close(name, value, target, tol, note="", miss="fail") -> ManifestRow:
    ok = abs(value - target) <= tol
    return ManifestRow(name, value, f"{format_number(target)} +- {tol:g}", "pass" if ok else miss, note)


def _at_least(name, value, floor, note="") -> ManifestRow:
    return ManifestRow(name, value, f">= {format_number(floor)}", "pass" if value >= floor else "fail", note)


def _at_most(name, value, ceiling, note="") -> ManifestRow:
    return ManifestRow(name, value, f"<= {ceiling:g}", "pass" if value <= ceiling else "fail", note)


def _point(spec, g, theta, phi) -> float:
    rho = density_from_pure(PureState(theta, phi))
    return eval_separate(spec, rho, Schedule.equal(spec.n, g))


def _random_configs(rng: np.random.Generator, count: int, n: int = 3):
    for _ in range(count):
        theta = rng.uniform(0, math.pi)
        phi = rng.uniform(0, 2 * math.pi)
        gs = rng.uniform(0, math.pi, size=n - 1)
        yield density_from_pure(PureState(theta, phi)), Schedule(tuple(gs))


def _nsit_rows(draws: int = 200, seed: int = 20180) -> list[ManifestRow]:
    rng = np.random.default_rng(seed)
    d3 = sums = a_res = b_res = xx = 0.0
    bad_std = bad_var = 0
    for rho, sched in _random_configs(rng, draws):
        d3 = max(d3, max(abs(v) for v in disturbance_D3(rho, sched).values()))
        for m in (disturbance_D1(rho, sched), disturbance_D2(rho, sched),
                  disturbance_D3(rho, sched), disturbance_D12(rho, sched)):
            sums = max(sums, abs(sum(m.values())))
        a_res = max(a_res, abs(eval_all_measured(standard_K(3), rho, sched) - (1 - 4 * alpha(rho, sched))))
        b_res = max(b_res, abs(eval_all_measured(variant_K3(3), rho, sched) - (1 - 4 * beta(rho, sched))))
        xx = max(xx, decomposition_check_standard(rho, sched))
        c = violation_condition_standard(rho, sched)
        bad_std += c.condition_holds != c.violated
        c = violation_condition_variant(rho, sched)
        bad_var += c.condition_holds != c.violated
    note = f"{draws} random draws"
    return [
        _at_most("nsit_D3_max_abs", d3, 1e-12, note),
        _at_most("nsit_D_map_sum_max_abs", sums, 1e-12, note),
        _at_most("nsit_K3_all_measured_minus_1_4alpha", a_res, 1e-12, note),
        _at_most("nsit_K3var_all_measured_minus_1_4beta", b_res, 1e-12, note),
        _at_most("nsit_decomposition_residual", xx, 1e-10, note),
        _at_most("nsit_standard_biconditional_failures", float(bad_std), 0, note),
        _at_most("nsit_variant_biconditional_failures", float(bad_var), 0, note),
    ]


def _fig1(best_theta: float, best_phi: float) -> list[dict]:
    grid = np.linspace(0.0, math.pi, 721)
    k3 = sweep(standard_K(3), "g", grid, theta=FIG1_THETA, phi=FIG1_PHI)
    var = sweep(variant_K3(3), "g", grid, theta=FIG1_THETA, phi=FIG1_PHI)
    var_best = sweep(variant_K3(3), "g", grid, theta=best_theta, phi=best_phi)
    return [
        {"g": g, "K3": a, "K3var3_quoted_state": b, "K3var3_best_state": c}
        for (g, a), (_, b), (_, c) in zip(k3, var, var_best)
    ]


def _fig2() -> list[dict]:
    odd = list(range(3, 202, 2))
    l_odd = dict(sweep("L3var", "n", odd, theta=0.0, phi=math.pi / 2))
    l_even = dict(sweep("L3var", "n", [n + 1 for n in odd], theta=0.0, phi=math.pi / 2))
    return [
        {"n_odd": n, "L3_odd": l_odd[n], "n_even": n + 1, "L3_even": l_even[n + 1]}
        for n in odd
    ]


def _monotone_from(pairs: Iterable[tuple[int, float]], start: int) -> bool:
    vals = [v for n, v in sorted(pairs) if n >= start]
    return all(b > a for a, b in zip(vals, vals[1:]))


def reproduce(out_dir: str | Path, fmt: str = "csv", cfg: SearchConfig | None = None) -> list[ManifestRow]:
    """Recompute every literature value and write the manifest and data files."""
    cfg = cfg or SearchConfig()
    unequal = SearchConfig(**{**cfg.__dict__, "equal_couplings": False})
    out = Path(out_dir)
    rows: list[ManifestRow] = []

    k3 = optimize(standard_K(3), cfg)
    rows.append(_close("K3_max", k3.best_value, QUOTED_K3_MAX, 1e-6))
    rows.append(_close("K3_max_g", k3.couplings[0], math.pi / 6, 1e-6))

    for n in range(3, 11):
        v = _point(standard_K(n), math.pi / (2 * n), 0.0, 0.0)
        rows.append(_close(f"Kn_max_n{n}", v, n * math.cos(math.pi / n), 1e-9, "n cos(pi/n)"))

    target, g, th, ph = QUOTED_K3VAR3
    rows.append(_close("K3var3_quoted_point", _point(variant_K3(3), g, th, ph), target,
                       QUOTED_POINT_TOL, "g=1.72 theta=2.04 phi=pi/2", miss="discrepancy"))
    v3 = optimize(variant_K3(3), cfg)
    rows.append(_at_least("K3var3_max_equal", v3.best_value, 1.90,
                          f"g={format_number(v3.couplings[0])} theta={format_number(v3.theta)} "
                          f"phi={format_number(v3.phi)}"))
    rows.append(_close("K3var3_max_equal_vs_quoted", v3.best_value, target, QUOTED_POINT_TOL,
                       "optimum compared with the quoted 1.93", miss="discrepancy"))
    v3u = optimize(variant_K3(3), unequal)
    rows.append(_at_least("K3var3_max_unequal", v3u.best_value, 1.99,
                          "couplings=" + ";".join(format_number(x) for x in v3u.couplings)))

    for name, spec, quoted in (("K3var4", variant_K3(4), QUOTED_K3VAR4),
                               ("L3var4", variant_L3(4), QUOTED_L3VAR4)):
        target, g, th, ph = quoted
        rows.append(_close(f"{name}_quoted_point", _point(spec, g, th, ph), target,
                           QUOTED_POINT_TOL, "phi=pi/2", miss="discrepancy"))
        rows.append(_close(f"{name}_quoted_point_mirrored_phi", _point(spec, g, th, 2 * math.pi - ph),
                           target, QUOTED_POINT_TOL, "phi=3pi/2", miss="discrepancy"))
    v4 = optimize(variant_K3(4), cfg)
    l4 = optimize(variant_L3(4), cfg)
    rows.append(_at_least("K3var4_max", v4.best_value, 2.10))
    rows.append(_at_least("L3var4_max", l4.best_value, 2.00))
    chain = v4.best_value > v3.best_value > k3.best_value and l4.best_value > k3.best_value
    rows.append(ManifestRow("ordering_K3var4_K3var3_K3_and_L3var4_K3", float(chain), "1",
                            "pass" if chain else "fail"))

    for spec, lo, hi in ((standard_K(3), -3, 1), (standard_K(4), -2, 2)):
        b = macrorealist_bound(spec)
        ok = (b.macrorealist_min, b.macrorealist_max) == (lo, hi)
        rows.append(ManifestRow(f"bounds_{spec.name}", b.macrorealist_max, f"[{lo}, {hi}]",
                                "pass" if ok else "fail", f"min={format_number(b.macrorealist_min)}"))
    for family in (variant_K3, variant_L3):
        worst = max(abs(macrorealist_bound(family(n)).macrorealist_max - 1) for n in range(3, 11))
        alg = {macrorealist_bound(family(n)).algebraic_max for n in range(3, 11)}
        name = family(3).name.split(":")[0]
        rows.append(_at_most(f"bounds_{name}_max_is_1_n3_to_10", worst, 0))
        rows.append(ManifestRow(f"bounds_{name}_algebraic_max", max(alg), "3",
                                "pass" if alg == {3.0} else "fail"))

    rows.extend(_nsit_rows())

    rng = np.random.default_rng(7)
    state_free = 0.0
    for _ in range(100):
        g, th, ph = rng.uniform(0, math.pi), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        state_free = max(state_free, abs(closed_form("K3_std", 3, g, th, ph) - _point(standard_K(3), g, th, ph)))
        n = int(rng.choice([3, 5, 7, 9]))
        state_free = max(state_free, abs(closed_form("L3_n_odd", n, g, th, ph) - _point(variant_L3(n), g, th, ph)))
    rows.append(_at_most("closed_forms_state_independent_max_abs_diff", state_free, 1e-9, "K3_std and L3_n_odd"))

    disc_points = [
        ("K3_var3", None, 1.72, 2.04, math.pi / 2),
        ("K3_4var", None, 1.24, 1.90, math.pi / 2),
        ("L3_4var", None, 0.42, 0.21, math.pi / 2),
        ("K3_n_even", 6, 0.3, 0.4, 1.0),
        ("K3_n_odd", 5, 0.3, 0.4, 1.0),
        ("L3_n_even", 6, 0.3, 0.4, 1.0),
        ("L3_n_odd", 7, 0.3, 0.4, 1.0),
    ]
    disc = discrepancy_report(disc_points)
    for rec in disc:
        rec["derived"] = derived_form(
            "K3var" if rec["family"].startswith("K3") else "L3var",
            rec["n"], rec["g"], rec["theta"], rec["phi"],
        )
        rows.append(ManifestRow(
            f"closed_form_{rec['family']}", rec["printed"], format_number(rec["simulated"]),
            "discrepancy" if rec["discrepant"] else "pass",
            "mirrored phi matches" if rec["mirrored_matches"] else "",
        ))

    k3_asym = asymptotic_table("K3var", list(range(3, 201)))
    k200 = next(r["simulated"] for r in k3_asym if r["n"] == 200)
    rows.append(_at_least("K3var_n200_theta0", k200, 2.97))
    l101 = _point(variant_L3(101), math.pi / 202, 0.0, math.pi / 2)
    direct = 2 * math.cos(math.pi / 101) ** 50 + math.cos(math.pi / 101)
    rows.append(_close("L3var_n101_theta0", l101, direct, 1e-9, "2 cos(pi/101)^50 + cos(pi/101)"))

    fig1 = _fig1(v3.theta, v3.phi)
    rows.append(_close("fig1_K3_max", max(r["K3"] for r in fig1), QUOTED_K3_MAX, 1e-6))
    rows.append(_close("fig1_K3var3_max_quoted_state", max(r["K3var3_quoted_state"] for r in fig1),
                       QUOTED_K3VAR3[0], QUOTED_POINT_TOL, "theta=2.04 phi=pi/2", miss="discrepancy"))
    rows.append(_at_least("fig1_K3var3_max_best_state", max(r["K3var3_best_state"] for r in fig1), 1.90))

    fig2 = _fig2()
    rows.append(_at_most("fig2_max_value", max(max(r["L3_odd"], r["L3_even"]) for r in fig2), 3.0))
    mono = (
        _monotone_from([(r["n_odd"], r["L3_odd"]) for r in fig2], 7)
        and _monotone_from([(r["n_even"], r["L3_even"]) for r in fig2], 7)
        and _monotone_from([(r["n"], r["simulated"]) for r in k3_asym], 7)
    )
    rows.append(ManifestRow("fig2_monotone_from_n7", float(mono), "1", "pass" if mono else "fail",
                            "L3 odd, L3 even and K3var at theta=0"))

    ext = "json" if fmt == "json" else "csv"
    write_output(render_table(fig1, fmt), out / f"fig1_data.{ext}")
    write_output(render_table(fig2, fmt), out / f"fig2_data.{ext}")
    write_output(render_table(k3_asym, fmt), out / f"asymptotic_K3var.{ext}")
    write_output(render_table(disc, fmt), out / f"closed_form_discrepancies.{ext}")
    write_output(render_table([r.as_dict() for r in rows], fmt), out / f"manifest.{ext}")
    return rows
