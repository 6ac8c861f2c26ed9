"""Acceptance criteria 1-11, one test each.

Every test prints a single ``[criterion N] PASS|FAIL ...`` line; the lines
are also collected into the terminal summary.
"""

import io
import json
import math
import time
import warnings
from contextlib import redirect_stdout

import mpmath
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ioncollide.bruteforce import level_shifts_bruteforce_reduced
from ioncollide.cli import main
from ioncollide.coupling import (ASYMPTOTIC_A, design_point_alpha1,
                                 design_point_alpha1_for_length, direct_interaction_renormalized,
                                 exchange_asymptotic, interference_term_reduced,
                                 level_shifts_reduced, restriction_product)
from ioncollide.drive import match_drive_to_separation, position_shift_bound, zeta_for_drive
from ioncollide.gates import central_block_squared_is_swap, decompose_sqrt_swap, synthesize_gate
from ioncollide.potential import v_eff_reduced
from ioncollide.scheduler import TrapArray, route_remote_gate, simulate_schedule, validate_schedule
from ioncollide.units import CONSTANTS, lookup_species

HB = CONSTANTS.hbar
OMEGA_XY = 2 * math.pi * 10e6


def report(n, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    line = f"[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f} s, limit {limit:g} s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def close(value, target, rel):
    return abs(value / target - 1) <= rel


def cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        code = main(["--format", "json", *argv])
    assert code == 0
    return json.loads(buf.getvalue())


def test_criterion_01_design_yb():
    t = time.perf_counter()
    rec = cli_json("design", "--species", "Yb-171", "--omega-xy", "2pi*10MHz", "--omega-perp", "5")
    dt = time.perf_counter() - t
    L, J = rec["L_um"], rec["J_over_hbar_rad_s"]
    report(1, close(L, 103, 0.02) and close(J, 190, 0.05),
           f"Yb-171 L = {L:.2f} um (103 +-2%), J/hbar = {J:.1f} rad/s (190 +-5%)", dt, 1)


def test_criterion_02_design_be():
    t = time.perf_counter()
    rec = cli_json("design", "--species", "Be-9", "--omega-xy", "2pi*10MHz", "--omega-perp", "5")
    dt = time.perf_counter() - t
    L, J = rec["L_um"], rec["J_over_hbar_rad_s"]
    report(2, close(L, 215, 0.02) and close(J, 390, 0.05),
           f"Be-9 L = {L:.2f} um (215 +-2%), J/hbar = {J:.1f} rad/s (390 +-5%)", dt, 1)


def test_criterion_03_restriction_product():
    t = time.perf_counter()
    ok, parts = True, []
    for name, target in (("Yb-171", 940.0), ("Be-9", 1970.0)):
        sp = lookup_species(name)
        L0 = design_point_alpha1(sp, OMEGA_XY, 5.0).L
        values = []
        for scale in (1.0, 2.0, 5.0):
            cfg = design_point_alpha1_for_length(sp, OMEGA_XY, scale * L0)
            values.append(cfg.omega_perp * exchange_asymptotic(cfg) / HB)
        ok &= all(close(v, target, 0.02) for v in values)
        ok &= max(values) / min(values) - 1 < 1e-12
        ok &= close(restriction_product(sp, OMEGA_XY) / HB, target, 0.02)
        parts.append(f"{name} {values[0]:.1f} rad/s at L x(1,2,5) spread "
                     f"{max(values) / min(values) - 1:.1e}")
    dt = time.perf_counter() - t
    report(3, ok, "; ".join(parts), dt, 1)


def test_criterion_04_electron():
    t = time.perf_counter()
    rec = cli_json("design", "--species", "electron", "--omega-xy", "2pi*100GHz", "--L", "10mm")
    dt = time.perf_counter() - t
    J, wp, a = rec["J_over_hbar_rad_s"], rec["omega_perp"], rec["alpha"]
    report(4, close(J, 1.08e5, 0.02) and close(wp, 2.05e4, 0.02) and close(a, 1, 1e-9),
           f"electron J/hbar = {J:.4g} rad/s (1.08e5 +-2%), omega_perp = {wp:.4g} (2.05e4 +-2%)",
           dt, 1)


def test_criterion_05_error_bound():
    t = time.perf_counter()
    cfg = design_point_alpha1(lookup_species("Yb-171"), OMEGA_XY, 5.0)
    U = direct_interaction_renormalized(cfg)
    drive = match_drive_to_separation(cfg, zeta_for_drive(cfg, 0.1))
    prod = position_shift_bound(cfg, drive, U).relative_shift * drive.f
    dt = time.perf_counter() - t
    report(5, close(prod, 1.4e-4, 0.15), f"Delta L/L * f = {prod:.4g} (1.4e-4 +-15%)", dt, 1)


def test_criterion_06_interference_limit():
    t = time.perf_counter()
    parts, ok = [], True
    for w in (5.0, 50.0):
        for ratio in (100.0, 300.0):
            ell = ratio * math.sqrt(w / 2)
            A = interference_term_reduced(ell, w)
            ok &= close(A, ASYMPTOTIC_A, 0.01)
            parts.append(f"w={w:g},r={ratio:g}: {A / ASYMPTOTIC_A - 1:+.1e}")
    dt = time.perf_counter() - t
    report(6, ok, "A/(2/sqrt(pi)) - 1: " + ", ".join(parts), dt, 10)


def test_criterion_07_power_law():
    t = time.perf_counter()
    ells = np.geomspace(50, 500, 7)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        J = [level_shifts_reduced(ell, 5.0).J for ell in ells]
    slope = np.polyfit(np.log(ells), np.log(J), 1)[0]
    dt = time.perf_counter() - t
    report(7, abs(slope + 3) <= 0.05, f"log-log slope {slope:.4f} (-3 +-0.05)", dt, 60)


def test_criterion_08_oracle():
    t = time.perf_counter()
    worst, parts = 0.0, []
    for ell, w in ((5.0, 5.0), (8.0, 5.0), (12.0, 10.0)):
        q = level_shifts_reduced(ell, w)
        bf = level_shifts_bruteforce_reduced(ell, w)
        err = max(abs(q.v_plus / bf.v_plus - 1), abs(q.v_minus / bf.v_minus - 1))
        worst = max(worst, err)
        parts.append(f"({ell:g},{w:g}) {err:.1e}")
    dt = time.perf_counter() - t
    report(8, worst < 1e-6, "V+- relative gap " + ", ".join(parts), dt, 120)


def test_criterion_09_gate_properties():
    t = time.perf_counter()
    rng = np.random.default_rng(2024)
    E0 = rng.uniform(0, 1e-23, 1000)
    U = rng.uniform(0, 1e-28, 1000)
    J = 10 ** rng.uniform(-34, -28, 1000)
    worst_u = worst_d = 0.0
    swap_ok = True
    for e, u, j in zip(E0, U, J):
        g = synthesize_gate(e, u, j)
        worst_u = max(worst_u, g.unitarity_residual())
        worst_d = max(worst_d, decompose_sqrt_swap(g)[2])
        swap_ok &= central_block_squared_is_swap(g.matrix)
    dt = time.perf_counter() - t
    report(9, worst_u < 1e-12 and worst_d < 1e-12 and swap_ok,
           f"1000 gates: unitarity {worst_u:.1e}, decomposition {worst_d:.1e}, "
           f"block^2 = SWAP {swap_ok}", dt, 5)


def test_criterion_10_potential():
    t = time.perf_counter()
    worst = 0.0
    r = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 199)])
    for w in (5.0, 50.0):
        got = v_eff_reduced(r, w)
        with mpmath.workdps(50):
            s = mpmath.sqrt(mpmath.mpf(w) / 2)
            want = np.array([float(mpmath.sqrt(mpmath.pi) * s * mpmath.exp((s * mpmath.mpf(x)) ** 2)
                                   * mpmath.erfc(s * mpmath.mpf(x))) for x in r])
        worst = max(worst, float(np.max(np.abs(got / want - 1))))
    coul = max(abs(v_eff_reduced(1e3 * math.sqrt(2 / w), w) * 1e3 * math.sqrt(2 / w) - 1)
               for w in (5.0, 50.0))
    dt = time.perf_counter() - t
    report(10, worst < 1e-12 and coul < 1e-3,
           f"max rel error vs 50-digit oracle {worst:.1e}, Coulomb gap {coul:.1e}", dt, 5)


def test_criterion_11_scheduler():
    t = time.perf_counter()
    tg, wz = 1e-3, 2 * math.pi * 2e6
    checked, ok = 0, True
    for n in range(2, 13):
        arr = TrapArray.labelled(n)
        for a in arr.occupancy:
            for b in arr.occupancy:
                if a == b:
                    continue
                s = route_remote_gate(arr, a, b, tg, wz)
                final, inter = simulate_schedule(arr, s)
                d = abs(arr.position(a) - arr.position(b))
                ok &= validate_schedule(arr, s) == []
                ok &= final == arr.occupancy and inter == [frozenset((a, b))]
                ok &= math.isclose(s.hold_time(), (4 * (d - 1) + 1) * s.gate_time, rel_tol=1e-12)
                checked += 1
    dt = time.perf_counter() - t
    report(11, ok, f"{checked} ordered pairs on n = 2..12 valid and permutation-restoring", dt, 5)
