"""Command-line front end: ``ioncollide <command> [options]``.

Exit status is 0 on success, 1 when the inputs fall outside the regime a
calculation supports (or a schedule fails validation), and 2 for usage
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from . import coupling as cp
from .drive import match_drive_to_separation, position_shift_bound, zeta_for_drive
from .errors import (ConvergenceError, DegenerateOverlapError, RegimeError,
                     ScheduleError, StructureError, ZeroCouplingError)
from .gates import collision_count, decompose_sqrt_swap, gate_to_json, synthesize_gate
from .geometry import TrapConfig
from .potential import alpha, alpha_regime
from .scheduler import (TrapArray, route_remote_gate, schedule_from_text,
                        schedule_to_text, validate_schedule)
from .sweep import COLUMNS, gnuplot_script, sweep_lengths, write_sweep_csv
from .units import (CONSTANTS, UnknownSpeciesError, load_config, lookup_species,
                    registered_species)

OUTPUT_DIR_ENV = "IONCOLLIDE_OUTPUT_DIR"

_FREQ_SCALE = {"": 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12,
               "rad/s": 1.0}
_LEN_SCALE = {"": 1.0, "m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6,
              "nm": 1e-9}
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


class UsageError(ValueError):
    pass


def parse_frequency(text) -> float:
    """Angular frequency in rad/s.

    ``2pi*10MHz`` is an ordinary frequency of 10 MHz, i.e. 2 pi x 1e7 rad/s.
    Without the ``2pi*`` prefix the number is already angular and the unit
    only scales it: ``10MHz`` is 1e7 rad/s, ``6.28e7`` is 6.28e7 rad/s.
    """
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().replace(" ", "")
    factor = 1.0
    m = re.match(r"^(2pi|2\*pi|2π)\*?(.*)$", s, re.IGNORECASE)
    if m:
        factor = 2.0 * math.pi
        s = m.group(2)
    m = re.fullmatch(rf"({_NUM})([a-zA-Z/]*)", s)
    if not m or m.group(2).lower() not in _FREQ_SCALE:
        raise UsageError(f"cannot parse frequency {text!r}; use e.g. 2pi*10MHz, 10MHz or 6.28e7")
    return factor * float(m.group(1)) * _FREQ_SCALE[m.group(2).lower()]


def parse_length(text) -> float:
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().replace(" ", "")
    m = re.fullmatch(rf"({_NUM})([a-zA-Zµ]*)", s)
    if not m or m.group(2) not in _LEN_SCALE:
        raise UsageError(f"cannot parse length {text!r}; use e.g. 103um, 10mm or 1e-4")
    return float(m.group(1)) * _LEN_SCALE[m.group(2)]


def parse_range(text) -> np.ndarray:
    """``min:max:points[:log|linear]`` into an array of lengths (m)."""
    parts = str(text).split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"range {text!r} must look like min:max:points[:log|linear]")
    lo, hi = parse_length(parts[0]), parse_length(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError(f"range point count {parts[2]!r} is not an integer") from None
    scale = parts[3] if len(parts) == 4 else "linear"
    if n < 2:
        raise UsageError("a sweep needs at least 2 points")
    if not lo < hi:
        raise UsageError("sweep minimum must be below maximum")
    if scale == "log":
        if lo <= 0:
            raise UsageError("log sweep needs a positive minimum")
        return np.geomspace(lo, hi, n)
    if scale == "linear":
        return np.linspace(lo, hi, n)
    raise UsageError(f"sweep scale must be log or linear, got {scale!r}")


# --- argument handling --------------------------------------------------------------

def _trap_options(p, need_length=True):
    p.add_argument("--species", help="species name (default Yb-171)")
    p.add_argument("--omega-xy", help="transverse trap frequency, e.g. 2pi*10MHz")
    p.add_argument("--omega-z", help="axial trap frequency")
    p.add_argument("--omega-perp", type=float, help="omega_xy / omega_z")
    if need_length:
        p.add_argument("--L", dest="L", help="trapping distance, e.g. 103um")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ioncollide",
        description="Collision-induced spin-spin coupling between trapped ions.")
    parser.add_argument("--config", help="key = value or JSON config file; flags override it")
    parser.add_argument("--format", choices=("table", "csv", "json"), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("species", help="show registered species")
    p.add_argument("name", nargs="?")

    p = sub.add_parser("coupling", help="J, U, alpha and A for one trap")
    _trap_options(p)
    p.add_argument("--method", choices=cp.METHODS)
    p.add_argument("--rel-tol", type=float)

    p = sub.add_parser("design", help="alpha = 1 operating point")
    _trap_options(p)
    p.add_argument("--zeta", type=float, help="quartic nonlinearity (J/m^4) for the drive report")
    p.add_argument("--drive-f", type=float, help="drive amplitude for the drift report")

    p = sub.add_parser("sweep", help="coupling over a range of trapping distances")
    _trap_options(p, need_length=False)
    p.add_argument("--L", dest="L_range", required=False,
                   help="min:max:points[:log|linear], e.g. 50um:500um:25:log")
    p.add_argument("--method", choices=cp.METHODS)
    p.add_argument("--output", help="CSV path (a .gp plot script is written next to it)")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("gate", help="gate time, phases, collision count and matrix")
    _trap_options(p)
    p.add_argument("--method", choices=cp.METHODS)
    p.add_argument("--E0", help="qubit splitting as a frequency (default: species value)")

    p = sub.add_parser("schedule", help="merge/split schedule for a remote gate")
    _trap_options(p)
    p.add_argument("--n-traps", type=int)
    p.add_argument("--qubit-a")
    p.add_argument("--qubit-b")
    p.add_argument("--gate-time", type=float, help="t_g in seconds (default: from the trap)")
    p.add_argument("--output")

    p = sub.add_parser("validate", help="check a schedule file")
    p.add_argument("schedule_file")
    p.add_argument("--n-traps", type=int)
    return parser


_CONFIG_TYPES = {"omega_perp": float, "rel_tol": float, "zeta": float, "drive_f": float,
                 "gate_time": float, "n_traps": int, "workers": int}
_DEFAULTS = {"species": "Yb-171", "method": "asymptotic", "format": "table"}


def _merge_config(args, config: dict):
    """Fill unset options from the config file, then from defaults."""
    for key, value in config.items():
        if key.startswith("species."):
            continue
        dest = key.replace("-", "_")
        if dest == "l":
            dest = "L"
        if hasattr(args, dest) and getattr(args, dest) is None:
            conv = _CONFIG_TYPES.get(dest)
            try:
                setattr(args, dest, conv(value) if conv else value)
            except ValueError:
                raise UsageError(f"config value {key} = {value!r} is not valid") from None
    for key, value in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    if args.format not in ("table", "csv", "json"):
        raise UsageError(f"format must be table, csv or json, got {args.format!r}")
    if getattr(args, "method", None) not in (None, *cp.METHODS):
        raise UsageError(f"method must be one of {cp.METHODS}, got {args.method!r}")


def _output_path(name) -> Path:
    path = Path(name)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _species(args):
    try:
        return lookup_species(args.species)
    except UnknownSpeciesError as exc:
        raise UsageError(str(exc)) from None


def _omega_xy(args):
    if args.omega_xy is None:
        raise UsageError("--omega-xy is required")
    return parse_frequency(args.omega_xy)


def _trap_from_args(args, length=None) -> TrapConfig:
    """Trap from flags; without --L (or --omega-z) the alpha = 1 point is used."""
    sp = _species(args)
    wxy = _omega_xy(args)
    L = length if length is not None else (
        parse_length(args.L) if getattr(args, "L", None) is not None else None)
    if args.omega_z is not None:
        wz = parse_frequency(args.omega_z)
        if L is None:
            raise UsageError("--L is required with --omega-z")
        return TrapConfig(sp, wz, wxy, L)
    if args.omega_perp is not None:
        if L is None:
            return cp.design_point_alpha1(sp, wxy, args.omega_perp)
        return TrapConfig.from_omega_perp(sp, wxy, args.omega_perp, L)
    if L is not None:
        return cp.design_point_alpha1_for_length(sp, wxy, L)
    raise UsageError("give --omega-perp or --omega-z (and/or --L)")


# --- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(records: list[dict], fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(records[0] if len(records) == 1 else records, indent=2,
                             default=_json_default) + "\n")
    elif fmt == "csv":
        keys = list(records[0])
        out.write(",".join(keys) + "\n")
        for r in records:
            out.write(",".join(repr(r[k]) if isinstance(r[k], float) else str(r[k])
                               for k in keys) + "\n")
    else:
        for i, r in enumerate(records):
            if i:
                out.write("\n")
            width = max(len(k) for k in r)
            for k, v in r.items():
                out.write(f"{k.ljust(width)}  {_fmt(v)}\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


def _trap_record(cfg: TrapConfig) -> dict:
    return {
        "species": cfg.species.name,
        "omega_xy_rad_s": cfg.omega_xy,
        "omega_z_rad_s": cfg.omega_z,
        "omega_perp": cfg.omega_perp,
        "L_m": cfg.L,
        "L_um": cfg.L * 1e6,
        "z0_m": cfg.z0,
        "alpha": alpha(cfg),
        "regime": alpha_regime(alpha(cfg)),
    }


def _coupling_record(res) -> dict:
    hb = CONSTANTS.hbar
    return {
        "J_over_hbar_rad_s": res.exchange_J / hb,
        "J_over_hbar_Hz": res.exchange_J / hb / (2 * math.pi),
        "U_over_hbar_rad_s": res.direct_U / hb,
        "U_over_hbar_Hz": res.direct_U / hb / (2 * math.pi),
        "A": res.interference_A,
        "method": res.method,
    }


# --- commands --------------------------------------------------------------------

def cmd_species(args):
    names = [args.name] if args.name else registered_species()
    recs = []
    for n in names:
        try:
            sp = lookup_species(n)
        except UnknownSpeciesError as exc:
            raise UsageError(str(exc)) from None
        e0 = sp.hyperfine_splitting_E0
        recs.append({
            "name": sp.name, "mass_kg": sp.mass, "mass_u": sp.mass / CONSTANTS.atomic_mass_unit,
            "charge_C": sp.charge,
            "E0_over_hbar_rad_s": e0 / CONSTANTS.hbar if e0 else "none",
            "E0_Hz": e0 / CONSTANTS.hbar / (2 * math.pi) if e0 else "none",
        })
    _emit(recs, args.format)


def _settings(args):
    if getattr(args, "rel_tol", None):
        return cp.QuadratureSettings(rel_tol=float(args.rel_tol))
    return None


def cmd_coupling(args):
    cfg = _trap_from_args(args)
    res = cp.compute_coupling(cfg, args.method, _settings(args))
    if res.method != args.method:
        print(f"notice: method switched from {args.method} to {res.method}", file=sys.stderr)
    it = cp.interaction_time_estimate(cfg)
    rec = _trap_record(cfg) | _coupling_record(res) | {
        "delta_tau_s": it.delta_tau,
        "validity_ratio": it.validity_ratio,
        "perturbative": it.perturbative,
    }
    _emit([rec], args.format)


def cmd_design(args):
    sp = _species(args)
    wxy = _omega_xy(args)
    if args.omega_perp is not None:
        cfg = cp.design_point_alpha1(sp, wxy, args.omega_perp)
    elif args.L is not None:
        cfg = cp.design_point_alpha1_for_length(sp, wxy, parse_length(args.L))
    else:
        raise UsageError("design needs --omega-perp or --L")
    res = cp.coupling_asymptotic(cfg)
    rec = _trap_record(cfg) | _coupling_record(res)
    rec["J_jld2_over_hbar_rad_s"] = cp.coupling_jld2(cfg) / CONSTANTS.hbar
    rec["omega_perp_J_over_hbar_rad_s"] = cp.restriction_product(sp, wxy) / CONSTANTS.hbar
    rec["gate_time_s"] = synthesize_gate(0.0, 0.0, res.exchange_J).t_g
    rec["n_collisions"] = collision_count(res.exchange_J, cfg.omega_z).value
    U = res.direct_U
    rec["drift_times_f"] = 4 * U / (sp.mass * cfg.omega_z ** 2 * cfg.L ** 2)
    if args.zeta is not None or args.drive_f is not None:
        zeta = args.zeta if args.zeta is not None else zeta_for_drive(cfg, args.drive_f)
        drive = match_drive_to_separation(cfg, zeta)
        shift = position_shift_bound(cfg, drive, U)
        rec |= {"zeta": zeta, "drive_f": drive.f, "drive_omega_f": drive.omega_f,
                "delta_L_over_L": shift.relative_shift,
                "min_f_for_1pct": shift.min_drive}
    _emit([rec], args.format)


def cmd_sweep(args):
    if args.L_range is None:
        raise UsageError("sweep needs --L min:max:points[:log|linear]")
    lengths = parse_range(args.L_range)
    sp = _species(args)
    wxy = _omega_xy(args)
    if args.omega_z is not None:
        wz = parse_frequency(args.omega_z)
    elif args.omega_perp is not None:
        wz = wxy / args.omega_perp
    else:
        raise UsageError("sweep needs --omega-z or --omega-perp")
    rows = sweep_lengths(sp, wxy, wz, lengths, args.method, workers=args.workers)
    out = _output_path(args.output or "sweep.csv")
    write_sweep_csv(rows, out)
    script = out.with_suffix(".gp")
    script.write_text(gnuplot_script(out, out.with_suffix(".png").name))
    print(f"wrote {out} ({len(rows)} rows) and {script}", file=sys.stderr)
    recs = [{c: getattr(r, c) for c in COLUMNS} for r in rows]
    if args.format == "table":
        print("  ".join(f"{c:>14}" for c in COLUMNS))
        for r in recs:
            print("  ".join(f"{_fmt(r[c]):>14}" if not isinstance(r[c], float)
                            else f"{r[c]:>14.6g}" for c in COLUMNS))
    else:
        _emit(recs, args.format)


def cmd_gate(args):
    cfg = _trap_from_args(args)
    res = cp.compute_coupling(cfg, args.method)
    if res.exchange_J <= 0:
        raise ZeroCouplingError(f"{res.method} coupling gives J = 0; no gate")
    if args.E0 is not None:
        E0 = CONSTANTS.hbar * parse_frequency(args.E0)
    else:
        E0 = cfg.species.hyperfine_splitting_E0 or 0.0
    U = res.direct_U if math.isfinite(res.direct_U) else 0.0
    gate = synthesize_gate(E0, U, res.exchange_J, cfg.omega_z)
    g, theta, resid = decompose_sqrt_swap(gate)
    count = collision_count(res.exchange_J, cfg.omega_z)
    if args.format == "json":
        payload = json.loads(gate_to_json(gate))
        payload |= {"decomposition_residual": resid, "collision_nearest": count.nearest,
                    "collision_mistuning": count.mistuning}
        print(json.dumps(payload, indent=2))
        return
    rec = {
        "t_g_s": gate.t_g,
        "theta_rad": gate.theta,
        "theta_printed_rad": gate.theta_printed,
        "global_phase_rad": g,
        "n_collisions": count.value,
        "n_collisions_nearest": count.nearest,
        "mistuning": count.mistuning,
        "decomposition_residual": resid,
        "unitarity_residual": gate.unitarity_residual(),
    }
    _emit([rec], args.format)
    if args.format == "table":
        print("matrix (basis dd, du, ud, uu):")
        for row in gate.matrix:
            print("  " + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row))


def cmd_schedule(args):
    if args.n_traps is None:
        raise UsageError("schedule needs --n-traps")
    if args.gate_time is not None:
        if args.omega_z is None:
            raise UsageError("--gate-time needs --omega-z")
        tg = args.gate_time
        wz = parse_frequency(args.omega_z)
        L = parse_length(args.L) if args.L else 0.0
    else:
        cfg = _trap_from_args(args)
        res = cp.compute_coupling(cfg, args.method if hasattr(args, "method") else "asymptotic")
        tg = synthesize_gate(0.0, 0.0, res.exchange_J).t_g
        wz, L = cfg.omega_z, cfg.L
    array = TrapArray.labelled(args.n_traps, L)
    a = args.qubit_a or array.occupancy[0]
    b = args.qubit_b or array.occupancy[-1]
    sched = route_remote_gate(array, a, b, tg, wz)
    text = schedule_to_text(sched, array)
    if args.output:
        path = _output_path(args.output)
        path.write_text(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    try:
        text = Path(args.schedule_file).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    sched, array = schedule_from_text(text)
    if array is None:
        if args.n_traps is None:
            raise UsageError("schedule file has no array header; pass --n-traps")
        array = TrapArray.labelled(args.n_traps)
    violations = validate_schedule(array, sched)
    if not violations:
        print("valid")
        return 0
    for v in violations:
        where = f" (event {v.event_index})" if v.event_index is not None else ""
        print(f"{v.kind}: {v.message}{where}")
    return 1


COMMANDS = {
    "species": cmd_species, "coupling": cmd_coupling, "design": cmd_design,
    "sweep": cmd_sweep, "gate": cmd_gate, "schedule": cmd_schedule,
    "validate": cmd_validate,
}

_REGIME_ERRORS = (RegimeError, DegenerateOverlapError, ZeroCouplingError,
                  ConvergenceError, StructureError, ScheduleError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    try:
        _merge_config(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not hasattr(args, "method"):
        args.method = "asymptotic"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            status = COMMANDS[args.command](args) or 0
        except UsageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 2
        except _REGIME_ERRORS as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 1
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 2
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
