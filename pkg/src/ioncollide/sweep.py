"""Parameter sweeps over the trapping distance and their CSV export."""

from __future__ import annotations

import csv
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .coupling import QuadratureSettings, compute_coupling
from .geometry import TrapConfig
from .units import CONSTANTS, IonSpecies

COLUMNS = ("species", "omega_xy", "omega_z", "omega_perp", "L", "alpha",
           "J_over_hbar", "U_over_hbar", "A", "method")


@dataclass(frozen=True)
class SweepRow:
    species: str
    omega_xy: float
    omega_z: float
    omega_perp: float
    L: float
    alpha: float
    J_over_hbar: float
    U_over_hbar: float
    A: float
    method: str


assert tuple(f.name for f in fields(SweepRow)) == COLUMNS


def coupling_row(species: IonSpecies, omega_xy: float, omega_z: float, L: float,
                 method: str = "asymptotic",
                 settings: QuadratureSettings | None = None) -> SweepRow:
    with warnings.catch_warnings():
        # each row records alpha and the method actually used
        warnings.simplefilter("ignore")
        cfg = TrapConfig(species, omega_z, omega_xy, L)
        res = compute_coupling(cfg, method, settings)
    hb = CONSTANTS.hbar
    return SweepRow(species.name, omega_xy, omega_z, cfg.omega_perp, L, res.alpha,
                    res.exchange_J / hb, res.direct_U / hb, res.interference_A, res.method)


def _row_job(args):
    return coupling_row(*args)


def sweep_lengths(species: IonSpecies, omega_xy: float, omega_z: float, lengths,
                  method: str = "asymptotic", settings: QuadratureSettings | None = None,
                  workers: int | None = None) -> list[SweepRow]:
    """Coupling at each trapping distance, sorted by L.

    With ``workers > 1`` rows are computed in separate processes; the
    result does not depend on the order in which they finish.
    """
    jobs = [(species, omega_xy, omega_z, float(L), method, settings) for L in lengths]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs))
    else:
        rows = [_row_job(j) for j in jobs]
    return sorted(rows, key=lambda r: r.L)


def write_sweep_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in astuple(row)])
    return path


def read_sweep_csv(path) -> list[SweepRow]:
    rows = []
    with Path(path).open(newline="") as fh:
        for rec in csv.DictReader(fh):
            kw = {c: (rec[c] if c in ("species", "method") else float(rec[c])) for c in COLUMNS}
            rows.append(SweepRow(**kw))
    return rows


def gnuplot_script(csv_path, image_name: str = "J_vs_L.png") -> str:
    """gnuplot commands plotting J/hbar against L on log-log axes."""
    L_col = COLUMNS.index("L") + 1
    J_col = COLUMNS.index("J_over_hbar") + 1
    return "\n".join([
        "set datafile separator ','",
        "set terminal pngcairo size 800,600",
        f"set output '{image_name}'",
        "set logscale xy",
        "set xlabel 'L (m)'",
        "set ylabel 'J/hbar (rad/s)'",
        "set key top right",
        f"plot '{Path(csv_path).name}' every ::1 using {L_col}:{J_col} "
        "with linespoints title 'exchange coupling'",
        "",
    ])
