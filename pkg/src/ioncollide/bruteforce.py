"""Tensor-grid reference values for the time-averaged level shifts.

Builds the two coherent states on a uniform grid, forms the symmetrised and
antisymmetrised two-particle states over the full (z1, z2) grid, normalises
them numerically and sums |Phi|^2 V(z1 - z2). No Gaussian integral is done
analytically. The trapezoid error is dominated by the kink of V at z1 = z2
and is a clean series in h^2, so three step sizes and two Richardson steps
give a reference accurate to ~1e-8 for L of a few z0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .errors import ResourceLimitError
from .geometry import TrapConfig, coherent_wavefunction
from .potential import v_eff_reduced

MAX_NODES = 10_000_000


@dataclass(frozen=True)
class GridLevel:
    step: float
    v_plus: float
    v_minus: float


@dataclass(frozen=True)
class BruteForceResult:
    """Oracle output in units of C = Q^2/(4 pi eps0 z0)."""

    v_plus: float
    v_minus: float
    levels: tuple[GridLevel, ...]

    @property
    def J(self) -> float:
        return 0.5 * (self.v_plus - self.v_minus)

    @property
    def U(self) -> float:
        return 0.5 * (self.v_plus + self.v_minus)


def grid_level_shifts(ell: float, omega_perp: float, step: float, time_nodes: int,
                      pad: float = 8.5) -> GridLevel:
    """Trapezoid estimate of V_pm on one grid.

    ``time_nodes`` equally spaced times cover a full trap period.
    """
    half = 0.5 * ell + pad
    n = int(math.ceil(half / step))
    if (2 * n + 1) ** 2 > MAX_NODES:
        raise ResourceLimitError(
            f"grid of {(2 * n + 1) ** 2} nodes exceeds the {MAX_NODES} node limit")
    z = np.arange(-n, n + 1) * step
    # V(z1_i - z2_j) depends on i - j only
    vmat = toeplitz(v_eff_reduced(z - z[0], omega_perp))
    dA = step * step

    vp = vm = 0.0
    for j in range(time_nodes):
        tau = 2.0 * math.pi * j / time_nodes
        x = 0.5 * ell * math.cos(tau)
        p = 0.5 * ell * math.sin(tau)
        phi = coherent_wavefunction(z, -x, p, tau)
        varphi = coherent_wavefunction(z, x, -p, tau)

        # Psi_pm(z1, z2) = phi(z1) varphi(z2) +- varphi(z1) phi(z2); expand
        # |Psi|^2 into the products below to avoid an n x n complex array
        aa = np.abs(phi) ** 2
        bb = np.abs(varphi) ** 2
        ab = np.conj(phi) * varphi
        direct = aa @ vmat @ bb * dA
        exchange = float(np.real(ab @ vmat @ np.conj(ab))) * dA
        norm_direct = aa.sum() * bb.sum() * dA
        norm_exchange = abs(ab.sum() * step) ** 2

        vp += (direct + exchange) / (norm_direct + norm_exchange)
        vm += (direct - exchange) / (norm_direct - norm_exchange)
    return GridLevel(step, vp / time_nodes, vm / time_nodes)


def level_shifts_bruteforce_reduced(ell: float, omega_perp: float,
                                    steps=(0.1, 0.05, 0.025),
                                    time_nodes: int = 128) -> BruteForceResult:
    """Richardson-extrapolated grid values over successively halved steps."""
    steps = tuple(steps)
    refine = steps[0] / steps[1] if len(steps) > 1 else 2.0
    if any(not math.isclose(a / b, refine) for a, b in zip(steps[:-1], steps[1:])):
        raise ValueError("steps must shrink by a constant factor")
    levels = [grid_level_shifts(ell, omega_perp, h, time_nodes) for h in steps]
    table = [[(lv.v_plus, lv.v_minus) for lv in levels]]
    # each column removes the next even power of h
    for order in range(1, len(levels)):
        prev = table[-1]
        ratio = refine ** (2 * order)
        table.append([
            tuple((ratio * fine[i] - coarse[i]) / (ratio - 1.0) for i in range(2))
            for coarse, fine in zip(prev[:-1], prev[1:])
        ])
    best = table[-1][-1]
    return BruteForceResult(best[0], best[1], tuple(levels))


def level_shifts_bruteforce_oracle(cfg: TrapConfig, steps=(0.1, 0.05, 0.025),
                                   time_nodes: int = 128):
    """Oracle for :func:`level_shifts_quadrature`, returning a CouplingResult in joules."""
    from .coupling import CouplingResult, implied_interference
    from .potential import alpha

    res = level_shifts_bruteforce_reduced(cfg.ell, cfg.omega_perp, steps, time_nodes)
    C = cfg.coulomb_prefactor
    return CouplingResult(
        exchange_J=C * res.J, direct_U=C * res.U,
        interference_A=implied_interference(res.J, cfg.ell, cfg.omega_perp),
        method="quadrature", alpha=alpha(cfg),
        info={"oracle": "grid", "levels": res.levels})
