"""Resonant parametric drive that pins the ions to the bistable orbit.

Single-ion Hamiltonian:

    H0(t) = p^2/2m + (m omega_z^2/2)(1 + f cos(omega_f t)) z^2 - zeta z^4 / 4

At omega_f = 2 omega_z the stable oscillation amplitude is
sqrt(2 f m omega_z^2 / (3 zeta)). Only this resonant branch is modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RegimeError
from .geometry import TrapConfig

RESONANCE_TOL = 1e-6


@dataclass(frozen=True)
class DrivingConfig:
    f: float
    omega_f: float
    zeta: float

    def __post_init__(self):
        if self.f < 0:
            raise ValueError("drive amplitude f must be non-negative")
        if not self.zeta > 0:
            raise ValueError("zeta must be positive")
        if not self.omega_f > 0:
            raise ValueError("omega_f must be positive")

    def resonant_with(self, omega_z: float) -> bool:
        return abs(self.omega_f - 2.0 * omega_z) / omega_z < RESONANCE_TOL


def bistable_amplitude(cfg: TrapConfig, drive: DrivingConfig) -> float:
    """Amplitude (m) of the stable oscillating state."""
    if not drive.resonant_with(cfg.omega_z):
        raise RegimeError(
            f"drive at {drive.omega_f:g} rad/s is off resonance with 2 omega_z = "
            f"{2 * cfg.omega_z:g} rad/s")
    if not drive.f > 0:
        raise ValueError("drive amplitude f must be positive")
    return math.sqrt(2.0 * drive.f * cfg.species.mass * cfg.omega_z ** 2 / (3.0 * drive.zeta))


def match_drive_to_separation(cfg: TrapConfig, zeta: float) -> DrivingConfig:
    """Resonant drive whose bistable orbit has amplitude L/2."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    f = 0.375 * zeta * cfg.L ** 2 / (cfg.species.mass * cfg.omega_z ** 2)
    return DrivingConfig(f=f, omega_f=2.0 * cfg.omega_z, zeta=zeta)


def zeta_for_drive(cfg: TrapConfig, f: float) -> float:
    """Nonlinearity that makes ``f`` the matched drive amplitude at ``cfg``."""
    return f * cfg.species.mass * cfg.omega_z ** 2 / (0.375 * cfg.L ** 2)


@dataclass(frozen=True)
class PositionShift:
    relative_shift: float
    # f at which relative_shift would fall to target
    min_drive: float
    target: float


def position_shift_bound(cfg: TrapConfig, drive: DrivingConfig, U_direct: float,
                         target: float = 0.01) -> PositionShift:
    """Linear estimate of the per-collision drift Delta L / L = 4 U / (f m omega_z^2 L^2)."""
    if not drive.f > 0:
        raise RegimeError("position shift bound needs a nonzero drive amplitude")
    if U_direct < 0:
        raise ValueError("U_direct must be non-negative")
    scale = 4.0 * U_direct / (cfg.species.mass * cfg.omega_z ** 2 * cfg.L ** 2)
    return PositionShift(scale / drive.f, scale / target, target)
