"""Quasi-one-dimensional Coulomb interaction between two ions.

With the transverse motion frozen in its ground state, averaging 1/r over
the transverse Gaussians leaves

    V(r) = C sqrt(pi w/2) exp(w r^2/2) erfc(sqrt(w/2) r),   C = Q^2/(4 pi eps0 z0)

with ``r`` in units of z0 and ``w = omega_perp``. The exp/erfc pair is always
evaluated as ``erfcx`` since the two factors overflow and underflow
separately once r exceeds ~38/sqrt(w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .geometry import TrapConfig

MARGINAL_ALPHA_TOL = 1e-6
CLASSICAL_ALPHA = 0.1


@dataclass(frozen=True)
class EffectivePotentialParams:
    coulomb_prefactor: float
    omega_perp: float
    z0: float

    def __post_init__(self):
        if not self.coulomb_prefactor > 0:
            raise ValueError("coulomb_prefactor must be positive")
        if not self.omega_perp >= 1:
            raise ValueError("omega_perp must be >= 1")
        if not self.z0 > 0:
            raise ValueError("z0 must be positive")

    @classmethod
    def from_config(cls, cfg: TrapConfig):
        return cls(cfg.coulomb_prefactor, cfg.omega_perp, cfg.z0)


def v_eff_reduced(r, omega_perp):
    """V(r)/C for ``r`` in units of z0. Even in ``r``."""
    s = math.sqrt(0.5 * omega_perp)
    return math.sqrt(math.pi) * s * erfcx(s * np.abs(r))


def v_eff(params: EffectivePotentialParams, r_z):
    """Effective interaction energy (J) at axial separation ``r_z`` (m)."""
    r_z = np.asarray(r_z, dtype=float)
    if np.any(r_z < 0):
        raise ValueError("r_z must be non-negative")
    out = params.coulomb_prefactor * v_eff_reduced(r_z / params.z0, params.omega_perp)
    return out if out.ndim else float(out)


def v_eff_at_contact(params: EffectivePotentialParams) -> float:
    """Barrier height V(0) in joules."""
    return params.coulomb_prefactor * math.sqrt(0.5 * math.pi * params.omega_perp)


def v_eff_linearized(params: EffectivePotentialParams, r_z):
    """First-order expansion of V about contact; meaningful for r_z < z0 sqrt(2/omega_perp)."""
    slope = math.sqrt(2.0 * params.omega_perp / math.pi)
    return v_eff_at_contact(params) * (1.0 - slope * np.asarray(r_z) / params.z0)


def interaction_length(params: EffectivePotentialParams) -> float:
    """Range z0 sqrt(2/omega_perp) over which V departs from 1D Coulomb."""
    return params.z0 * math.sqrt(2.0 / params.omega_perp)


def alpha(cfg: TrapConfig) -> float:
    """Collision kinetic energy m omega_z^2 L^2 / 4 over the barrier V(0)."""
    kinetic = 0.25 * cfg.species.mass * cfg.omega_z ** 2 * cfg.L ** 2
    return kinetic / v_eff_at_contact(EffectivePotentialParams.from_config(cfg))


def alpha_regime(a: float) -> str:
    """Label for a barrier parameter value.

    ``colliding`` above 1, ``marginal`` within 1e-6 of 1, ``classical`` below
    0.1 and ``intermediate`` in between, where neither limit applies.
    """
    if abs(a - 1.0) <= MARGINAL_ALPHA_TOL:
        return "marginal"
    if a > 1.0:
        return "colliding"
    if a < CLASSICAL_ALPHA:
        return "classical"
    return "intermediate"
