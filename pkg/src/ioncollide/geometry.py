"""Trap configuration and the oscillating coherent-state pair."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

from .errors import DegenerateOverlapError, RegimeWarning
from .units import CONSTANTS, IonSpecies, ReducedUnits

QUASI_1D_WARN_BELOW = 3.0


@dataclass(frozen=True)
class TrapConfig:
    """A merged trap holding two ions of ``species``.

    ``L`` is the trapping distance: the two ions start at +-L/2 from the
    centre of the merged trap. Frequencies are angular (rad/s).
    """

    species: IonSpecies
    omega_z: float
    omega_xy: float
    L: float

    def __post_init__(self):
        if not self.omega_z > 0:
            raise ValueError("omega_z must be positive")
        if not self.omega_xy >= self.omega_z:
            raise ValueError("omega_xy must be at least omega_z")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if self.omega_perp < QUASI_1D_WARN_BELOW:
            warnings.warn(
                f"omega_perp = {self.omega_perp:.3g} < {QUASI_1D_WARN_BELOW}: "
                "transverse motion is not well frozen out",
                RegimeWarning, stacklevel=3)

    @classmethod
    def from_omega_perp(cls, species, omega_xy, omega_perp, L):
        return cls(species, omega_xy / omega_perp, omega_xy, L)

    @property
    def omega_perp(self) -> float:
        return self.omega_xy / self.omega_z

    @cached_property
    def units(self) -> ReducedUnits:
        return ReducedUnits(self.species.mass, self.omega_z, CONSTANTS.hbar)

    @property
    def z0(self) -> float:
        return self.units.length

    @property
    def ell(self) -> float:
        """Trapping distance in units of z0."""
        return self.L / self.z0

    @property
    def coulomb_prefactor(self) -> float:
        """Q^2/(4 pi eps0 z0) in joules."""
        return self.species.charge_squared_coulomb / self.z0

    @property
    def kappa(self) -> float:
        """Coulomb prefactor in units of hbar omega_z."""
        return self.coulomb_prefactor / self.units.energy


def derived_scales(cfg: TrapConfig) -> tuple[float, float]:
    """Return ``(z0, omega_perp)`` for ``cfg``."""
    return cfg.z0, cfg.omega_perp


@dataclass(frozen=True)
class CoherentPairState:
    x_t: float
    p_t: float
    overlap_magnitude: float


def overlap_magnitude(ell: float) -> float:
    """|<phi|varphi>| for two coherent states a distance ``ell`` z0 apart in phase space."""
    return math.exp(-ell * ell / 4.0)


def coherent_pair_at(cfg: TrapConfig, t: float) -> CoherentPairState:
    if t < 0:
        raise ValueError("t must be non-negative")
    phase = cfg.omega_z * t
    x = 0.5 * cfg.L * math.cos(phase)
    p = 0.5 * cfg.species.mass * cfg.omega_z * cfg.L * math.sin(phase)
    return CoherentPairState(x, p, overlap_magnitude(cfg.ell))


def symmetrization_norms_reduced(ell: float) -> tuple[float, float]:
    s2 = math.exp(-ell * ell / 2.0)
    if 1.0 - s2 < 1e-15:
        raise DegenerateOverlapError(
            f"L/z0 = {ell:g}: the two wave packets coincide and the "
            "antisymmetric state cannot be normalised")
    return 1.0 / math.sqrt(2.0 * (1.0 + s2)), 1.0 / math.sqrt(2.0 * (1.0 - s2))


def symmetrization_norms(cfg: TrapConfig) -> tuple[float, float]:
    """Normalisation constants of the symmetric and antisymmetric pair states.

    The two-particle product states overlap by S^2 with S the single-packet
    overlap, so ``n_pm = 1/sqrt(2 (1 +- S^2))``.
    """
    return symmetrization_norms_reduced(cfg.ell)


def coherent_wavefunction(z, center, momentum, phase_t):
    """Coherent state in reduced units (z0 = hbar = 1).

    ``center`` and ``momentum`` are the packet's mean position and momentum;
    ``phase_t`` is omega_z t, entering the common normalisation phase.
    Used by the brute-force oracle, which builds the pair state on a grid.
    """
    import numpy as np

    ell_half_sq = center ** 2 + momentum ** 2  # (L/2)^2, conserved
    norm = np.pi ** -0.25 * np.exp(1j * ell_half_sq * math.sin(2 * phase_t) / 4.0)
    return norm * np.exp(-0.5 * (z - center) ** 2 + 1j * momentum * z)
