"""Physical constants, reduced units and the ion species registry.

Constants are pinned to CODATA 2018 rather than taken from ``scipy.constants``
(which tracks the newest CODATA release), so results do not drift between
scipy versions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType


@dataclass(frozen=True)
class PhysicalConstants:
    """SI values of the constants used throughout the package."""

    hbar: float = 1.054571817e-34
    elementary_charge: float = 1.602176634e-19
    vacuum_permittivity: float = 8.8541878128e-12
    atomic_mass_unit: float = 1.66053906660e-27
    electron_mass: float = 9.1093837015e-31
    euler_mascheroni: float = 0.57721566490153286061

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"constant {name} must be positive, got {value}")

    @property
    def coulomb_constant(self) -> float:
        """1/(4 pi eps0) in N m^2 / C^2."""
        return 1.0 / (4.0 * math.pi * self.vacuum_permittivity)


CONSTANTS = PhysicalConstants()


class UnknownSpeciesError(KeyError):
    def __init__(self, name, registered):
        self.name = name
        self.registered = tuple(registered)
        super().__init__(name)

    def __str__(self):
        return (f"unknown species {self.name!r}; registered species: "
                f"{', '.join(self.registered)}")


@dataclass(frozen=True)
class IonSpecies:
    """A trapped charged particle.

    ``hyperfine_splitting_E0`` is the qubit splitting in joules. It is ``None``
    when the qubit is a bare spin whose splitting depends on an external field.
    """

    name: str
    mass: float
    charge: float
    hyperfine_splitting_E0: float | None = None

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"{self.name}: mass must be positive")
        if not abs(self.charge) > 0:
            raise ValueError(f"{self.name}: charge must be nonzero")

    @property
    def charge_squared_coulomb(self) -> float:
        """Q^2/(4 pi eps0) in J m."""
        return self.charge ** 2 * CONSTANTS.coulomb_constant


def _hyperfine(freq_hz: float) -> float:
    return CONSTANTS.hbar * 2.0 * math.pi * freq_hz


_BUILTIN = {
    "Yb-171": IonSpecies("Yb-171", 170.936 * CONSTANTS.atomic_mass_unit,
                         CONSTANTS.elementary_charge, _hyperfine(12.64e9)),
    "Be-9": IonSpecies("Be-9", 9.0122 * CONSTANTS.atomic_mass_unit,
                       CONSTANTS.elementary_charge),
    "electron": IonSpecies("electron", CONSTANTS.electron_mass,
                           -CONSTANTS.elementary_charge),
}

_user_species: dict[str, IonSpecies] = {}


def registered_species() -> list[str]:
    return list(_BUILTIN) + [k for k in _user_species if k not in _BUILTIN]


def lookup_species(name: str) -> IonSpecies:
    """Return the registered species called ``name``.

    User-defined species (see :func:`register_species`) shadow the built-ins.
    """
    if name in _user_species:
        return _user_species[name]
    if name in _BUILTIN:
        return _BUILTIN[name]
    raise UnknownSpeciesError(name, registered_species())


def register_species(species: IonSpecies) -> IonSpecies:
    _user_species[species.name] = species
    return species


def clear_user_species():
    _user_species.clear()


BUILTIN_SPECIES = MappingProxyType(_BUILTIN)


# --- species overrides from config files -----------------------------------

_OVERRIDE_KEYS = {
    "mass_u": lambda v: ("mass", v * CONSTANTS.atomic_mass_unit),
    "mass_kg": lambda v: ("mass", v),
    "charge_e": lambda v: ("charge", v * CONSTANTS.elementary_charge),
    "charge_c": lambda v: ("charge", v),
    "e0_hz": lambda v: ("hyperfine_splitting_E0", _hyperfine(v)),
    "e0_rad_s": lambda v: ("hyperfine_splitting_E0", CONSTANTS.hbar * v),
    "e0_j": lambda v: ("hyperfine_splitting_E0", v),
}


def parse_config_text(text: str) -> dict[str, object]:
    """Parse a config file body into a flat ``{dotted.key: value}`` dict.

    JSON objects are flattened with dots; otherwise the text is read as
    ``key = value`` lines with ``#`` comments. Values that parse as numbers
    become floats.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        flat: dict[str, object] = {}

        def walk(prefix, node):
            for k, v in node.items():
                key = f"{prefix}.{k}" if prefix else str(k)
                if isinstance(v, dict):
                    walk(key, v)
                else:
                    flat[key] = v
        walk("", json.loads(stripped))
        return flat

    out: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        value = value.strip("\"'")
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def species_from_config(entries: dict[str, object]) -> list[IonSpecies]:
    """Build species from ``species.<name>.<field>`` entries.

    A name that matches a built-in species starts from the built-in values,
    so ``species.Yb-171.mass_u = 171`` changes only the mass.
    """
    fields: dict[str, dict[str, float]] = {}
    for key, value in entries.items():
        parts = key.split(".")
        if parts[0] != "species" or len(parts) == 1:
            # a bare "species" key selects the species, it is not an override
            continue
        if len(parts) != 3:
            raise ValueError(f"species override {key!r} must look like species.<name>.<field>")
        _, name, attr = parts
        if attr not in _OVERRIDE_KEYS:
            raise ValueError(f"unknown species field {attr!r}; expected one of {sorted(_OVERRIDE_KEYS)}")
        target, converted = _OVERRIDE_KEYS[attr](float(value))
        fields.setdefault(name, {})[target] = converted

    result = []
    for name, kw in fields.items():
        base = _BUILTIN.get(name)
        if base is not None:
            result.append(replace(base, **kw))
        else:
            kw.setdefault("charge", CONSTANTS.elementary_charge)
            if "mass" not in kw:
                raise ValueError(f"custom species {name!r} needs a mass")
            result.append(IonSpecies(name, **kw))
    return result


def load_config(path: str | Path, register: bool = True) -> dict[str, object]:
    """Read a config file, registering any species overrides it contains."""
    entries = parse_config_text(Path(path).read_text())
    if register:
        for sp in species_from_config(entries):
            register_species(sp)
    return entries


# --- reduced units -----------------------------------------------------------

@dataclass(frozen=True)
class ReducedUnits:
    """Harmonic-oscillator units of a trap axis.

    Lengths are measured in ``z0 = sqrt(hbar/(m omega_z))``, energies in
    ``hbar omega_z`` and times in ``1/omega_z``.
    """

    mass: float
    omega_z: float
    hbar: float = field(default=CONSTANTS.hbar)

    @property
    def length(self) -> float:
        return math.sqrt(self.hbar / (self.mass * self.omega_z))

    @property
    def energy(self) -> float:
        return self.hbar * self.omega_z

    @property
    def time(self) -> float:
        return 1.0 / self.omega_z

    @property
    def momentum(self) -> float:
        return self.hbar / self.length

    def to_reduced(self, value, kind: str):
        return value / getattr(self, kind)

    def to_si(self, value, kind: str):
        return value * getattr(self, kind)
