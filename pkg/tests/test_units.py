import math
from dataclasses import FrozenInstanceError

import pytest
from hypothesis import given, strategies as st

from ioncollide.units import (CONSTANTS, IonSpecies, ReducedUnits, UnknownSpeciesError,
                              load_config, lookup_species, parse_config_text,
                              registered_species, species_from_config)


def test_constants_positive_and_gamma():
    for v in vars(CONSTANTS).values():
        assert v > 0
    assert f"{CONSTANTS.euler_mascheroni:.10f}" == "0.5772156649"


def test_constants_frozen():
    with pytest.raises(FrozenInstanceError):
        CONSTANTS.hbar = 1.0


def test_yb171_hyperfine():
    yb = lookup_species("Yb-171")
    assert yb.hyperfine_splitting_E0 / CONSTANTS.hbar == pytest.approx(2 * math.pi * 12.64e9, rel=1e-12)


def test_yb171_mass():
    # 170.936 u x 1.66053906660e-27 kg = 2.83846e-25 kg
    assert lookup_species("Yb-171").mass == pytest.approx(2.83846e-25, rel=1e-5)


def test_electron_is_constants_entry():
    e = lookup_species("electron")
    assert e.mass == CONSTANTS.electron_mass
    assert e.charge == -CONSTANTS.elementary_charge
    assert e.hyperfine_splitting_E0 is None


def test_registry_contents():
    assert {"Yb-171", "Be-9", "electron"} <= set(registered_species())


def test_unknown_species_lists_names():
    with pytest.raises(UnknownSpeciesError) as err:
        lookup_species("Ca-40")
    assert "Yb-171" in str(err.value) and "Be-9" in str(err.value)


def test_species_invariants():
    with pytest.raises(ValueError):
        IonSpecies("x", 0.0, 1.0)
    with pytest.raises(ValueError):
        IonSpecies("x", 1.0, 0.0)


def test_keyvalue_config(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("# custom ion\nspecies.custom.mass_u = 40.0\nomega_xy = 2pi*10MHz\n")
    entries = load_config(path)
    assert entries["omega_xy"] == "2pi*10MHz"
    ca = lookup_species("custom")
    assert ca.mass == pytest.approx(40 * CONSTANTS.atomic_mass_unit)
    assert ca.charge == CONSTANTS.elementary_charge


def test_json_config_overrides_builtin():
    entries = parse_config_text('{"species": {"Yb-171": {"mass_u": 171}}}')
    (yb,) = species_from_config(entries)
    assert yb.mass == pytest.approx(171 * CONSTANTS.atomic_mass_unit)
    assert yb.hyperfine_splitting_E0 == lookup_species("Yb-171").hyperfine_splitting_E0


def test_config_rejects_unknown_field():
    with pytest.raises(ValueError):
        species_from_config({"species.x.colour": 1.0})


@given(mass=st.floats(1e-31, 1e-24), omega=st.floats(1e3, 1e13),
       value=st.floats(1e-40, 1e10), kind=st.sampled_from(["length", "energy", "time", "momentum"]))
def test_reduced_roundtrip(mass, omega, value, kind):
    u = ReducedUnits(mass, omega)
    back = u.to_si(u.to_reduced(value, kind), kind)
    assert abs(back - value) <= 1e-12 * abs(value)
