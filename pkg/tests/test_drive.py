import math

import pytest

from ioncollide.coupling import design_point_alpha1, direct_interaction_renormalized
from ioncollide.drive import (DrivingConfig, bistable_amplitude, match_drive_to_separation,
                              position_shift_bound, zeta_for_drive)
from ioncollide.errors import RegimeError
from ioncollide.units import lookup_species

YB = lookup_species("Yb-171")
MHZ = 2 * math.pi * 1e6


@pytest.fixture
def cfg():
    return design_point_alpha1(YB, 10 * MHZ, 5.0)


def test_matched_amplitude_is_half_separation(cfg):
    d = match_drive_to_separation(cfg, zeta=1e-3)
    assert d.resonant_with(cfg.omega_z)
    assert bistable_amplitude(cfg, d) == pytest.approx(cfg.L / 2, rel=1e-12)
    assert zeta_for_drive(cfg, d.f) == pytest.approx(1e-3, rel=1e-12)


def test_off_resonance(cfg):
    d = DrivingConfig(f=0.1, omega_f=1.9 * cfg.omega_z, zeta=1.0)
    with pytest.raises(RegimeError):
        bistable_amplitude(cfg, d)


def test_error_bound_yb(cfg):
    U = direct_interaction_renormalized(cfg)
    d = match_drive_to_separation(cfg, zeta_for_drive(cfg, 0.1))
    shift = position_shift_bound(cfg, d, U)
    assert shift.relative_shift * d.f == pytest.approx(1.4e-4, rel=0.15)
    assert shift.min_drive == pytest.approx(shift.relative_shift * d.f / 0.01)


def test_zero_drive(cfg):
    with pytest.raises(RegimeError):
        position_shift_bound(cfg, DrivingConfig(0.0, 2 * cfg.omega_z, 1.0), 1e-30)
    with pytest.raises(ValueError):
        DrivingConfig(0.1, 2 * cfg.omega_z, 0.0)
