import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ioncollide.geometry import TrapConfig
from ioncollide.potential import (EffectivePotentialParams, alpha, alpha_regime,
                                  interaction_length, v_eff, v_eff_at_contact,
                                  v_eff_linearized, v_eff_reduced)
from ioncollide.units import lookup_species

YB = lookup_species("Yb-171")
MHZ = 2 * math.pi * 1e6


def mp_veff(r, w, dps=50):
    """V/C from the exp * erfc form at high precision."""
    with mpmath.workdps(dps):
        s = mpmath.sqrt(mpmath.mpf(w) / 2)
        r = mpmath.mpf(r)
        return mpmath.sqrt(mpmath.pi) * s * mpmath.exp(s * s * r * r) * mpmath.erfc(s * r)


@pytest.mark.parametrize("w", [3.0, 5.0, 50.0, 2.0e4])
def test_matches_mpmath(w):
    r = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 60)])
    got = v_eff_reduced(r, w)
    want = np.array([float(mp_veff(x, w)) for x in r])
    assert np.max(np.abs(got / want - 1)) < 1e-12


def test_no_overflow_far_out():
    v = v_eff_reduced(np.array([40.0, 1e3, 1e6]), 5.0)
    assert np.all(np.isfinite(v)) and np.all(v > 0)


def test_contact_value():
    assert v_eff_reduced(0.0, 8.0) == pytest.approx(math.sqrt(math.pi * 4.0))


@given(r=st.floats(1e-6, 1e4), w=st.floats(1.0, 1e4))
def test_below_coulomb_and_even(r, w):
    v = v_eff_reduced(r, w)
    assert v < 1.0 / r
    assert v_eff_reduced(-r, w) == v


@given(w=st.floats(1.0, 1e4))
def test_monotone_convex(w):
    r = np.linspace(0, 20, 2001)
    v = v_eff_reduced(r, w)
    assert np.all(np.diff(v) < 0)
    assert np.all(np.diff(v, 2) > -1e-12 * v[0])


def test_coulomb_limit():
    for w in (5.0, 50.0):
        r = 1e3 * math.sqrt(2 / w)
        assert v_eff_reduced(r, w) * r == pytest.approx(1.0, rel=1e-3)


def test_si_wrapper_and_linearised():
    cfg = TrapConfig(YB, 2 * MHZ, 10 * MHZ, 100e-6)
    p = EffectivePotentialParams.from_config(cfg)
    assert v_eff(p, 0.0) == pytest.approx(v_eff_at_contact(p))
    r = 0.01 * interaction_length(p)
    assert v_eff_linearized(p, r) == pytest.approx(v_eff(p, r), rel=1e-3)
    with pytest.raises(ValueError):
        v_eff(p, -1e-9)


def test_alpha_scaling():
    a1 = alpha(TrapConfig(YB, 2 * MHZ, 10 * MHZ, 50e-6))
    a2 = alpha(TrapConfig(YB, 2 * MHZ, 10 * MHZ, 100e-6))
    assert a2 / a1 == pytest.approx(4.0)


def test_alpha_regimes():
    assert alpha_regime(1.0 + 1e-9) == "marginal"
    assert alpha_regime(2.0) == "colliding"
    assert alpha_regime(0.05) == "classical"
    assert alpha_regime(0.5) == "intermediate"
