"""
Finding an operating point
==========================

Two ions in neighbouring traps are pushed into a coherent oscillation of
amplitude L/2, so they collide every half period. The barrier parameter
alpha compares the collision energy with the top of the quasi-1D Coulomb
barrier; alpha = 1 is the shortest trap separation at which the wave
packets still reach each other.
"""

import math

from ioncollide import CONSTANTS, design_point_alpha1, lookup_species
from ioncollide.coupling import coupling_jld2, exchange_asymptotic, restriction_product
from ioncollide.potential import alpha

omega_xy = 2 * math.pi * 10e6

for name in ("Yb-171", "Be-9"):
    sp = lookup_species(name)
    cfg = design_point_alpha1(sp, omega_xy, omega_perp_target=5.0)
    J = exchange_asymptotic(cfg)
    print(f"{name:7s} L = {cfg.L * 1e6:7.2f} um  alpha = {alpha(cfg):.3f}  "
          f"J/hbar = {J / CONSTANTS.hbar:7.1f} rad/s")
    # same number from the alpha-dependent form
    assert math.isclose(J, coupling_jld2(cfg), rel_tol=1e-12)

# along the alpha = 1 line, omega_perp * J does not depend on L; it only
# grows with the transverse confinement, as omega_xy^(5/4)
for f in (10e6, 20e6, 40e6):
    prod = restriction_product(lookup_species("Yb-171"), 2 * math.pi * f)
    print(f"omega_xy = 2pi x {f / 1e6:4.0f} MHz  omega_perp J / hbar = {prod / CONSTANTS.hbar:8.1f} rad/s")
