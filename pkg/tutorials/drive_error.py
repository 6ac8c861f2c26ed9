"""
How hard to drive
=================

A parametric drive at twice the trap frequency holds the ions on a
bistable orbit of amplitude L/2. The direct repulsion U shifts that orbit;
the shift falls as 1/f, so the drive amplitude sets the error.
"""

import math

from ioncollide import design_point_alpha1, lookup_species
from ioncollide.coupling import direct_interaction_renormalized
from ioncollide.drive import (bistable_amplitude, match_drive_to_separation,
                              position_shift_bound, zeta_for_drive)

cfg = design_point_alpha1(lookup_species("Yb-171"), 2 * math.pi * 10e6, 5.0)
U = direct_interaction_renormalized(cfg)

for f in (0.001, 0.01, 0.1):
    drive = match_drive_to_separation(cfg, zeta_for_drive(cfg, f))
    shift = position_shift_bound(cfg, drive, U)
    amp = bistable_amplitude(cfg, drive)
    print(f"f = {f:5.3f}: amplitude {amp * 1e6:.2f} um, Delta L/L = {shift.relative_shift:.2e}")

print(f"Delta L/L * f = {shift.relative_shift * drive.f:.3g}; "
      f"f above {shift.min_drive:.3g} keeps the shift under 1%")
