"""
Exchange coupling against trap separation
=========================================

At large separation J falls off as L^-3. The numerical quadrature and the
closed form agree there, while at a few z0 the closed form no longer
applies and the grid oracle is the reference.
"""

import math
import warnings

import numpy as np

from ioncollide.bruteforce import level_shifts_bruteforce_reduced
from ioncollide.coupling import ASYMPTOTIC_A, implied_interference, level_shifts_reduced

w = 5.0
ells = np.geomspace(5, 500, 9)

print("  L/z0      J/C            A/(2/sqrt pi)")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    Js = []
    for ell in ells:
        r = level_shifts_reduced(ell, w)
        Js.append(r.J)
        A = implied_interference(r.J, ell, w)
        print(f"{ell:7.1f}  {r.J:.6e}  {A / ASYMPTOTIC_A:.6f}")

far = ells >= 50
slope = np.polyfit(np.log(ells[far]), np.log(np.array(Js)[far]), 1)[0]
print(f"slope beyond 50 z0: {slope:.4f}")

# short distance: compare with the full two-particle grid sum
q = level_shifts_reduced(5.0, w)
bf = level_shifts_bruteforce_reduced(5.0, w)
print(f"L = 5 z0: V+ quadrature {q.v_plus:.10f}, grid {bf.v_plus:.10f}")
print(f"          V- quadrature {q.v_minus:.10f}, grid {bf.v_minus:.10f}")
