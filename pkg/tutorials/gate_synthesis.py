"""
From coupling to a sqrt(SWAP) gate
==================================

Holding the collision for t_g = 3 pi hbar / 4J rotates the |du>, |ud>
block into sqrt(SWAP). The qubit splitting leaves a phase gate on each ion
that can be undone with single-qubit rotations.
"""

import math

import numpy as np

from ioncollide import CONSTANTS, design_point_alpha1, lookup_species
from ioncollide.coupling import direct_interaction_renormalized, exchange_asymptotic
from ioncollide.gates import SQRT_SWAP, collision_count, decompose_sqrt_swap, synthesize_gate

yb = lookup_species("Yb-171")
cfg = design_point_alpha1(yb, 2 * math.pi * 10e6, 5.0)
J = exchange_asymptotic(cfg)
U = direct_interaction_renormalized(cfg)

gate = synthesize_gate(yb.hyperfine_splitting_E0, U, J, cfg.omega_z)
g, theta, residual = decompose_sqrt_swap(gate)
print(f"t_g = {gate.t_g * 1e3:.3f} ms, theta = {theta:.4f} rad, residual {residual:.1e}")

n = collision_count(J, cfg.omega_z)
print(f"{n.value:.1f} collisions per gate; nearest integer {n.nearest}, off by {n.mistuning:+.2f}")

# strip the phase gates and the global phase
r_inv = np.diag([1, np.exp(-1j * theta)])
bare = np.exp(-1j * g) * gate.matrix @ np.kron(r_inv, r_inv)
print("max |bare - sqrt(SWAP)| =", np.max(np.abs(bare - SQRT_SWAP)))
print("J/hbar =", J / CONSTANTS.hbar, "rad/s")
