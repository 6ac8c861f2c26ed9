"""
Gates between distant traps
===========================

Only neighbouring traps can merge. A gate between q0 and q3 swaps q0's
state along the chain, applies sqrt(SWAP) and swaps it back, for
(4 (d - 1) + 1) gate times of holding.
"""

import math

from ioncollide.scheduler import (TrapArray, route_remote_gate, schedule_to_text,
                                  simulate_schedule, validate_schedule)

omega_z = 2 * math.pi * 2e6
array = TrapArray.labelled(5, trap_length_L=103e-6)
sched = route_remote_gate(array, "q0", "q3", gate_time_tg=0.0125, omega_z=omega_z)

print(schedule_to_text(sched, array))
print("violations:", validate_schedule(array, sched))
final, interactions = simulate_schedule(array, sched)
print("final occupancy:", final)
print("sqrt(SWAP) applied between:", [sorted(p) for p in interactions])
print(f"hold time / t_g = {sched.hold_time() / sched.gate_time:.0f}")
