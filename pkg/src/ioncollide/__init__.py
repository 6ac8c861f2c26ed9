"""Exchange coupling, gates and schedules for colliding trapped ions."""

from .coupling import (CouplingResult, QuadratureSettings, classical_direct_interaction,
                       compute_coupling, coupling_asymptotic, coupling_jld2,
                       design_point_alpha1, design_point_alpha1_for_length,
                       direct_interaction_renormalized, interaction_time_estimate,
                       interference_term, level_shifts_quadrature, restriction_product)
from .bruteforce import level_shifts_bruteforce_oracle
from .drive import (DrivingConfig, bistable_amplitude, match_drive_to_separation,
                    position_shift_bound)
from .gates import GateSpec, collision_count, decompose_sqrt_swap, synthesize_gate
from .geometry import (CoherentPairState, TrapConfig, coherent_pair_at, derived_scales,
                       symmetrization_norms)
from .potential import EffectivePotentialParams, alpha, v_eff
from .scheduler import MergeSchedule, TrapArray, route_remote_gate, validate_schedule
from .units import CONSTANTS, IonSpecies, PhysicalConstants, lookup_species

__version__ = "0.1.0"
