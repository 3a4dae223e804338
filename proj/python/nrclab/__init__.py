"""Numerics for the convergence of noisy random circuits to uniform.

The compiled core exposes the simulation engines (dense density matrix,
stabilizer, configuration-space averages) and the closed-form bounds; this
package re-exports them.
"""

from nrclab._core import (
    Architecture,
    HeraldedDephasingSpec,
    NoiseLocationSet,
    PauliChannel,
    ResourceError,
    ValidationError,
    anticoncentration_threshold,
    anticoncentration_threshold_noisy,
    build_architecture,
    clifford_group_size,
    collision_probability,
    collision_upper_bound,
    composite_channel_state,
    exact_average_collision,
    location_averaged_collision,
    marginal_zero_probability,
    modified_ensemble_collision,
    mu_lower,
    noisy_clifford_output,
    noisy_haar_output,
    parse_architecture,
    reference_constants,
    run_experiment,
    sample_haar_two_qubit,
    sample_haar_unitary,
    sample_noise_locations,
    serialize_architecture,
    single_qubit_channel_power,
    tvd_lower_bound,
    tvd_lower_bound_from_b,
    tvd_to_uniform,
    tvd_upper_bound,
    typicality_tail,
    z1_fixing_count,
    z1_fixing_fraction,
    __version__,
)

__all__ = [
    "Architecture",
    "HeraldedDephasingSpec",
    "NoiseLocationSet",
    "PauliChannel",
    "ResourceError",
    "ValidationError",
    "anticoncentration_threshold",
    "anticoncentration_threshold_noisy",
    "build_architecture",
    "clifford_group_size",
    "collision_probability",
    "collision_upper_bound",
    "composite_channel_state",
    "exact_average_collision",
    "location_averaged_collision",
    "marginal_zero_probability",
    "modified_ensemble_collision",
    "mu_lower",
    "noisy_clifford_output",
    "noisy_haar_output",
    "parse_architecture",
    "reference_constants",
    "run_experiment",
    "sample_haar_two_qubit",
    "sample_haar_unitary",
    "sample_noise_locations",
    "serialize_architecture",
    "single_qubit_channel_power",
    "tvd_lower_bound",
    "tvd_lower_bound_from_b",
    "tvd_to_uniform",
    "tvd_upper_bound",
    "typicality_tail",
    "z1_fixing_count",
    "z1_fixing_fraction",
    "__version__",
]
