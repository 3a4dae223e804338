"""Smoke tests for the compiled nrclab module."""

import math

import numpy as np
import pytest

import nrclab


def test_pauli_channel():
    ch = nrclab.PauliChannel(0.1, 0.05, 0.2)
    assert ch.q == pytest.approx(0.35)
    assert ch.b == pytest.approx(0.15)
    with pytest.raises(ValueError):
        nrclab.PauliChannel(0.9, 0.9, 0.9)


def test_architecture_and_lightcones():
    arch = nrclab.build_architecture(4, 2, "brickwork1d", seed=0)
    assert arch.layers[0] == [(0, 1), (2, 3)]
    assert arch.layers[1] == [(1, 2), (3, 0)]
    assert arch.forward_lightcone(0, 0) == {0}
    assert arch.forward_lightcone(0, 2) == {0, 1, 2, 3}
    parsed, noise = nrclab.parse_architecture(arch.serialize())
    assert parsed.layers == arch.layers
    assert noise.total_locations() == 0


def test_serialization_with_noise_roundtrip():
    arch = nrclab.build_architecture(6, 3, "random_matching_per_layer", seed=5)
    locs = nrclab.sample_noise_locations(arch, p=0.5, q=0.25, seed=9)
    text = nrclab.serialize_architecture(arch, locs)
    parsed_arch, parsed_locs = nrclab.parse_architecture(text)
    assert parsed_arch.layers == arch.layers
    assert parsed_locs.sites_per_layer == locs.sites_per_layer


def test_haar_unitarity():
    u = nrclab.sample_haar_unitary(8, seed=3)
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-12


def test_output_distribution_ops():
    assert nrclab.tvd_to_uniform([0.75, 0.25]) == pytest.approx(0.25)
    assert nrclab.collision_probability([0.5, 0.5, 0.0, 0.0]) == pytest.approx(0.5)
    assert nrclab.marginal_zero_probability([1.0, 0.0, 0.0, 0.0], 0) == 1.0


def test_noisy_haar_output_is_normalized():
    arch = nrclab.build_architecture(4, 3, "brickwork1d", seed=1)
    p = nrclab.noisy_haar_output(
        arch, channel=nrclab.PauliChannel(0.05, 0.05, 0.05), seed=11
    )
    assert len(p) == 16
    assert sum(p) == pytest.approx(1.0)
    assert min(p) >= 0.0


def test_clifford_census():
    assert nrclab.clifford_group_size() == 11520
    assert nrclab.z1_fixing_count() == 384
    assert nrclab.z1_fixing_fraction() >= 1 / 30 - 1e-15


def test_clifford_noise_monotonicity():
    arch = nrclab.build_architecture(4, 2, "brickwork1d", seed=2)
    _, z_noisy, z_clean = nrclab.noisy_clifford_output(
        arch, channel=nrclab.PauliChannel(0.05, 0.05, 0.05), seed=7
    )
    assert z_noisy <= z_clean + 1e-10
    assert z_noisy >= 2**-4 - 1e-12


def test_single_qubit_channel_power():
    ch = nrclab.PauliChannel(0.1, 0.05, 0.2)
    assert nrclab.single_qubit_channel_power(ch, 0) == 1.0
    expected = 0.5 + 0.5 * (1 - 2 * 0.15) ** 7
    assert nrclab.single_qubit_channel_power(ch, 7) == pytest.approx(expected)


def test_statmech_exact_golden_value():
    arch = nrclab.build_architecture(2, 1, "brickwork1d", seed=0)
    z = nrclab.exact_average_collision(arch, p=0.0, q=0.1)
    assert z == pytest.approx(0.4, abs=1e-12)


def test_statmech_ordering_chain():
    arch = nrclab.build_architecture(4, 3, "brickwork1d", seed=0)
    exact = nrclab.exact_average_collision(arch, p=1.0, q=0.25)
    modified = nrclab.location_averaged_collision(4, 3, 1.0, 0.25)
    bound = nrclab.collision_upper_bound(4, 3, 1.0, 0.25)
    assert exact <= modified + 1e-12
    assert modified <= bound + 1e-12


def test_bounds():
    ch = nrclab.PauliChannel(0.0, 0.0, 0.3)  # pure dephasing, b = 0
    assert nrclab.tvd_lower_bound(ch, 1) == pytest.approx(1 / 120)
    assert nrclab.tvd_upper_bound(8, 30, 1.0, 0.5) == pytest.approx(
        0.5 * 3 ** (2 / 3) * 2 * math.exp(-20 / 3)
    )
    ref = nrclab.reference_constants(2)
    assert ref["haar_collision"] == pytest.approx(0.4)
    assert ref["mu_upper"] == 2.48
    tail = nrclab.typicality_tail(10**6, 1, ch)
    assert tail["value"] == pytest.approx(8 / 30 + 16 * 3600 / 10**6)


def test_run_experiment_records():
    config = "\n".join(
        [
            "experiment = statmech-check",
            "n = 2",
            "d = 1",
            "p = 0",
            "q = 0.25",
            "samples = 200",
            "workers = 1",
        ]
    )
    records = nrclab.run_experiment(config)
    golden = [r for r in records if r["estimator"] == "statmech_golden"]
    assert golden and golden[0]["verdict"] == "pass"
    assert all(r["verdict"] != "fail" for r in records if "verdict" in r)
