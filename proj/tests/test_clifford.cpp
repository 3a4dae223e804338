#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "nrc/clifford.hpp"
#include "nrc/dense.hpp"
#include "nrc/errors.hpp"
#include "nrc/haar.hpp"
#include "support/oracles.hpp"

using namespace nrc;

TEST_CASE("enumeration closes at 11520 elements") {
  const CliffordGroup& group = CliffordGroup::instance();
  CHECK(group.size() == 11520);

  // identity present, fixing all four generators
  const int id = group.find(clifford_identity());
  REQUIRE(id >= 0);
  for (int g = 0; g < 4; ++g) {
    CHECK(group.elements()[id].images[g] == clifford_identity().images[g]);
  }
}

TEST_CASE("closure under composition (spot check)") {
  const CliffordGroup& group = CliffordGroup::instance();
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& a = group.elements()[rng.uniform_below(group.size())];
    const auto& b = group.elements()[rng.uniform_below(group.size())];
    CHECK(group.find(compose(b, a)) >= 0);
  }
}

TEST_CASE("tableau action matches the stored unitary") {
  const CliffordGroup& group = CliffordGroup::instance();
  Rng rng(77);
  const std::array<std::pair<unsigned, unsigned>, 4> generators = {
      std::pair<unsigned, unsigned>{1u, 0u},  // X1
      {0u, 1u},                               // Z1
      {2u, 0u},                               // X2
      {0u, 2u},                               // Z2
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto& e = group.elements()[rng.uniform_below(group.size())];
    CHECK(unitarity_defect(e.unitary) <= 1e-12);
    for (int g = 0; g < 4; ++g) {
      const auto [x, z] = generators[g];
      const Eigen::MatrixXcd lhs =
          e.unitary * nrc_test::pauli_matrix(2, x, z, 0) * e.unitary.adjoint();
      const auto& img = e.images[g];
      const Eigen::MatrixXcd rhs =
          nrc_test::pauli_matrix(2, img.x, img.z, img.sign);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("z1-fixing census is exactly 384/11520 = 1/30") {
  const CliffordGroup& group = CliffordGroup::instance();
  // golden constant from the enumeration (orbit-stabilizer: 11520/30)
  CHECK(group.z1_fixing_count() == 384);
  const double fraction =
      double(group.z1_fixing_count()) / double(group.size());
  CHECK(fraction >= 1.0 / 30 - 1e-15);
  // identity fixes Z1
  CHECK(std::find(group.z1_fixing_ids().begin(), group.z1_fixing_ids().end(),
                  group.find(clifford_identity())) !=
        group.z1_fixing_ids().end());
}

TEST_CASE("clifford circuit sampling is uniform (chi-square at 4 sigma)") {
  const CliffordGroup& group = CliffordGroup::instance();
  const auto arch = build_architecture(2, 1, LayoutKind::brickwork1d, 0);
  std::vector<long> counts(group.size(), 0);
  const long draws = 100000;
  Rng rng(5150);
  for (long k = 0; k < draws; ++k) {
    const auto circuit = sample_clifford_circuit(
        arch, CircuitNoise::none_noise(), rng.derive(k));
    ++counts[circuit.layers[0][0].clifford_id];
  }
  const double expected = double(draws) / group.size();
  double chi2 = 0.0;
  for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double dof = group.size() - 1.0;
  CHECK(std::abs(chi2 - dof) <= 4.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("sampling determinism and d=0") {
  const auto arch = build_architecture(4, 3, LayoutKind::brickwork1d, 0);
  const auto c1 =
      sample_clifford_circuit(arch, CircuitNoise::none_noise(), Rng(123));
  const auto c2 =
      sample_clifford_circuit(arch, CircuitNoise::none_noise(), Rng(123));
  for (int m = 0; m < 3; ++m) {
    for (std::size_t g = 0; g < c1.layers[m].size(); ++g) {
      CHECK(c1.layers[m][g].clifford_id == c2.layers[m][g].clifford_id);
    }
  }
  const auto arch0 = build_architecture(4, 0, LayoutKind::brickwork1d, 0);
  CHECK(sample_clifford_circuit(arch0, CircuitNoise::none_noise(), Rng(1))
            .gate_count() == 0);
}

namespace {

CircuitRealization clifford_id_circuit(int n, int d, CircuitNoise noise) {
  const CliffordGroup& group = CliffordGroup::instance();
  const int identity_id = group.find(clifford_identity());
  const auto arch = build_architecture(n, d, LayoutKind::brickwork1d, 0);
  CircuitRealization circuit;
  circuit.architecture = arch;
  circuit.noise = std::move(noise);
  circuit.layers.resize(d);
  for (int m = 0; m < d; ++m) {
    for (const auto& [a, b] : arch.layers[m]) {
      Gate2Q gate;
      gate.a = a;
      gate.b = b;
      gate.clifford_id = identity_id;
      gate.u = group.elements()[identity_id].unitary;
      circuit.layers[m].push_back(gate);
    }
  }
  return circuit;
}

int find_h_tensor_h() {
  const CliffordGroup& group = CliffordGroup::instance();
  CliffordElement h1 = clifford_identity();
  h1.images[0] = {0, 1, 0};
  h1.images[1] = {1, 0, 0};
  CliffordElement h2 = clifford_identity();
  h2.images[2] = {0, 2, 0};
  h2.images[3] = {2, 0, 0};
  return group.find(compose(h1, h2));
}

}  // namespace

TEST_CASE("noiseless distributions") {
  SUBCASE("identity circuit is a point mass with Z = 1") {
    const auto circuit = clifford_id_circuit(4, 2, CircuitNoise::none_noise());
    const auto result = noiseless_clifford_distribution(circuit);
    CHECK(result.distribution.p[0] == doctest::Approx(1.0));
    CHECK(result.collision == doctest::Approx(1.0));
  }
  SUBCASE("layer of H (x) H gives the uniform distribution") {
    auto circuit = clifford_id_circuit(4, 1, CircuitNoise::none_noise());
    const int hh = find_h_tensor_h();
    REQUIRE(hh >= 0);
    for (auto& gate : circuit.layers[0]) {
      gate.clifford_id = hh;
      gate.u = CliffordGroup::instance().elements()[hh].unitary;
    }
    const auto result = noiseless_clifford_distribution(circuit);
    CHECK(result.collision == doctest::Approx(1.0 / 16));
    for (double px : result.distribution.p) {
      CHECK(px == doctest::Approx(1.0 / 16));
    }
  }
  SUBCASE("random circuits match the dense oracle to 1e-10") {
    Rng rng(999);
    for (int trial = 0; trial < 10; ++trial) {
      const auto arch = build_architecture(
          4, 3, LayoutKind::random_matching_per_layer, 50 + trial);
      const auto circuit = sample_clifford_circuit(
          arch, CircuitNoise::none_noise(), rng.derive(trial));
      const auto result = noiseless_clifford_distribution(circuit);
      const auto dense = output_distribution(simulate_noisy_circuit(circuit));
      for (std::size_t x = 0; x < dense.p.size(); ++x) {
        CHECK(std::abs(result.distribution.p[x] - dense.p[x]) <= 1e-10);
      }
      CHECK(std::abs(result.collision - collision_probability(dense)) <=
            1e-10);
    }
  }
  SUBCASE("nonzero probabilities are equal powers of 1/2") {
    Rng rng(1000);
    for (int trial = 0; trial < 20; ++trial) {
      const auto arch = build_architecture(
          6, 2, LayoutKind::random_matching_per_layer, 80 + trial);
      const auto circuit = sample_clifford_circuit(
          arch, CircuitNoise::none_noise(), rng.derive(trial));
      const auto result = noiseless_clifford_distribution(circuit);
      std::set<double> nonzero;
      for (double px : result.distribution.p) {
        if (px > 0) nonzero.insert(px);
      }
      REQUIRE(nonzero.size() == 1);
      const double value = *nonzero.begin();
      const double k = -std::log2(value);
      CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-12));
      CHECK(result.collision == doctest::Approx(value));
    }
  }
}

TEST_CASE("noisy exact mode") {
  SUBCASE("zero noise equals the noiseless distribution") {
    Rng rng(2);
    const auto arch = build_architecture(4, 2, LayoutKind::brickwork1d, 0);
    const auto circuit = sample_clifford_circuit(
        arch, CircuitNoise::pauli(PauliChannel(0, 0, 0)), rng);
    const auto noisy = noisy_clifford_distribution(circuit);
    const auto clean = noiseless_clifford_distribution(circuit);
    for (std::size_t x = 0; x < clean.distribution.p.size(); ++x) {
      CHECK(std::abs(noisy.distribution.p[x] - clean.distribution.p[x]) <=
            1e-12);
    }
  }
  SUBCASE("dephasing leaves the identity circuit's output unchanged") {
    auto locations = NoiseLocationSet::empty(2, 2);
    locations.sites_per_layer[0] = {1};
    const auto circuit = clifford_id_circuit(
        2, 2, CircuitNoise::heralded_dephasing(0.4, locations));
    const auto noisy = noisy_clifford_distribution(circuit);
    CHECK(noisy.distribution.p[0] == doctest::Approx(1.0));
    CHECK(noisy.collision == doctest::Approx(1.0));
  }
  SUBCASE("pauli noise matches the dense oracle to 1e-10") {
    Rng rng(3);
    for (int trial = 0; trial < 8; ++trial) {
      const auto arch = build_architecture(
          4, 2, LayoutKind::random_matching_per_layer, 200 + trial);
      const auto circuit = sample_clifford_circuit(
          arch, CircuitNoise::pauli(PauliChannel(0.05, 0.05, 0.05)),
          rng.derive(trial));
      const auto noisy = noisy_clifford_distribution(circuit);
      const auto dense = output_distribution(simulate_noisy_circuit(circuit));
      for (std::size_t x = 0; x < dense.p.size(); ++x) {
        CHECK(std::abs(noisy.distribution.p[x] - dense.p[x]) <= 1e-10);
      }
    }
  }
  SUBCASE("heralded dephasing matches the dense oracle to 1e-10") {
    Rng rng(4);
    for (int trial = 0; trial < 8; ++trial) {
      const auto arch = build_architecture(4, 3, LayoutKind::brickwork1d, 0);
      const auto locations = sample_noise_locations(
          arch, HeraldedDephasingSpec(0.5, 0.3), rng.derive(1000 + trial));
      const auto circuit = sample_clifford_circuit(
          arch, CircuitNoise::heralded_dephasing(0.3, locations),
          rng.derive(trial));
      const auto noisy = noisy_clifford_distribution(circuit);
      const auto dense = output_distribution(simulate_noisy_circuit(circuit));
      for (std::size_t x = 0; x < dense.p.size(); ++x) {
        CHECK(std::abs(noisy.distribution.p[x] - dense.p[x]) <= 1e-10);
      }
    }
  }
  SUBCASE("term cap raises a resource error") {
    Rng rng(5);
    const auto arch = build_architecture(4, 1, LayoutKind::brickwork1d, 0);
    const auto circuit = sample_clifford_circuit(
        arch, CircuitNoise::pauli(PauliChannel(0.1, 0.1, 0.1)), rng);
    CliffordNoisyOptions opts;
    opts.exact_term_cap = 16;
    CHECK_THROWS_AS(noisy_clifford_distribution(circuit, opts), ResourceError);
  }
}

TEST_CASE("monotonicity property sweep") {
  Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    Rng trial_rng = rng.derive(trial);
    const int n = trial_rng.uniform_below(2) == 0 ? 2 : 4;
    const int d = 1 + static_cast<int>(trial_rng.uniform_below(4));
    const double qx = 0.1 * trial_rng.uniform();
    const double qy = 0.1 * trial_rng.uniform();
    const double qz = 0.1 * trial_rng.uniform();
    const auto arch = build_architecture(
        n, d, LayoutKind::random_matching_per_layer, trial_rng());
    const auto circuit = sample_clifford_circuit(
        arch, CircuitNoise::pauli(PauliChannel(qx, qy, qz)),
        trial_rng.derive(0));
    const auto report = verify_noise_monotonicity(circuit);
    CHECK(report.holds);
    CHECK(report.z_noisy >= std::ldexp(1.0, -n) - 1e-12);
  }
}

TEST_CASE("mc collision estimator agrees with exact mode") {
  Rng rng(7);
  int nontrivial = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto arch = build_architecture(
        4, 2, LayoutKind::random_matching_per_layer, 300 + trial);
    const auto circuit = sample_clifford_circuit(
        arch, CircuitNoise::pauli(PauliChannel(0.08, 0.04, 0.06)),
        rng.derive(trial));
    const auto exact = noisy_clifford_distribution(circuit);
    const McEstimate est =
        estimate_clifford_collision_mc(circuit, 20000, rng.derive(100 + trial));
    CHECK(std::abs(est.value - exact.collision) <=
          4.0 * est.stderror + 1e-12);
    if (est.stderror > 0) ++nontrivial;
  }
  CHECK(nontrivial >= 1);  // at least one circuit with noise-sensitive Z
}

TEST_CASE("extreme-event witness reproduces the single-qubit closed form") {
  Rng rng(8);
  const PauliChannel channel(0.07, 0.05, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial;
    const auto arch = build_architecture(4, d, LayoutKind::brickwork1d, 0);
    const auto circuit = sample_z1_fixing_witness_circuit(
        arch, CircuitNoise::pauli(channel), rng.derive(trial));
    const auto noisy = noisy_clifford_distribution(circuit);
    const double p0 = marginal_zero_probability(noisy.distribution, 0);
    CHECK(std::abs(p0 - single_qubit_channel_power(channel, d)) <= 1e-10);
  }
}

TEST_CASE("two-design equivalence of Z between haar and clifford gates") {
  const auto arch = build_architecture(4, 2, LayoutKind::brickwork1d, 0);
  const CircuitNoise noise =
      CircuitNoise::pauli(PauliChannel(0.05, 0.05, 0.05));
  const long samples = 2500;
  Rng rng(4000);

  double haar_sum = 0.0, haar_sq = 0.0;
  double cliff_sum = 0.0, cliff_sq = 0.0;
  for (long k = 0; k < samples; ++k) {
    const auto haar_circ = sample_haar_circuit(arch, noise, rng.derive(2 * k));
    const double zh = collision_probability(
        output_distribution(simulate_noisy_circuit(haar_circ)));
    haar_sum += zh;
    haar_sq += zh * zh;
    const auto cliff_circ =
        sample_clifford_circuit(arch, noise, rng.derive(2 * k + 1));
    const double zc = noisy_clifford_distribution(cliff_circ).collision;
    cliff_sum += zc;
    cliff_sq += zc * zc;
  }
  const double mh = haar_sum / samples;
  const double mc = cliff_sum / samples;
  const double vh = haar_sq / samples - mh * mh;
  const double vc = cliff_sq / samples - mc * mc;
  const double combined = std::sqrt((vh + vc) / samples);
  CHECK(std::abs(mh - mc) <= 4.0 * combined);
}

TEST_CASE("non-clifford gates are rejected by the stabilizer engine") {
  Rng rng(9);
  const auto arch = build_architecture(2, 1, LayoutKind::brickwork1d, 0);
  const auto circuit =
      sample_haar_circuit(arch, CircuitNoise::none_noise(), rng);
  CHECK_THROWS_AS(noiseless_clifford_distribution(circuit), ValidationError);
}
