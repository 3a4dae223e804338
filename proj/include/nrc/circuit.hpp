#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "nrc/architecture.hpp"
#include "nrc/noise.hpp"

namespace nrc {

/// A two-qubit gate placed on the ordered pair (a, b). The 4x4 matrix acts
/// on the basis |b_b b_a>, i.e. basis index m = bit(a) + 2*bit(b).
struct Gate2Q {
  int a = 0;
  int b = 0;
  Eigen::Matrix4cd u;
  int clifford_id = -1;  // >= 0 when drawn from the two-qubit Clifford group
};

/// Noise attached to a circuit realization. `pauli_everywhere` applies
/// `channel` at every site after every layer; `heralded` applies dephasing
/// with parameter q only at the recorded locations.
struct CircuitNoise {
  enum class Kind { none, pauli_everywhere, heralded };
  Kind kind = Kind::none;
  PauliChannel channel;
  double dephasing_q = 0.0;
  NoiseLocationSet locations;

  static CircuitNoise none_noise() { return {}; }
  static CircuitNoise pauli(const PauliChannel& ch) {
    CircuitNoise noise;
    noise.kind = Kind::pauli_everywhere;
    noise.channel = ch;
    return noise;
  }
  static CircuitNoise heralded_dephasing(double q, NoiseLocationSet locs) {
    CircuitNoise noise;
    noise.kind = Kind::heralded;
    noise.dephasing_q = q;
    noise.locations = std::move(locs);
    return noise;
  }
};

/// A fully sampled circuit: architecture, concrete gates per layer, noise,
/// and the seed the sample was drawn from.
struct CircuitRealization {
  ArchitectureSpec architecture;
  std::vector<std::vector<Gate2Q>> layers;
  CircuitNoise noise;
  std::uint64_t seed = 0;

  int num_qubits() const { return architecture.n; }
  int depth() const { return architecture.d; }
  std::size_t gate_count() const;

  bool all_clifford() const;
  bool circuit_noise_uses_locations() const;
  /// Throws ValidationError unless every gate is unitary to `tol` and the
  /// gate count equals (n/2) * d.
  void validate(double tol = 1e-12) const;
};

}  // namespace nrc
