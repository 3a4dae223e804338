#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "nrc/circuit.hpp"
#include "nrc/dense.hpp"
#include "nrc/rng.hpp"

namespace nrc {

/// Hermitian two-qubit Pauli in canonical form (-1)^sign i^{|x&z|} X^x Z^z,
/// with bit 0 of x/z addressing the gate's first leg and bit 1 the second.
struct PauliImage {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  std::uint8_t sign = 0;

  bool operator==(const PauliImage&) const = default;
};

/// A two-qubit Clifford element modulo global phase: the conjugation images
/// of the generators (X1, Z1, X2, Z2) plus one representative unitary.
struct CliffordElement {
  std::array<PauliImage, 4> images;  // X1, Z1, X2, Z2
  Eigen::Matrix4cd unitary;

  /// 20-bit canonical key (5 bits per image); uniquely identifies the
  /// element modulo global phase.
  std::uint32_t key() const;
};

/// Conjugates the canonical Pauli (x, z, sign) by the element, with exact
/// sign tracking.
PauliImage conjugate_pauli(const CliffordElement& e, std::uint8_t x,
                           std::uint8_t z, std::uint8_t sign);

/// compose(b, a) is the element of "apply a, then b".
CliffordElement compose(const CliffordElement& b, const CliffordElement& a);

CliffordElement clifford_identity();

/// The full two-qubit Clifford group (11520 elements modulo phase),
/// enumerated once by closure from {H1, S1, H2, S2, CNOT} and shared
/// read-only afterwards.
class CliffordGroup {
 public:
  static const CliffordGroup& instance();

  const std::vector<CliffordElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  /// Conjugation lookup: entry [id][in] with in = x1 + 2 x2 + 4 z1 + 8 z2
  /// packs the image bits in the same layout plus the sign at bit 4.
  std::uint8_t conjugate_bits(int id, std::uint8_t in) const {
    return lut_[id][in];
  }

  /// Ids of elements with C Z1 C^dag = +Z1 exactly.
  const std::vector<int>& z1_fixing_ids() const { return z1_fixing_ids_; }

  /// Exact rational fraction of Z1-fixing elements.
  long z1_fixing_count() const {
    return static_cast<long>(z1_fixing_ids_.size());
  }

  int find(const CliffordElement& e) const;  // -1 when absent

 private:
  CliffordGroup();

  std::vector<CliffordElement> elements_;
  std::vector<std::array<std::uint8_t, 16>> lut_;
  std::vector<int> z1_fixing_ids_;
  std::vector<std::int32_t> key_to_id_;
};

/// Uniform two-qubit Clifford gates on every pair of the architecture.
CircuitRealization sample_clifford_circuit(const ArchitectureSpec& arch,
                                           CircuitNoise noise, Rng rng);

/// Like sample_clifford_circuit, but every gate touching site 0 is oriented
/// with site 0 on its first leg and drawn uniformly from the Z1-fixing
/// subgroup, realizing the extreme event in which site 0 never entangles.
CircuitRealization sample_z1_fixing_witness_circuit(
    const ArchitectureSpec& arch, CircuitNoise noise, Rng rng);

/// Stabilizer tableau for n <= 64 qubits: rows are generators, bit-packed
/// X/Z parts plus a sign bit.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int n);

  int num_qubits() const { return n_; }
  std::uint64_t row_x(int i) const { return x_[i]; }
  std::uint64_t row_z(int i) const { return z_[i]; }
  bool row_sign(int i) const { return sign_[i]; }

  /// Conjugates every generator by a Clifford gate on sites (a, b).
  void apply_gate(int clifford_id, int a, int b);

  /// Generator commutation check (mutual commutativity of all rows).
  bool generators_commute() const;

  /// Multiplies row i by row j in place (exact Pauli product sign).
  void row_multiply(int i, int j);

  void swap_rows(int i, int j);

 private:
  int n_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> sign_;
};

/// Tableau of the evolved |0^n> under the circuit's Clifford gates.
StabilizerTableau evolve_zero_state(const CircuitRealization& circuit);

/// Measurement data extracted from a tableau by Gaussian elimination over
/// GF(2): the X-block rank r (all 2^r nonzero probabilities equal 2^-r)
/// and the Z-type parity constraints defining the support.
struct StabilizerMeasurement {
  int n = 0;
  int rank = 0;                          // p_max = 2^-rank
  std::vector<std::uint64_t> check_z;    // Z-type rows after elimination
  std::vector<std::uint8_t> check_sign;  // target parity per row
  std::vector<std::uint64_t> check_combo;  // provenance over original rows

  double p_max() const;
  bool supports(std::uint64_t x) const;
  /// Support membership with generator signs flipped by `syndrome`
  /// (bit i set = original generator i sign-flipped).
  bool supports_with_syndrome(std::uint64_t x, std::uint64_t syndrome) const;
};

StabilizerMeasurement analyze_tableau(const StabilizerTableau& tableau);

/// Noiseless Clifford output: the full distribution (n <= 20) and
/// Z(U, I) = p_max.
struct CliffordDistribution {
  OutputDistribution distribution;
  double collision = 0.0;
};
CliffordDistribution noiseless_clifford_distribution(
    const CircuitRealization& circuit);

/// Z(U, I) alone; works for any n <= 64.
double noiseless_clifford_collision(const CircuitRealization& circuit);

struct CliffordNoisyOptions {
  /// Exact mode folds every noise channel into one end-of-circuit Pauli
  /// channel over at most 4^n terms; this caps that support size.
  std::size_t exact_term_cap = std::size_t{1} << 24;
};

/// Exact noisy Clifford output distribution and Z(U, E), computed by
/// commuting all Pauli noise past the Clifford gates into a single folded
/// channel (every realization evolves as a stabilizer trajectory).
struct CliffordNoisyResult {
  OutputDistribution distribution;
  double collision = 0.0;
  double collision_noiseless = 0.0;
};
CliffordNoisyResult noisy_clifford_distribution(
    const CircuitRealization& circuit, const CliffordNoisyOptions& opts = {});

/// Two-trajectory Monte Carlo estimate of Z(U, E) for circuits whose
/// folded channel would exceed the exact-mode cap.
McEstimate estimate_clifford_collision_mc(const CircuitRealization& circuit,
                                          long num_pairs, Rng rng);

struct MonotonicityReport {
  double z_noisy = 0.0;
  double z_noiseless = 0.0;
  bool holds = false;
};

/// Checks Z(U, E) <= Z(U, I) + 1e-10 in exact mode.
MonotonicityReport verify_noise_monotonicity(
    const CircuitRealization& circuit, const CliffordNoisyOptions& opts = {});

}  // namespace nrc
