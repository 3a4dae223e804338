#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nrc/circuit.hpp"
#include "nrc/rng.hpp"

namespace nrc {

using Complex = std::complex<double>;

/// Computational-basis output distribution over 2^n bitstrings.
struct OutputDistribution {
  int n = 0;
  std::vector<double> p;

  std::size_t dim() const { return p.size(); }
};

/// Exact n-qubit density matrix, stored as vec(rho) in column-major order:
/// entry rho[r][c] lives at index r + (c << n), so qubit i occupies row
/// bit i and column bit n + i.
class DensityState {
 public:
  DensityState(int n, std::vector<Complex> vec);

  /// |0^n><0^n|.
  static DensityState zero_state(int n);

  int num_qubits() const { return n_; }
  const std::vector<Complex>& data() const { return vec_; }
  std::vector<Complex>& data() { return vec_; }

  Complex entry(std::size_t row, std::size_t col) const {
    return vec_[row + (col << n_)];
  }

  double trace() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;  // diagonalizes; small n only

  /// Checks Hermiticity/trace to 1e-10 and PSD to -1e-8 slack.
  void check_invariants() const;

  Eigen::MatrixXcd to_matrix() const;

 private:
  int n_;
  std::vector<Complex> vec_;
};

struct DenseLimits {
  int cap = 10;  // density matrices hold 4^n entries; hard ceiling 12

  void validate_qubits(int n) const;
};

/// Applies the 4x4 unitary u to qubits (a, b) of a k-qubit state vector,
/// with basis index m = bit(a) + 2*bit(b).
void apply_two_qubit_unitary(std::vector<Complex>& psi, int num_qubits,
                             const Eigen::Matrix4cd& u, int a, int b);

/// Pauli error channel acting on one site of a density state, in place.
void apply_pauli_channel(DensityState& state, int site,
                         const PauliChannel& channel);

/// Dephasing channel rho -> (1-q) rho + q Z rho Z on one site, in place.
void apply_dephasing(DensityState& state, int site, double q);

/// Exact propagation of a noisy circuit: per layer, the gate layer
/// followed by the noise layer (including after the final layer).
DensityState simulate_noisy_circuit(const CircuitRealization& circuit,
                                    const DenseLimits& limits = {});
DensityState simulate_noisy_circuit(const CircuitRealization& circuit,
                                    DensityState initial,
                                    const DenseLimits& limits = {});

/// Diagonal of the density matrix, clamped and renormalized. Throws
/// CorruptedStateError if the diagonal is further than 1e-8 from a
/// probability vector.
OutputDistribution output_distribution(const DensityState& state);

/// Noiseless circuits only: statevector propagation of |0^n>, which is
/// exact and quadratically cheaper than the density matrix.
std::vector<Complex> simulate_pure_circuit(const CircuitRealization& circuit);
OutputDistribution distribution_from_amplitudes(
    const std::vector<Complex>& psi);

/// One stochastic Pauli trajectory: unitaries applied exactly, one Pauli
/// sampled per noise location. Unbiased in expectation for the noisy
/// output distribution.
OutputDistribution simulate_trajectory(const CircuitRealization& circuit,
                                       Rng& rng);

/// Unbiased collision-probability estimate from independent trajectory
/// pairs: E[sum_x p1(x) p2(x)] = sum_x p(x)^2.
struct McEstimate {
  double value = 0.0;
  double stderror = 0.0;
  long samples = 0;
};
McEstimate estimate_collision_mc(const CircuitRealization& circuit,
                                 long num_pairs, Rng rng);

double tvd_to_uniform(const OutputDistribution& dist);
double collision_probability(const OutputDistribution& dist);
double marginal_zero_probability(const OutputDistribution& dist, int site);

/// Closed form for d applications of a Pauli channel on |0>:
/// p0(d) = 1/2 + (1/2) (1 - 2(qx+qy))^d.
double single_qubit_channel_power(const PauliChannel& channel, int d);

}  // namespace nrc
