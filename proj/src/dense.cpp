#include "nrc/dense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nrc/errors.hpp"

namespace nrc {

namespace {

constexpr int kHardQubitCap = 12;

std::size_t bit(std::size_t value, int index) { return (value >> index) & 1u; }

}  // namespace

DensityState::DensityState(int n, std::vector<Complex> vec)
    : n_(n), vec_(std::move(vec)) {
  if (vec_.size() != (std::size_t{1} << (2 * n_))) {
    throw ValidationError("density state storage must hold 4^n entries");
  }
}

DensityState DensityState::zero_state(int n) {
  std::vector<Complex> vec(std::size_t{1} << (2 * n), Complex{0.0, 0.0});
  vec[0] = Complex{1.0, 0.0};
  return DensityState(n, std::move(vec));
}

double DensityState::trace() const {
  const std::size_t dim = std::size_t{1} << n_;
  double tr = 0.0;
  for (std::size_t x = 0; x < dim; ++x) tr += vec_[x + (x << n_)].real();
  return tr;
}

double DensityState::hermiticity_defect() const {
  const std::size_t dim = std::size_t{1} << n_;
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) {
      worst = std::max(worst,
                       std::abs(vec_[r + (c << n_)] -
                                std::conj(vec_[c + (r << n_)])));
    }
  }
  return worst;
}

Eigen::MatrixXcd DensityState::to_matrix() const {
  const std::size_t dim = std::size_t{1} << n_;
  Eigen::MatrixXcd rho(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) rho(r, c) = vec_[r + (c << n_)];
  }
  return rho;
}

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_matrix());
  return solver.eigenvalues().minCoeff();
}

void DensityState::check_invariants() const {
  if (hermiticity_defect() > 1e-10) {
    throw CorruptedStateError("density state is not Hermitian to 1e-10");
  }
  if (std::abs(trace() - 1.0) > 1e-10) {
    throw CorruptedStateError("density state trace deviates beyond 1e-10");
  }
  if (min_eigenvalue() < -1e-8) {
    throw CorruptedStateError("density state has eigenvalue below -1e-8");
  }
}

void DenseLimits::validate_qubits(int n) const {
  if (cap > kHardQubitCap) {
    throw ValidationError("dense cap exceeds the hard ceiling of 12 qubits");
  }
  if (n > cap) {
    throw ResourceError("dense simulation limited to " + std::to_string(cap) +
                        " qubits (requested " + std::to_string(n) + ")");
  }
}

void apply_two_qubit_unitary(std::vector<Complex>& psi, int num_qubits,
                             const Eigen::Matrix4cd& u, int a, int b) {
  if (psi.size() != (std::size_t{1} << num_qubits) || a == b ||
      a >= num_qubits || b >= num_qubits || a < 0 || b < 0) {
    throw ValidationError("gate targets do not fit the state vector");
  }
  const std::size_t size = psi.size();
  const std::size_t mask_a = std::size_t{1} << a;
  const std::size_t mask_b = std::size_t{1} << b;
  const std::size_t pair_mask = mask_a | mask_b;
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (idx & pair_mask) continue;
    Complex amp[4] = {psi[idx], psi[idx | mask_a], psi[idx | mask_b],
                      psi[idx | pair_mask]};
    for (int row = 0; row < 4; ++row) {
      Complex acc{0.0, 0.0};
      for (int col = 0; col < 4; ++col) acc += u(row, col) * amp[col];
      const std::size_t target = idx | (row & 1 ? mask_a : 0u) |
                                 (row & 2 ? mask_b : 0u);
      psi[target] = acc;
    }
  }
}

void apply_pauli_channel(DensityState& state, int site,
                         const PauliChannel& ch) {
  auto& vec = state.data();
  const int n = state.num_qubits();
  const std::size_t row_mask = std::size_t{1} << site;
  const std::size_t col_mask = std::size_t{1} << (n + site);
  const std::size_t flip = row_mask | col_mask;

  // Population pairs mix at rate qx+qy; coherence pairs see qz as a sign.
  const double pop_keep = 1.0 - ch.qx - ch.qy;
  const double pop_swap = ch.qx + ch.qy;
  const double coh_keep = 1.0 - ch.total() - ch.qz;
  const double coh_swap = ch.qx - ch.qy;

  const std::size_t size = vec.size();
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (idx & row_mask) continue;  // visit each {idx, idx^flip} pair once
    const std::size_t partner = idx ^ flip;
    const Complex a = vec[idx];
    const Complex b = vec[partner];
    if (idx & col_mask) {
      vec[idx] = coh_keep * a + coh_swap * b;
      vec[partner] = coh_swap * a + coh_keep * b;
    } else {
      vec[idx] = pop_keep * a + pop_swap * b;
      vec[partner] = pop_swap * a + pop_keep * b;
    }
  }
}

void apply_dephasing(DensityState& state, int site, double q) {
  auto& vec = state.data();
  const int n = state.num_qubits();
  const double damp = 1.0 - 2.0 * q;
  const std::size_t size = vec.size();
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (bit(idx, site) != bit(idx, n + site)) vec[idx] *= damp;
  }
}

namespace {

void apply_noise_layer(DensityState& state, const CircuitNoise& noise,
                       int layer) {
  switch (noise.kind) {
    case CircuitNoise::Kind::none:
      break;
    case CircuitNoise::Kind::pauli_everywhere:
      for (int site = 0; site < state.num_qubits(); ++site) {
        apply_pauli_channel(state, site, noise.channel);
      }
      break;
    case CircuitNoise::Kind::heralded:
      for (int site : noise.locations.sites_per_layer[layer]) {
        apply_dephasing(state, site, noise.dephasing_q);
      }
      break;
  }
}

}  // namespace

DensityState simulate_noisy_circuit(const CircuitRealization& circuit,
                                    const DenseLimits& limits) {
  return simulate_noisy_circuit(
      circuit, DensityState::zero_state(circuit.num_qubits()), limits);
}

DensityState simulate_noisy_circuit(const CircuitRealization& circuit,
                                    DensityState state,
                                    const DenseLimits& limits) {
  const int n = circuit.num_qubits();
  limits.validate_qubits(n);
  circuit.validate();
  if (state.num_qubits() != n) {
    throw ValidationError("initial state size does not match circuit");
  }
  for (int m = 0; m < circuit.depth(); ++m) {
    for (const Gate2Q& gate : circuit.layers[m]) {
      apply_two_qubit_unitary(state.data(), 2 * n, gate.u, gate.a, gate.b);
      apply_two_qubit_unitary(state.data(), 2 * n, gate.u.conjugate(),
                              n + gate.a, n + gate.b);
    }
    apply_noise_layer(state, circuit.noise, m);
  }
  return state;
}

OutputDistribution output_distribution(const DensityState& state) {
  const int n = state.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  OutputDistribution dist;
  dist.n = n;
  dist.p.resize(dim);
  double sum = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    double px = state.entry(x, x).real();
    if (px < -1e-8) {
      throw CorruptedStateError("diagonal entry below -1e-8");
    }
    px = std::max(px, 0.0);
    dist.p[x] = px;
    sum += px;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw CorruptedStateError("distribution mass deviates beyond 1e-8");
  }
  for (double& px : dist.p) px /= sum;
  return dist;
}

std::vector<Complex> simulate_pure_circuit(const CircuitRealization& circuit) {
  if (circuit.noise.kind != CircuitNoise::Kind::none) {
    throw ValidationError("pure-state path requires a noiseless circuit");
  }
  circuit.validate();
  const int n = circuit.num_qubits();
  std::vector<Complex> psi(std::size_t{1} << n, Complex{0.0, 0.0});
  psi[0] = Complex{1.0, 0.0};
  for (const auto& layer : circuit.layers) {
    for (const Gate2Q& gate : layer) {
      apply_two_qubit_unitary(psi, n, gate.u, gate.a, gate.b);
    }
  }
  return psi;
}

OutputDistribution distribution_from_amplitudes(
    const std::vector<Complex>& psi) {
  OutputDistribution dist;
  dist.n = 0;
  while ((std::size_t{1} << dist.n) < psi.size()) ++dist.n;
  dist.p.resize(psi.size());
  for (std::size_t x = 0; x < psi.size(); ++x) dist.p[x] = std::norm(psi[x]);
  return dist;
}

namespace {

void apply_pauli_state(std::vector<Complex>& psi, int site, int pauli) {
  const std::size_t mask = std::size_t{1} << site;
  const std::size_t size = psi.size();
  switch (pauli) {
    case 1:  // X
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (!(idx & mask)) std::swap(psi[idx], psi[idx | mask]);
      }
      break;
    case 2:  // Y = i|1><0| - i|0><1|
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (!(idx & mask)) {
          const Complex lo = psi[idx];
          const Complex hi = psi[idx | mask];
          psi[idx] = Complex{0.0, -1.0} * hi;
          psi[idx | mask] = Complex{0.0, 1.0} * lo;
        }
      }
      break;
    case 3:  // Z
      for (std::size_t idx = 0; idx < size; ++idx) {
        if (idx & mask) psi[idx] = -psi[idx];
      }
      break;
    default:
      break;
  }
}

int sample_pauli(const PauliChannel& ch, Rng& rng) {
  const double u = rng.uniform();
  if (u < ch.qx) return 1;
  if (u < ch.qx + ch.qy) return 2;
  if (u < ch.total()) return 3;
  return 0;
}

}  // namespace

OutputDistribution simulate_trajectory(const CircuitRealization& circuit,
                                       Rng& rng) {
  circuit.validate();
  const int n = circuit.num_qubits();
  std::vector<Complex> psi(std::size_t{1} << n, Complex{0.0, 0.0});
  psi[0] = Complex{1.0, 0.0};
  for (int m = 0; m < circuit.depth(); ++m) {
    for (const Gate2Q& gate : circuit.layers[m]) {
      apply_two_qubit_unitary(psi, n, gate.u, gate.a, gate.b);
    }
    switch (circuit.noise.kind) {
      case CircuitNoise::Kind::none:
        break;
      case CircuitNoise::Kind::pauli_everywhere:
        for (int site = 0; site < n; ++site) {
          apply_pauli_state(psi, site, sample_pauli(circuit.noise.channel, rng));
        }
        break;
      case CircuitNoise::Kind::heralded:
        for (int site : circuit.noise.locations.sites_per_layer[m]) {
          if (rng.bernoulli(circuit.noise.dephasing_q)) {
            apply_pauli_state(psi, site, 3);
          }
        }
        break;
    }
  }
  return distribution_from_amplitudes(psi);
}

McEstimate estimate_collision_mc(const CircuitRealization& circuit,
                                 long num_pairs, Rng rng) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long k = 0; k < num_pairs; ++k) {
    Rng rng1 = rng.derive(2 * k);
    Rng rng2 = rng.derive(2 * k + 1);
    const OutputDistribution d1 = simulate_trajectory(circuit, rng1);
    const OutputDistribution d2 = simulate_trajectory(circuit, rng2);
    double dot = 0.0;
    for (std::size_t x = 0; x < d1.p.size(); ++x) dot += d1.p[x] * d2.p[x];
    sum += dot;
    sum_sq += dot * dot;
  }
  McEstimate est;
  est.samples = num_pairs;
  est.value = sum / num_pairs;
  const double var =
      std::max(0.0, sum_sq / num_pairs - est.value * est.value);
  est.stderror = num_pairs > 1 ? std::sqrt(var / (num_pairs - 1)) : 0.0;
  return est;
}

double tvd_to_uniform(const OutputDistribution& dist) {
  const double uniform = 1.0 / static_cast<double>(dist.p.size());
  double total = 0.0;
  for (double px : dist.p) total += std::abs(px - uniform);
  return 0.5 * total;
}

double collision_probability(const OutputDistribution& dist) {
  double z = 0.0;
  for (double px : dist.p) z += px * px;
  return z;
}

double marginal_zero_probability(const OutputDistribution& dist, int site) {
  if (site < 0 || site >= dist.n) throw ValidationError("site out of range");
  const std::size_t mask = std::size_t{1} << site;
  double total = 0.0;
  for (std::size_t x = 0; x < dist.p.size(); ++x) {
    if (!(x & mask)) total += dist.p[x];
  }
  return total;
}

double single_qubit_channel_power(const PauliChannel& channel, int d) {
  if (d < 0) throw ValidationError("depth must be nonnegative");
  channel.validate();
  return 0.5 + 0.5 * std::pow(1.0 - 2.0 * (channel.qx + channel.qy), d);
}

}  // namespace nrc
