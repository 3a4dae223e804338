#include "nrc/clifford.hpp"

#include <bit>
#include <cmath>
#include <deque>

#include "nrc/errors.hpp"

namespace nrc {

namespace {

int popcount2(std::uint8_t v) { return std::popcount(static_cast<unsigned>(v & 3u)); }

/// Phase-tracked two-qubit Pauli i^phase X^x Z^z (phase mod 4).
struct PhasedPauli2 {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  std::uint8_t phase = 0;
};

PhasedPauli2 multiply(const PhasedPauli2& lhs, const PhasedPauli2& rhs) {
  // Z^zl X^xr = (-1)^{|zl & xr|} X^xr Z^zl
  const std::uint8_t phase =
      (lhs.phase + rhs.phase + 2 * popcount2(lhs.z & rhs.x)) & 3u;
  return {static_cast<std::uint8_t>(lhs.x ^ rhs.x),
          static_cast<std::uint8_t>(lhs.z ^ rhs.z), phase};
}

PhasedPauli2 to_phased(const PauliImage& img) {
  return {img.x, img.z,
          static_cast<std::uint8_t>((popcount2(img.x & img.z) + 2 * img.sign) & 3u)};
}

}  // namespace

std::uint32_t CliffordElement::key() const {
  std::uint32_t key = 0;
  for (int g = 0; g < 4; ++g) {
    const std::uint32_t packed = static_cast<std::uint32_t>(images[g].x) |
                                 (static_cast<std::uint32_t>(images[g].z) << 2) |
                                 (static_cast<std::uint32_t>(images[g].sign) << 4);
    key |= packed << (5 * g);
  }
  return key;
}

PauliImage conjugate_pauli(const CliffordElement& e, std::uint8_t x,
                           std::uint8_t z, std::uint8_t sign) {
  PhasedPauli2 acc{0, 0,
                   static_cast<std::uint8_t>((popcount2(x & z) + 2 * sign) & 3u)};
  if (x & 1) acc = multiply(acc, to_phased(e.images[0]));
  if (z & 1) acc = multiply(acc, to_phased(e.images[1]));
  if (x & 2) acc = multiply(acc, to_phased(e.images[2]));
  if (z & 2) acc = multiply(acc, to_phased(e.images[3]));
  const std::uint8_t canonical = popcount2(acc.x & acc.z) & 3u;
  const std::uint8_t diff = (acc.phase - canonical) & 3u;
  // diff is 0 or 2 for any Hermitian input conjugated by a Clifford
  return {acc.x, acc.z, static_cast<std::uint8_t>(diff >> 1)};
}

CliffordElement compose(const CliffordElement& b, const CliffordElement& a) {
  CliffordElement c;
  for (int g = 0; g < 4; ++g) {
    const PauliImage& img = a.images[g];
    c.images[g] = conjugate_pauli(b, img.x, img.z, img.sign);
  }
  c.unitary = b.unitary * a.unitary;
  return c;
}

CliffordElement clifford_identity() {
  CliffordElement e;
  e.images = {PauliImage{1, 0, 0}, PauliImage{0, 1, 0}, PauliImage{2, 0, 0},
              PauliImage{0, 2, 0}};
  e.unitary = Eigen::Matrix4cd::Identity();
  return e;
}

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

Matrix4cd kron2(const Matrix2cd& high, const Matrix2cd& low) {
  Matrix4cd out;
  for (int hr = 0; hr < 2; ++hr) {
    for (int hc = 0; hc < 2; ++hc) {
      for (int lr = 0; lr < 2; ++lr) {
        for (int lc = 0; lc < 2; ++lc) {
          out(2 * hr + lr, 2 * hc + lc) = high(hr, hc) * low(lr, lc);
        }
      }
    }
  }
  return out;
}

std::vector<CliffordElement> clifford_generators() {
  const Complex i{0.0, 1.0};
  Matrix2cd h2;
  h2 << 1, 1, 1, -1;
  h2 /= std::sqrt(2.0);
  Matrix2cd s2;
  s2 << 1, 0, 0, i;
  const Matrix2cd id2 = Matrix2cd::Identity();

  // Leg 1 is the low basis bit: gate basis index m = bit(leg1) + 2 bit(leg2).
  CliffordElement h1 = clifford_identity();
  h1.images[0] = {0, 1, 0};  // X1 -> Z1
  h1.images[1] = {1, 0, 0};  // Z1 -> X1
  h1.unitary = kron2(id2, h2);

  CliffordElement s1 = clifford_identity();
  s1.images[0] = {1, 1, 0};  // X1 -> Y1
  s1.unitary = kron2(id2, s2);

  CliffordElement hb = clifford_identity();
  hb.images[2] = {0, 2, 0};
  hb.images[3] = {2, 0, 0};
  hb.unitary = kron2(h2, id2);

  CliffordElement sb = clifford_identity();
  sb.images[2] = {2, 2, 0};
  sb.unitary = kron2(s2, id2);

  CliffordElement cnot = clifford_identity();
  cnot.images[0] = {3, 0, 0};  // X1 -> X1 X2
  cnot.images[3] = {0, 3, 0};  // Z2 -> Z1 Z2
  cnot.unitary = Matrix4cd::Zero();
  // |b1 b2> -> |b1, b2 xor b1>: permutation 0->0, 1->3, 2->2, 3->1
  cnot.unitary(0, 0) = 1;
  cnot.unitary(3, 1) = 1;
  cnot.unitary(2, 2) = 1;
  cnot.unitary(1, 3) = 1;

  return {h1, s1, hb, sb, cnot};
}

}  // namespace

CliffordGroup::CliffordGroup() : key_to_id_(std::size_t{1} << 20, -1) {
  const std::vector<CliffordElement> gens = clifford_generators();
  const CliffordElement id = clifford_identity();
  elements_.push_back(id);
  key_to_id_[id.key()] = 0;

  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop_front();
    for (const CliffordElement& gen : gens) {
      CliffordElement next = compose(gen, elements_[cur]);
      const std::uint32_t key = next.key();
      if (key_to_id_[key] < 0) {
        key_to_id_[key] = static_cast<std::int32_t>(elements_.size());
        frontier.push_back(static_cast<int>(elements_.size()));
        elements_.push_back(std::move(next));
      }
    }
  }
  if (elements_.size() != 11520) {
    throw std::logic_error("two-qubit Clifford enumeration did not close at "
                           "11520 elements");
  }

  lut_.resize(elements_.size());
  const PauliImage plus_z1{0, 1, 0};
  for (std::size_t id = 0; id < elements_.size(); ++id) {
    for (std::uint8_t in = 0; in < 16; ++in) {
      const std::uint8_t x = in & 3u;
      const std::uint8_t z = (in >> 2) & 3u;
      const PauliImage out = conjugate_pauli(elements_[id], x, z, 0);
      lut_[id][in] = static_cast<std::uint8_t>(out.x | (out.z << 2) |
                                               (out.sign << 4));
    }
    if (conjugate_pauli(elements_[id], 0, 1, 0) == plus_z1) {
      z1_fixing_ids_.push_back(static_cast<int>(id));
    }
  }
}

const CliffordGroup& CliffordGroup::instance() {
  static const CliffordGroup group;
  return group;
}

int CliffordGroup::find(const CliffordElement& e) const {
  return key_to_id_[e.key()];
}

namespace {

CircuitRealization sample_clifford_impl(const ArchitectureSpec& arch,
                                        CircuitNoise noise, Rng rng,
                                        bool z1_witness) {
  const CliffordGroup& group = CliffordGroup::instance();
  const auto& fixing = group.z1_fixing_ids();
  CircuitRealization circuit;
  circuit.architecture = arch;
  circuit.noise = std::move(noise);
  circuit.layers.resize(arch.d);
  std::uint64_t gate_index = 0;
  for (int m = 0; m < arch.d; ++m) {
    for (const auto& [a, b] : arch.layers[m]) {
      Rng gate_rng = rng.derive(gate_index++);
      Gate2Q gate;
      gate.a = a;
      gate.b = b;
      if (z1_witness && (a == 0 || b == 0)) {
        if (b == 0) std::swap(gate.a, gate.b);  // site 0 on the first leg
        gate.clifford_id =
            fixing[gate_rng.uniform_below(fixing.size())];
      } else {
        gate.clifford_id =
            static_cast<int>(gate_rng.uniform_below(group.size()));
      }
      gate.u = group.elements()[gate.clifford_id].unitary;
      circuit.layers[m].push_back(std::move(gate));
    }
  }
  return circuit;
}

}  // namespace

CircuitRealization sample_clifford_circuit(const ArchitectureSpec& arch,
                                           CircuitNoise noise, Rng rng) {
  return sample_clifford_impl(arch, std::move(noise), rng, false);
}

CircuitRealization sample_z1_fixing_witness_circuit(
    const ArchitectureSpec& arch, CircuitNoise noise, Rng rng) {
  return sample_clifford_impl(arch, std::move(noise), rng, true);
}

StabilizerTableau::StabilizerTableau(int n)
    : n_(n), x_(n, 0), z_(n, 0), sign_(n, 0) {
  if (n < 1 || n > 64) {
    throw ValidationError("stabilizer tableau supports 1..64 qubits");
  }
  for (int i = 0; i < n; ++i) z_[i] = std::uint64_t{1} << i;
}

void StabilizerTableau::apply_gate(int clifford_id, int a, int b) {
  const CliffordGroup& group = CliffordGroup::instance();
  const std::uint64_t mask_a = std::uint64_t{1} << a;
  const std::uint64_t mask_b = std::uint64_t{1} << b;
  for (int row = 0; row < n_; ++row) {
    const std::uint8_t in =
        static_cast<std::uint8_t>(((x_[row] & mask_a) ? 1 : 0) |
                                  ((x_[row] & mask_b) ? 2 : 0) |
                                  ((z_[row] & mask_a) ? 4 : 0) |
                                  ((z_[row] & mask_b) ? 8 : 0));
    if (in == 0) continue;
    const std::uint8_t out = group.conjugate_bits(clifford_id, in);
    x_[row] = (x_[row] & ~(mask_a | mask_b)) | ((out & 1) ? mask_a : 0) |
              ((out & 2) ? mask_b : 0);
    z_[row] = (z_[row] & ~(mask_a | mask_b)) | ((out & 4) ? mask_a : 0) |
              ((out & 8) ? mask_b : 0);
    sign_[row] ^= (out >> 4) & 1;
  }
}

bool StabilizerTableau::generators_commute() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const int anti = (std::popcount(x_[i] & z_[j]) +
                        std::popcount(z_[i] & x_[j])) & 1;
      if (anti) return false;
    }
  }
  return true;
}

void StabilizerTableau::swap_rows(int i, int j) {
  std::swap(x_[i], x_[j]);
  std::swap(z_[i], z_[j]);
  std::swap(sign_[i], sign_[j]);
}

void StabilizerTableau::row_multiply(int i, int j) {
  // (-1)^{s_i} i^{|xi&zi|} X^xi Z^zi * (-1)^{s_j} i^{|xj&zj|} X^xj Z^zj
  const int phase =
      (std::popcount(x_[i] & z_[i]) + std::popcount(x_[j] & z_[j]) +
       2 * std::popcount(z_[i] & x_[j]) + 2 * (sign_[i] + sign_[j])) % 4;
  x_[i] ^= x_[j];
  z_[i] ^= z_[j];
  const int canonical = std::popcount(x_[i] & z_[i]) % 4;
  const int diff = ((phase - canonical) % 4 + 4) % 4;
  sign_[i] = static_cast<std::uint8_t>(diff >> 1);
}

StabilizerTableau evolve_zero_state(const CircuitRealization& circuit) {
  if (!circuit.all_clifford()) {
    throw ValidationError("stabilizer evolution requires Clifford gates only");
  }
  StabilizerTableau tableau(circuit.num_qubits());
  for (const auto& layer : circuit.layers) {
    for (const Gate2Q& gate : layer) {
      tableau.apply_gate(gate.clifford_id, gate.a, gate.b);
    }
  }
  return tableau;
}

StabilizerMeasurement analyze_tableau(const StabilizerTableau& tableau) {
  const int n = tableau.num_qubits();
  StabilizerTableau work = tableau;
  std::vector<std::uint64_t> combo(n);
  for (int i = 0; i < n; ++i) combo[i] = std::uint64_t{1} << i;

  auto row_mult_tracked = [&](int i, int j) {
    work.row_multiply(i, j);
    combo[i] ^= combo[j];
  };
  auto swap_tracked = [&](int i, int j) {
    if (i == j) return;
    work.swap_rows(i, j);
    std::swap(combo[i], combo[j]);
  };

  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    const std::uint64_t mask = std::uint64_t{1} << col;
    int pivot = -1;
    for (int row = rank; row < n; ++row) {
      if (work.row_x(row) & mask) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) continue;
    swap_tracked(rank, pivot);
    for (int row = 0; row < n; ++row) {
      if (row != rank && (work.row_x(row) & mask)) row_mult_tracked(row, rank);
    }
    ++rank;
  }

  StabilizerMeasurement meas;
  meas.n = n;
  meas.rank = rank;
  for (int row = rank; row < n; ++row) {
    meas.check_z.push_back(work.row_z(row));
    meas.check_sign.push_back(work.row_sign(row) ? 1 : 0);
    meas.check_combo.push_back(combo[row]);
  }
  return meas;
}

double StabilizerMeasurement::p_max() const { return std::ldexp(1.0, -rank); }

bool StabilizerMeasurement::supports(std::uint64_t x) const {
  return supports_with_syndrome(x, 0);
}

bool StabilizerMeasurement::supports_with_syndrome(
    std::uint64_t x, std::uint64_t syndrome) const {
  for (std::size_t k = 0; k < check_z.size(); ++k) {
    const int target =
        (check_sign[k] + std::popcount(check_combo[k] & syndrome)) & 1;
    if ((std::popcount(check_z[k] & x) & 1) != target) return false;
  }
  return true;
}

CliffordDistribution noiseless_clifford_distribution(
    const CircuitRealization& circuit) {
  const int n = circuit.num_qubits();
  if (n > 20) {
    throw ResourceError("full distribution extraction limited to 20 qubits");
  }
  const StabilizerMeasurement meas =
      analyze_tableau(evolve_zero_state(circuit));
  CliffordDistribution out;
  out.distribution.n = n;
  out.distribution.p.assign(std::size_t{1} << n, 0.0);
  const double p = meas.p_max();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (meas.supports(x)) out.distribution.p[x] = p;
  }
  out.collision = p;
  return out;
}

double noiseless_clifford_collision(const CircuitRealization& circuit) {
  return analyze_tableau(evolve_zero_state(circuit)).p_max();
}

namespace {

/// n-qubit Pauli mask: x part in bits [0, n), z part in bits [n, 2n).
struct FoldedChannel {
  int n = 0;
  std::vector<double> weight;  // dense over 4^n masks
};

std::uint64_t conjugate_mask_forward(std::uint64_t mask, int n,
                                     const CircuitRealization& circuit,
                                     int from_layer) {
  const CliffordGroup& group = CliffordGroup::instance();
  for (int m = from_layer; m < circuit.depth(); ++m) {
    for (const Gate2Q& gate : circuit.layers[m]) {
      const std::uint64_t xa = (mask >> gate.a) & 1;
      const std::uint64_t xb = (mask >> gate.b) & 1;
      const std::uint64_t za = (mask >> (n + gate.a)) & 1;
      const std::uint64_t zb = (mask >> (n + gate.b)) & 1;
      const std::uint8_t in =
          static_cast<std::uint8_t>(xa | (xb << 1) | (za << 2) | (zb << 3));
      if (in == 0) continue;
      const std::uint8_t out = group.conjugate_bits(gate.clifford_id, in);
      mask &= ~((std::uint64_t{1} << gate.a) | (std::uint64_t{1} << gate.b) |
                (std::uint64_t{1} << (n + gate.a)) |
                (std::uint64_t{1} << (n + gate.b)));
      mask |= (static_cast<std::uint64_t>(out & 1) << gate.a) |
              (static_cast<std::uint64_t>((out >> 1) & 1) << gate.b) |
              (static_cast<std::uint64_t>((out >> 2) & 1) << (n + gate.a)) |
              (static_cast<std::uint64_t>((out >> 3) & 1) << (n + gate.b));
    }
  }
  return mask;
}

/// Per noise location: the end-of-circuit images of the X/Y/Z insertions
/// and their probabilities.
struct FoldedLocation {
  std::array<std::uint64_t, 3> masks{};  // X, Y, Z images
  std::array<double, 3> probs{};
};

std::vector<FoldedLocation> fold_noise_locations(
    const CircuitRealization& circuit) {
  const int n = circuit.num_qubits();
  std::vector<FoldedLocation> folded;
  for (int m = 0; m < circuit.depth(); ++m) {
    auto fold_site = [&](int site, double px, double py, double pz) {
      FoldedLocation loc;
      const std::uint64_t x_mask = std::uint64_t{1} << site;
      const std::uint64_t z_mask = std::uint64_t{1} << (n + site);
      loc.masks[0] = conjugate_mask_forward(x_mask, n, circuit, m + 1);
      loc.masks[1] = conjugate_mask_forward(x_mask | z_mask, n, circuit, m + 1);
      loc.masks[2] = conjugate_mask_forward(z_mask, n, circuit, m + 1);
      loc.probs = {px, py, pz};
      folded.push_back(loc);
    };
    switch (circuit.noise.kind) {
      case CircuitNoise::Kind::none:
        break;
      case CircuitNoise::Kind::pauli_everywhere:
        for (int site = 0; site < n; ++site) {
          fold_site(site, circuit.noise.channel.qx, circuit.noise.channel.qy,
                    circuit.noise.channel.qz);
        }
        break;
      case CircuitNoise::Kind::heralded:
        for (int site : circuit.noise.locations.sites_per_layer[m]) {
          fold_site(site, 0.0, 0.0, circuit.noise.dephasing_q);
        }
        break;
    }
  }
  return folded;
}

FoldedChannel fold_channel(const CircuitRealization& circuit,
                           std::size_t term_cap) {
  const int n = circuit.num_qubits();
  const std::size_t terms = std::size_t{1} << (2 * n);
  if (terms > term_cap) {
    throw ResourceError(
        "folded Pauli channel would exceed the exact-mode term cap; use the "
        "Monte Carlo estimator");
  }
  FoldedChannel channel;
  channel.n = n;
  channel.weight.assign(terms, 0.0);
  channel.weight[0] = 1.0;
  std::vector<double> scratch(terms);
  for (const FoldedLocation& loc : fold_noise_locations(circuit)) {
    const double p0 = 1.0 - loc.probs[0] - loc.probs[1] - loc.probs[2];
    for (std::size_t g = 0; g < terms; ++g) {
      scratch[g] = p0 * channel.weight[g] +
                   loc.probs[0] * channel.weight[g ^ loc.masks[0]] +
                   loc.probs[1] * channel.weight[g ^ loc.masks[1]] +
                   loc.probs[2] * channel.weight[g ^ loc.masks[2]];
    }
    channel.weight.swap(scratch);
  }
  return channel;
}

std::uint64_t syndrome_of_mask(std::uint64_t mask, int n,
                               const StabilizerTableau& tableau) {
  const std::uint64_t x_part = mask & ((std::uint64_t{1} << n) - 1);
  const std::uint64_t z_part = mask >> n;
  std::uint64_t syndrome = 0;
  for (int row = 0; row < n; ++row) {
    const int anti = (std::popcount(x_part & tableau.row_z(row)) +
                      std::popcount(z_part & tableau.row_x(row))) & 1;
    syndrome |= static_cast<std::uint64_t>(anti) << row;
  }
  return syndrome;
}

}  // namespace

CliffordNoisyResult noisy_clifford_distribution(
    const CircuitRealization& circuit, const CliffordNoisyOptions& opts) {
  const int n = circuit.num_qubits();
  if (n > 20) {
    throw ResourceError("full distribution extraction limited to 20 qubits");
  }
  circuit.validate();
  const StabilizerTableau tableau = evolve_zero_state(circuit);
  const StabilizerMeasurement meas = analyze_tableau(tableau);
  const FoldedChannel channel = fold_channel(circuit, opts.exact_term_cap);

  // Group folded Pauli terms by the generator-sign syndrome they induce.
  std::vector<double> syndrome_weight(std::size_t{1} << n, 0.0);
  for (std::size_t g = 0; g < channel.weight.size(); ++g) {
    if (channel.weight[g] == 0.0) continue;
    syndrome_weight[syndrome_of_mask(g, n, tableau)] += channel.weight[g];
  }

  CliffordNoisyResult result;
  result.distribution.n = n;
  result.distribution.p.assign(std::size_t{1} << n, 0.0);
  const double p = meas.p_max();
  for (std::uint64_t syndrome = 0; syndrome < syndrome_weight.size();
       ++syndrome) {
    const double w = syndrome_weight[syndrome];
    if (w == 0.0) continue;
    for (std::uint64_t x = 0; x < result.distribution.p.size(); ++x) {
      if (meas.supports_with_syndrome(x, syndrome)) {
        result.distribution.p[x] += w * p;
      }
    }
  }
  result.collision = collision_probability(result.distribution);
  result.collision_noiseless = p;
  return result;
}

McEstimate estimate_clifford_collision_mc(const CircuitRealization& circuit,
                                          long num_pairs, Rng rng) {
  const int n = circuit.num_qubits();
  circuit.validate();
  const StabilizerTableau tableau = evolve_zero_state(circuit);
  const StabilizerMeasurement meas = analyze_tableau(tableau);
  const std::vector<FoldedLocation> locations = fold_noise_locations(circuit);

  auto sample_targets = [&](Rng& sample_rng) {
    std::uint64_t mask = 0;
    for (const FoldedLocation& loc : locations) {
      const double u = sample_rng.uniform();
      if (u < loc.probs[0]) {
        mask ^= loc.masks[0];
      } else if (u < loc.probs[0] + loc.probs[1]) {
        mask ^= loc.masks[1];
      } else if (u < loc.probs[0] + loc.probs[1] + loc.probs[2]) {
        mask ^= loc.masks[2];
      }
    }
    // Only the eliminated Z-check rows constrain the support; project the
    // generator syndrome onto their effective parity targets.
    const std::uint64_t syndrome = syndrome_of_mask(mask, n, tableau);
    std::uint64_t targets = 0;
    for (std::size_t k = 0; k < meas.check_combo.size(); ++k) {
      const std::uint64_t bit =
          (meas.check_sign[k] ^ std::popcount(meas.check_combo[k] & syndrome)) &
          1u;
      targets |= bit << k;
    }
    return targets;
  };

  // Trajectory supports are cosets of one subspace: they either coincide
  // (equal check targets) or are disjoint, so sum_x p1 p2 = p_max [t1 == t2].
  const double p = meas.p_max();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long k = 0; k < num_pairs; ++k) {
    Rng rng1 = rng.derive(2 * k);
    Rng rng2 = rng.derive(2 * k + 1);
    const double value = sample_targets(rng1) == sample_targets(rng2) ? p : 0.0;
    sum += value;
    sum_sq += value * value;
  }
  McEstimate est;
  est.samples = num_pairs;
  est.value = sum / num_pairs;
  const double var = std::max(0.0, sum_sq / num_pairs - est.value * est.value);
  est.stderror = num_pairs > 1 ? std::sqrt(var / (num_pairs - 1)) : 0.0;
  return est;
}

MonotonicityReport verify_noise_monotonicity(const CircuitRealization& circuit,
                                             const CliffordNoisyOptions& opts) {
  const CliffordNoisyResult result = noisy_clifford_distribution(circuit, opts);
  MonotonicityReport report;
  report.z_noisy = result.collision;
  report.z_noiseless = result.collision_noiseless;
  report.holds = result.collision <= result.collision_noiseless + 1e-10;
  return report;
}

}  // namespace nrc
