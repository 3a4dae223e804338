#include "nrc/statmech.hpp"

#include <cmath>

#include "nrc/errors.hpp"
#include "nrc/noise.hpp"

namespace nrc {

ConfigVector ConfigVector::uniform(int n) {
  ConfigVector v;
  v.n = n;
  v.w.assign(std::size_t{1} << n, 1.0);
  return v;
}

double ConfigVector::total_weight() const {
  double total = 0.0;
  for (double weight : w) total += weight;
  return total;
}

CompositeCoefficients CompositeCoefficients::from_q(double q) {
  HeraldedDephasingSpec spec(1.0, q);
  CompositeCoefficients c;
  c.alpha = spec.alpha();
  c.beta = spec.beta();
  c.gamma = spec.gamma();
  return c;
}

void apply_haar_gate_transition(ConfigVector& v, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= v.n || j >= v.n) {
    throw ValidationError("gate transition requires two distinct sites");
  }
  const std::size_t mask_i = std::size_t{1} << i;
  const std::size_t mask_j = std::size_t{1} << j;
  const std::size_t both = mask_i | mask_j;
  const std::size_t size = v.w.size();
  for (std::size_t base = 0; base < size; ++base) {
    if (base & both) continue;
    const double split = 0.4 * (v.w[base | mask_i] + v.w[base | mask_j]);
    v.w[base] += split;
    v.w[base | both] += split;
    v.w[base | mask_i] = 0.0;
    v.w[base | mask_j] = 0.0;
  }
}

void apply_dephasing_transition(ConfigVector& v, int site, double alpha,
                                double beta) {
  const std::size_t mask = std::size_t{1} << site;
  const std::size_t size = v.w.size();
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (idx & mask) {
      v.w[idx ^ mask] += alpha * v.w[idx];
      v.w[idx] *= beta;
    }
  }
}

void apply_dephasing_transition(ConfigVector& v, int site, double q) {
  const CompositeCoefficients c = CompositeCoefficients::from_q(q);
  apply_dephasing_transition(v, site, c.alpha, c.beta);
}

namespace {

struct SiteTransition {
  double alpha = 0.0;
  double beta = 1.0;
};

double run_statmech(const ArchitectureSpec& arch,
                    const NoiseLocationSet* locations,
                    const SiteTransition* averaged, double q,
                    const StatmechOptions& opts) {
  const int n = arch.n;
  if (n > opts.cap) {
    throw ResourceError("statmech vector limited to " +
                        std::to_string(opts.cap) + " sites");
  }
  if (!opts.leading_single_qubit_layer && arch.d == 0) {
    return 1.0;  // bare |0^n> is a point mass
  }
  const CompositeCoefficients c = CompositeCoefficients::from_q(q);

  ConfigVector v = ConfigVector::uniform(n);
  for (int m = 0; m < arch.d; ++m) {
    for (const auto& [a, b] : arch.layers[m]) {
      apply_haar_gate_transition(v, a, b);
    }
    if (m == arch.d - 1 && !opts.include_final_layer_noise) continue;
    if (averaged) {
      for (int site = 0; site < n; ++site) {
        apply_dephasing_transition(v, site, averaged->alpha, averaged->beta);
      }
    } else if (locations) {
      for (int site : locations->sites_per_layer[m]) {
        apply_dephasing_transition(v, site, c.alpha, c.beta);
      }
    }
  }
  // E[Z] = (1/3^n) * total weight (uniform start carries the 1/6^n state
  // normalization against the 2^n contraction factor).
  return v.total_weight() / std::pow(3.0, n);
}

}  // namespace

double exact_average_collision(const ArchitectureSpec& arch,
                               const NoiseLocationSet& locations, double q,
                               const StatmechOptions& opts) {
  if (locations.n != arch.n ||
      static_cast<int>(locations.sites_per_layer.size()) != arch.d) {
    throw ValidationError("noise locations do not match architecture");
  }
  return run_statmech(arch, &locations, nullptr, q, opts);
}

double exact_average_collision_heralded(const ArchitectureSpec& arch, double p,
                                        double q, const StatmechOptions& opts) {
  if (p < 0 || p > 1) throw ValidationError("heralding rate p must be in [0,1]");
  const CompositeCoefficients c = CompositeCoefficients::from_q(q);
  SiteTransition averaged;
  averaged.alpha = p * c.alpha;
  averaged.beta = 1.0 - p * c.gamma;
  return run_statmech(arch, nullptr, &averaged, q, opts);
}

std::pair<double, double> composite_channel_state(double q, int k) {
  if (k < 0) throw ValidationError("composite count k must be nonnegative");
  const double beta_k = std::pow(CompositeCoefficients::from_q(q).beta, k);
  return {(3.0 - beta_k) / 12.0, beta_k / 6.0};
}

double modified_ensemble_collision(int n, const std::vector<int>& t,
                                   double q) {
  if (static_cast<int>(t.size()) != n) {
    throw ValidationError("need one event count per site");
  }
  const double beta = CompositeCoefficients::from_q(q).beta;
  double product = 1.0;
  for (int ti : t) {
    if (ti < 0) throw ValidationError("event counts must be nonnegative");
    product *= 1.0 + std::pow(beta, ti) / 3.0;
  }
  return std::ldexp(product, -n);
}

double location_averaged_collision(int n, int d, double p, double q) {
  const double gamma = CompositeCoefficients::from_q(q).gamma;
  const double factor = 1.0 + std::pow(1.0 - p * gamma, d) / 3.0;
  return std::ldexp(std::pow(factor, n), -n);
}

double collision_upper_bound(int n, int d, double p, double q) {
  const double gamma = CompositeCoefficients::from_q(q).gamma;
  return std::ldexp(std::exp(n / 3.0 * std::exp(-gamma * p * d)), -n);
}

}  // namespace nrc
