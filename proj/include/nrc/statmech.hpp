#pragma once

#include <vector>

#include "nrc/architecture.hpp"

namespace nrc {

/// Real weights over the two-copy configuration basis {I,S}^n. Bit k of
/// the index set means S at site k; bit clear means I.
struct ConfigVector {
  int n = 0;
  std::vector<double> w;

  /// The uniform configuration mixture reached after one layer of
  /// single-qubit Haar gates on |0^n><0^n|^(x2) (weights folded so the
  /// final contraction carries the 1/3^n prefactor).
  static ConfigVector uniform(int n);

  double total_weight() const;
};

/// Coefficients of the dephasing-then-single-qubit-Haar composite acting
/// on the {I,S} sector: I -> I, S -> alpha I + beta S.
struct CompositeCoefficients {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;

  static CompositeCoefficients from_q(double q);
};

/// Two-qubit Haar gate transition on sites (i, j): configurations with
/// equal sectors are fixed; IS and SI each split into II and SS with
/// weight 2/5 apiece.
void apply_haar_gate_transition(ConfigVector& v, int i, int j);

/// Composite dephasing transition at one site: S-weight w becomes
/// beta * w at S plus alpha * w at I.
void apply_dephasing_transition(ConfigVector& v, int site, double alpha,
                                double beta);
void apply_dephasing_transition(ConfigVector& v, int site, double q);

struct StatmechOptions {
  /// Leading layer of single-qubit Haar gates. For d >= 1 the value is
  /// independent of this flag because the first two-qubit Haar layer
  /// absorbs it; it only distinguishes d = 0.
  bool leading_single_qubit_layer = true;
  /// When false, noise recorded after the final gate layer is skipped.
  /// The composite transition pairs every dephasing with a trailing
  /// single-qubit Haar average; a bare circuit measured right after its
  /// last noise layer is instead matched by dropping that layer, since
  /// dephasing commutes with the computational-basis measurement.
  bool include_final_layer_noise = true;
  int cap = 24;
};

/// Exact gate-ensemble-averaged collision probability E[Z] for a parallel
/// Haar circuit with dephasing at the given locations.
double exact_average_collision(const ArchitectureSpec& arch,
                               const NoiseLocationSet& locations, double q,
                               const StatmechOptions& opts = {});

/// Same, additionally averaged over Bernoulli(p) heralded locations
/// (exact: the per-site transition becomes I -> I, S -> p*alpha I +
/// (1 - p*gamma) S).
double exact_average_collision_heralded(const ArchitectureSpec& arch,
                                        double p, double q,
                                        const StatmechOptions& opts = {});

/// State coefficients (identity, swap) of k dephasing channels sandwiched
/// between k+1 single-qubit Haar gates on |0><0|^(x2):
/// ((3 - beta^k)/12, beta^k/6).
std::pair<double, double> composite_channel_state(double q, int k);

/// Modified (single-qubit + SWAP) ensemble collision probability for
/// per-site dephasing event counts t: 2^-n prod_i (1 + beta^{t_i}/3).
double modified_ensemble_collision(int n, const std::vector<int>& t, double q);

/// Location-averaged modified ensemble value:
/// 2^-n [1 + (1 - p*gamma)^d / 3]^n.
double location_averaged_collision(int n, int d, double p, double q);

/// Collision-probability upper bound 2^-n exp[(n/3) e^{-gamma p d}].
double collision_upper_bound(int n, int d, double p, double q);

}  // namespace nrc
