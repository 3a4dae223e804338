#pragma once

#include <algorithm>
#include <cmath>

#include "nrc/errors.hpp"

namespace nrc {

/// Single-qubit Pauli error channel rho -> (1-q) rho + qx X rho X
/// + qy Y rho Y + qz Z rho Z.
struct PauliChannel {
  double qx = 0.0;
  double qy = 0.0;
  double qz = 0.0;

  PauliChannel() = default;
  PauliChannel(double qx_, double qy_, double qz_) : qx(qx_), qy(qy_), qz(qz_) {
    validate();
  }

  void validate() const {
    if (qx < 0 || qy < 0 || qz < 0) {
      throw ValidationError("Pauli channel rates must be nonnegative");
    }
    if (qx + qy + qz > 1.0 + 1e-15) {
      throw ValidationError("Pauli channel rates must sum to at most 1");
    }
  }

  double total() const { return qx + qy + qz; }

  /// b = min(qx+qy, qy+qz, qz+qx), clamped to [0, 1/2]. Channels with
  /// b >= 1/2 are in the depolarizing class where every bound that
  /// consumes b degenerates to its trivial branch.
  double bias_b() const {
    const double b = std::min({qx + qy, qy + qz, qz + qx});
    return std::min(b, 0.5);
  }

  static PauliChannel dephasing(double q) { return {0.0, 0.0, q}; }
  static PauliChannel depolarizing(double q_per_sector) {
    return {q_per_sector, q_per_sector, q_per_sector};
  }
};

/// Heralded dephasing: after each layer every site is independently
/// selected with probability p, and a dephasing channel with parameter q
/// acts at the selected sites (locations known, outcomes not).
struct HeraldedDephasingSpec {
  double p = 0.0;
  double q = 0.0;

  HeraldedDephasingSpec() = default;
  HeraldedDephasingSpec(double p_, double q_) : p(p_), q(q_) { validate(); }

  void validate() const {
    if (p < 0 || p > 1) throw ValidationError("heralding rate p must be in [0,1]");
    if (q < 0 || q > 0.5) {
      throw ValidationError("dephasing parameter q must be in [0,1/2]");
    }
  }

  double gamma() const { return 8.0 * q * (1.0 - q) / 3.0; }
  double beta() const { return 1.0 - gamma(); }
  double alpha() const { return 4.0 * q * (1.0 - q) / 3.0; }
};

}  // namespace nrc
