#pragma once

#include <string>

#include "nrc/noise.hpp"

namespace nrc {
namespace bounds {

/// Lower bound on E[delta]: (1 - 2b)^{2d} / (4 * 30^d), with the
/// depolarizing-class branch (b = 1/2) returning exactly 0 for d >= 1.
double tvd_lower_bound(const PauliChannel& channel, int d);
double tvd_lower_bound_from_b(double b, int d);

/// a = -2 log(1 - 2b) + log 30; diverges at b = 1/2.
double typicality_rate_a(double b);

struct TypicalityTail {
  double value = 0.0;        // 8 e^{-ad} + 16 e^{(2a + log 4) d} / n
  double threshold = 0.0;    // e^{-2ad}, the TVD value the tail refers to
  double depth_window = 0.0; // log n / (2a + log 4)
  bool saturated = false;    // b = 1/2: a diverges, tail degenerate
  std::string note;
};

/// Tail bound on Pr[delta < e^{-2ad}].
TypicalityTail typicality_tail(long n, int d, const PauliChannel& channel);

/// Upper bound on E[delta]: (3^{2/3} / 2) n^{1/3} e^{-gamma p d / 3} with
/// gamma = 8 q (1 - q) / 3.
double tvd_upper_bound(int n, int d, double p, double q);

/// Anticoncentration threshold 2^{-n} e^{-n / (8 * 30^d)} below which
/// output probabilities concentrate at sublogarithmic depth.
double anticoncentration_threshold(int n, int d);
/// Noisy variant: 30^{-d} replaced by e^{-ad} with a = -2 log(1-2b) + log 30.
double anticoncentration_threshold_noisy(int n, int d, double b);

struct ReferenceConstants {
  double haar_collision = 0.0;          // 2 / (2^n + 1)
  double porter_thomas_tvd_floor = 0.0; // e^{-1}
  double mu_upper = 0.0;                // 2.48
};

ReferenceConstants reference_constants(int n);

/// Lower bound on mu_i = -E log p_{i0}: log 2 + e^{-ad}/4.
double mu_lower(int d, double b);

}  // namespace bounds
}  // namespace nrc
