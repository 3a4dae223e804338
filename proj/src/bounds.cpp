#include "nrc/bounds.hpp"

#include <cmath>
#include <limits>

#include "nrc/errors.hpp"

namespace nrc {
namespace bounds {

namespace {
const double kLog30 = std::log(30.0);
const double kLog4 = std::log(4.0);
}  // namespace

double tvd_lower_bound_from_b(double b, int d) {
  if (d < 0) throw ValidationError("depth must be nonnegative");
  if (b < 0.0 || b > 0.5) throw ValidationError("b must lie in [0, 1/2]");
  if (b == 0.5) return d == 0 ? 0.25 : 0.0;
  // log-space evaluation keeps deep-d scans clear of underflow
  const double log_value =
      2.0 * d * std::log1p(-2.0 * b) - std::log(4.0) - d * kLog30;
  return std::exp(log_value);
}

double tvd_lower_bound(const PauliChannel& channel, int d) {
  return tvd_lower_bound_from_b(channel.bias_b(), d);
}

double typicality_rate_a(double b) {
  if (b < 0.0 || b >= 0.5) {
    return std::numeric_limits<double>::infinity();
  }
  return -2.0 * std::log1p(-2.0 * b) + kLog30;
}

TypicalityTail typicality_tail(long n, int d, const PauliChannel& channel) {
  if (n < 1) throw ValidationError("n must be positive");
  if (d < 0) throw ValidationError("depth must be nonnegative");
  TypicalityTail tail;
  const double b = channel.bias_b();
  if (b >= 0.5) {
    tail.saturated = true;
    tail.value = std::numeric_limits<double>::infinity();
    tail.threshold = 0.0;
    tail.depth_window = 0.0;
    tail.note = "b = 1/2: rate a diverges, tail bound degenerate";
    return tail;
  }
  const double a = typicality_rate_a(b);
  tail.threshold = std::exp(-2.0 * a * d);
  tail.value = 8.0 * std::exp(-a * d) +
               16.0 * std::exp((2.0 * a + kLog4) * d) / static_cast<double>(n);
  tail.depth_window = std::log(static_cast<double>(n)) / (2.0 * a + kLog4);
  return tail;
}

double tvd_upper_bound(int n, int d, double p, double q) {
  HeraldedDephasingSpec spec(p, q);
  if (n < 1) throw ValidationError("n must be positive");
  if (d < 0) throw ValidationError("depth must be nonnegative");
  const double prefactor = 0.5 * std::pow(3.0, 2.0 / 3.0) *
                           std::cbrt(static_cast<double>(n));
  return prefactor * std::exp(-spec.gamma() * p * d / 3.0);
}

double anticoncentration_threshold(int n, int d) {
  if (d < 1) throw ValidationError("threshold defined for d >= 1");
  const double log_value =
      -n * std::log(2.0) - n / 8.0 * std::exp(-d * kLog30);
  return std::exp(log_value);
}

double anticoncentration_threshold_noisy(int n, int d, double b) {
  if (d < 1) throw ValidationError("threshold defined for d >= 1");
  const double a = typicality_rate_a(b);
  if (std::isinf(a)) return std::ldexp(1.0, -n);  // e^{-ad} -> 0
  const double log_value = -n * std::log(2.0) - n / 8.0 * std::exp(-a * d);
  return std::exp(log_value);
}

ReferenceConstants reference_constants(int n) {
  if (n < 1) throw ValidationError("n must be positive");
  ReferenceConstants ref;
  ref.haar_collision = 2.0 / (std::ldexp(1.0, n) + 1.0);
  ref.porter_thomas_tvd_floor = std::exp(-1.0);
  ref.mu_upper = 2.48;
  return ref;
}

double mu_lower(int d, double b) {
  const double a = typicality_rate_a(b);
  if (std::isinf(a)) return std::log(2.0);
  return std::log(2.0) + std::exp(-a * d) / 4.0;
}

}  // namespace bounds
}  // namespace nrc
