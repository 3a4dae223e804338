#include "nrc/circuit.hpp"

#include <algorithm>

#include "nrc/errors.hpp"
#include "nrc/haar.hpp"

namespace nrc {

std::size_t CircuitRealization::gate_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.size();
  return count;
}

bool CircuitRealization::all_clifford() const {
  for (const auto& layer : layers) {
    for (const Gate2Q& gate : layer) {
      if (gate.clifford_id < 0) return false;
    }
  }
  return true;
}

void CircuitRealization::validate(double tol) const {
  const std::size_t expected =
      static_cast<std::size_t>(architecture.n / 2) * architecture.d;
  if (gate_count() != expected) {
    throw ValidationError("gate count must equal (n/2) * d");
  }
  if (static_cast<int>(layers.size()) != architecture.d) {
    throw ValidationError("layer count must equal the architecture depth");
  }
  for (const auto& layer : layers) {
    for (const Gate2Q& gate : layer) {
      if (unitarity_defect(gate.u) > tol) {
        throw ValidationError("non-unitary gate in circuit realization");
      }
    }
  }
  if (circuit_noise_uses_locations()) {
    const auto& locs = noise.locations;
    if (locs.n != architecture.n ||
        static_cast<int>(locs.sites_per_layer.size()) != architecture.d) {
      throw ValidationError("noise locations do not match architecture");
    }
  }
}

bool CircuitRealization::circuit_noise_uses_locations() const {
  return noise.kind == CircuitNoise::Kind::heralded;
}

}  // namespace nrc
