#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nrc/noise.hpp"
#include "nrc/rng.hpp"

namespace nrc {

enum class LayoutKind { brickwork1d, fixed_matching, random_matching_per_layer };

std::string to_string(LayoutKind kind);
LayoutKind layout_from_string(const std::string& token);

/// One layer of two-qubit gates: a perfect matching of {0,...,n-1}.
/// Pairs are stored in the order they were constructed; pair order and
/// leg order carry no physical meaning for sampling, but downstream code
/// may rely on leg order to orient gate bases.
using Matching = std::vector<std::pair<int, int>>;

/// A parallel circuit architecture: n sites, d layers, every site gated
/// in every layer.
struct ArchitectureSpec {
  int n = 0;
  int d = 0;
  LayoutKind layout = LayoutKind::brickwork1d;
  std::uint64_t seed = 0;
  std::vector<Matching> layers;

  bool operator==(const ArchitectureSpec&) const = default;
};

/// Builds a d-layer parallel architecture.
///
/// brickwork1d alternates (0,1)(2,3)... with (1,2)(3,4)...(n-1,0);
/// fixed_matching draws one uniform matching from the seed and repeats it;
/// random_matching_per_layer draws a fresh uniform matching per layer.
ArchitectureSpec build_architecture(int n, int d, LayoutKind layout,
                                    std::uint64_t seed);

/// True iff every site occurs exactly once among the layer's pairs.
bool is_perfect_matching(const Matching& layer, int n);

/// Forward lightcone L_k(i): sites reachable from input site i through
/// gate layers 1..k.
std::set<int> forward_lightcone(const ArchitectureSpec& arch, int site, int k);

/// Backward lightcone L_k^dagger(i): sites whose layer-1 inputs can reach
/// output site i through layers k..1.
std::set<int> backward_lightcone(const ArchitectureSpec& arch, int site, int k);

/// L_d o L_d^dagger(i): backward from output site i, then forward again;
/// the set of output sites correlated with i through shared gates.
std::set<int> lightcone_hull(const ArchitectureSpec& arch, int site);

/// Heralded noise locations: for each layer m (1-based in the math,
/// 0-based here), the sorted sites dephased after that layer.
struct NoiseLocationSet {
  int n = 0;
  int d = 0;
  std::vector<std::vector<int>> sites_per_layer;

  bool operator==(const NoiseLocationSet&) const = default;

  std::size_t total_locations() const;
  /// Per-site event counts t_i under identity routing (qubit i's path
  /// stays at site i).
  std::vector<int> per_site_counts() const;
  /// Copy with the final layer's locations removed. Dephasing after the
  /// last gate layer commutes with the computational-basis measurement,
  /// so it cannot move the output distribution.
  NoiseLocationSet without_final_layer() const;

  static NoiseLocationSet empty(int n, int d);
  static NoiseLocationSet all(int n, int d);
};

/// Independent Bernoulli(p) inclusion of every (site, layer) location.
NoiseLocationSet sample_noise_locations(const ArchitectureSpec& arch,
                                        const HeraldedDephasingSpec& spec,
                                        Rng rng);

/// Line-oriented text serialization of an architecture plus optional
/// noise locations; grammar in docs/formats.md. Round-trips losslessly.
std::string serialize_architecture(const ArchitectureSpec& arch,
                                   const NoiseLocationSet* noise = nullptr);

struct ParsedArchitecture {
  ArchitectureSpec arch;
  NoiseLocationSet noise;  // empty layers when the file carries none
};

ParsedArchitecture parse_architecture(const std::string& text);

}  // namespace nrc
