#include "nrc/architecture.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nrc/errors.hpp"

namespace nrc {

std::string to_string(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::brickwork1d:
      return "brickwork1d";
    case LayoutKind::fixed_matching:
      return "fixed_matching";
    case LayoutKind::random_matching_per_layer:
      return "random_matching_per_layer";
  }
  throw ValidationError("unknown layout kind");
}

LayoutKind layout_from_string(const std::string& token) {
  if (token == "brickwork1d") return LayoutKind::brickwork1d;
  if (token == "fixed_matching") return LayoutKind::fixed_matching;
  if (token == "random_matching_per_layer") {
    return LayoutKind::random_matching_per_layer;
  }
  throw ValidationError("unknown layout kind: " + token);
}

namespace {

Matching brickwork_layer(int n, int layer_index) {
  Matching pairs;
  pairs.reserve(n / 2);
  if (layer_index % 2 == 0) {
    for (int a = 0; a < n; a += 2) pairs.emplace_back(a, a + 1);
  } else {
    for (int a = 1; a < n; a += 2) pairs.emplace_back(a, (a + 1) % n);
  }
  return pairs;
}

Matching random_matching(int n, Rng& rng) {
  std::vector<int> sites(n);
  std::iota(sites.begin(), sites.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_below(i + 1));
    std::swap(sites[i], sites[j]);
  }
  Matching pairs;
  pairs.reserve(n / 2);
  for (int a = 0; a < n; a += 2) pairs.emplace_back(sites[a], sites[a + 1]);
  return pairs;
}

}  // namespace

ArchitectureSpec build_architecture(int n, int d, LayoutKind layout,
                                    std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("parallel architecture requires even n");
  }
  if (d < 0) throw ValidationError("depth must be nonnegative");

  ArchitectureSpec arch;
  arch.n = n;
  arch.d = d;
  arch.layout = layout;
  arch.seed = seed;
  arch.layers.reserve(d);

  Rng rng = Rng(seed).derive(0);
  Matching fixed;
  if (layout == LayoutKind::fixed_matching) fixed = random_matching(n, rng);

  for (int m = 0; m < d; ++m) {
    switch (layout) {
      case LayoutKind::brickwork1d:
        arch.layers.push_back(brickwork_layer(n, m));
        break;
      case LayoutKind::fixed_matching:
        arch.layers.push_back(fixed);
        break;
      case LayoutKind::random_matching_per_layer:
        arch.layers.push_back(random_matching(n, rng));
        break;
    }
  }
  return arch;
}

bool is_perfect_matching(const Matching& layer, int n) {
  std::vector<int> count(n, 0);
  for (const auto& [a, b] : layer) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b) return false;
    ++count[a];
    ++count[b];
  }
  return static_cast<int>(layer.size()) == n / 2 &&
         std::all_of(count.begin(), count.end(),
                     [](int c) { return c == 1; });
}

namespace {

std::set<int> grow_by_layer(const Matching& layer, const std::set<int>& in) {
  std::set<int> out = in;
  for (const auto& [a, b] : layer) {
    if (in.count(a)) out.insert(b);
    if (in.count(b)) out.insert(a);
  }
  return out;
}

void check_lightcone_args(const ArchitectureSpec& arch, int site, int k) {
  if (site < 0 || site >= arch.n) throw ValidationError("site out of range");
  if (k < 0 || k > arch.d) {
    throw ValidationError("lightcone depth k out of range [0, d]");
  }
}

}  // namespace

std::set<int> forward_lightcone(const ArchitectureSpec& arch, int site, int k) {
  check_lightcone_args(arch, site, k);
  std::set<int> cone{site};
  for (int m = 0; m < k; ++m) cone = grow_by_layer(arch.layers[m], cone);
  return cone;
}

std::set<int> backward_lightcone(const ArchitectureSpec& arch, int site,
                                 int k) {
  check_lightcone_args(arch, site, k);
  std::set<int> cone{site};
  for (int m = k - 1; m >= 0; --m) cone = grow_by_layer(arch.layers[m], cone);
  return cone;
}

std::set<int> lightcone_hull(const ArchitectureSpec& arch, int site) {
  std::set<int> cone = backward_lightcone(arch, site, arch.d);
  for (int m = 0; m < arch.d; ++m) cone = grow_by_layer(arch.layers[m], cone);
  return cone;
}

std::size_t NoiseLocationSet::total_locations() const {
  std::size_t total = 0;
  for (const auto& layer : sites_per_layer) total += layer.size();
  return total;
}

std::vector<int> NoiseLocationSet::per_site_counts() const {
  std::vector<int> counts(n, 0);
  for (const auto& layer : sites_per_layer) {
    for (int site : layer) ++counts[site];
  }
  return counts;
}

NoiseLocationSet NoiseLocationSet::without_final_layer() const {
  NoiseLocationSet out = *this;
  if (!out.sites_per_layer.empty()) out.sites_per_layer.back().clear();
  return out;
}

NoiseLocationSet NoiseLocationSet::empty(int n, int d) {
  NoiseLocationSet set;
  set.n = n;
  set.d = d;
  set.sites_per_layer.assign(d, {});
  return set;
}

NoiseLocationSet NoiseLocationSet::all(int n, int d) {
  NoiseLocationSet set = empty(n, d);
  for (auto& layer : set.sites_per_layer) {
    layer.resize(n);
    std::iota(layer.begin(), layer.end(), 0);
  }
  return set;
}

NoiseLocationSet sample_noise_locations(const ArchitectureSpec& arch,
                                        const HeraldedDephasingSpec& spec,
                                        Rng rng) {
  spec.validate();
  NoiseLocationSet set = NoiseLocationSet::empty(arch.n, arch.d);
  for (int m = 0; m < arch.d; ++m) {
    for (int site = 0; site < arch.n; ++site) {
      if (rng.bernoulli(spec.p)) set.sites_per_layer[m].push_back(site);
    }
  }
  return set;
}

std::string serialize_architecture(const ArchitectureSpec& arch,
                                   const NoiseLocationSet* noise) {
  if (noise && (noise->n != arch.n ||
                static_cast<int>(noise->sites_per_layer.size()) != arch.d)) {
    throw ValidationError("noise locations do not match architecture shape");
  }
  std::ostringstream out;
  out << arch.n << ' ' << arch.d << ' ' << to_string(arch.layout) << ' '
      << arch.seed << '\n';
  for (int m = 0; m < arch.d; ++m) {
    bool first = true;
    for (const auto& [a, b] : arch.layers[m]) {
      if (!first) out << ' ';
      out << a << '-' << b;
      first = false;
    }
    if (noise && !noise->sites_per_layer[m].empty()) {
      out << " |";
      for (int site : noise->sites_per_layer[m]) out << ' ' << site;
    }
    out << '\n';
  }
  return out.str();
}

ParsedArchitecture parse_architecture(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty architecture file");

  ParsedArchitecture result;
  {
    std::istringstream header(line);
    std::string layout_token;
    if (!(header >> result.arch.n >> result.arch.d >> layout_token >>
          result.arch.seed)) {
      throw ValidationError("malformed architecture header: " + line);
    }
    result.arch.layout = layout_from_string(layout_token);
  }
  result.noise = NoiseLocationSet::empty(result.arch.n, result.arch.d);

  for (int m = 0; m < result.arch.d; ++m) {
    if (!std::getline(in, line)) {
      throw ValidationError("architecture file truncated at layer " +
                            std::to_string(m));
    }
    std::istringstream layer_in(line);
    Matching pairs;
    std::string token;
    bool in_noise = false;
    while (layer_in >> token) {
      if (token == "|") {
        in_noise = true;
        continue;
      }
      if (in_noise) {
        const int site = std::stoi(token);
        if (site < 0 || site >= result.arch.n) {
          throw ValidationError("noise site out of range: " + token);
        }
        result.noise.sites_per_layer[m].push_back(site);
      } else {
        const auto dash = token.find('-');
        if (dash == std::string::npos) {
          throw ValidationError("malformed pair token: " + token);
        }
        pairs.emplace_back(std::stoi(token.substr(0, dash)),
                           std::stoi(token.substr(dash + 1)));
      }
    }
    if (!is_perfect_matching(pairs, result.arch.n)) {
      throw ValidationError("layer " + std::to_string(m) +
                            " is not a perfect matching");
    }
    result.arch.layers.push_back(std::move(pairs));
  }
  return result;
}

}  // namespace nrc
