#include "tiletuner/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tiletuner {

std::vector<int> divisor_candidates(int n) {
  if (n < 1) throw std::invalid_argument("divisor_candidates: n must be >= 1");
  std::vector<int> low, high;
  for (int d = 1; static_cast<long long>(d) * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

namespace {

ParamSpec make_param(std::string name, int extent) {
  return {std::move(name), extent, divisor_candidates(extent)};
}

}  // namespace

ParamSpace build_space(Kernel kernel, std::string_view size_name) {
  const ProblemSize& size = find_size(kernel, size_name);
  ParamSpace space{kernel, size.name, {}};
  if (kernel == Kernel::mm3) {
    // Split axes of the three products, schedule order: E rows/cols, F
    // rows/cols, G rows/cols.
    const int extents[6] = {size.n, size.m, size.m, size.p, size.n, size.p};
    for (int i = 0; i < 6; ++i) {
      space.params.push_back(make_param("P" + std::to_string(i), extents[i]));
    }
  } else {
    space.params.push_back(make_param("P0", size.n));
    space.params.push_back(make_param("P1", size.n));
  }
  return space;
}

std::uint64_t space_size(const ParamSpace& space) {
  std::uint64_t total = 1;
  for (const ParamSpec& p : space.params) total *= p.candidates.size();
  return total;
}

Configuration config_at(const ParamSpace& space, std::uint64_t flat_index) {
  if (flat_index >= space_size(space)) {
    throw std::invalid_argument("config_at: flat index out of range");
  }
  Configuration config;
  config.values.resize(space.params.size());
  for (std::size_t i = space.params.size(); i-- > 0;) {
    const auto& cands = space.params[i].candidates;
    config.values[i] = cands[flat_index % cands.size()];
    flat_index /= cands.size();
  }
  return config;
}

namespace {

// Position of value in the ascending candidate list, or -1.
int candidate_index(const std::vector<int>& cands, int value) {
  auto it = std::lower_bound(cands.begin(), cands.end(), value);
  if (it == cands.end() || *it != value) return -1;
  return static_cast<int>(it - cands.begin());
}

}  // namespace

std::uint64_t index_of(const ParamSpace& space, const Configuration& config) {
  if (config.values.size() != space.params.size()) {
    throw std::invalid_argument("index_of: configuration arity mismatch");
  }
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < space.params.size(); ++i) {
    const auto& cands = space.params[i].candidates;
    int pos = candidate_index(cands, config.values[i]);
    if (pos < 0) {
      throw std::invalid_argument("index_of: value " +
                                  std::to_string(config.values[i]) +
                                  " is not a candidate of " + space.params[i].name);
    }
    index = index * cands.size() + static_cast<std::uint64_t>(pos);
  }
  return index;
}

bool is_valid(const ParamSpace& space, const Configuration& config) {
  if (config.values.size() != space.params.size()) return false;
  for (std::size_t i = 0; i < space.params.size(); ++i) {
    if (candidate_index(space.params[i].candidates, config.values[i]) < 0) {
      return false;
    }
  }
  return true;
}

std::vector<double> encode(const ParamSpace& space, const Configuration& config) {
  if (!is_valid(space, config)) {
    throw std::invalid_argument("encode: configuration not in space");
  }
  std::vector<double> features(config.values.size());
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    features[i] = std::log2(static_cast<double>(config.values[i]));
  }
  return features;
}

Configuration random_config(const ParamSpace& space, Rng& rng) {
  Configuration config;
  config.values.reserve(space.params.size());
  for (const ParamSpec& p : space.params) {
    config.values.push_back(p.candidates[rng.next_index(p.candidates.size())]);
  }
  return config;
}

std::string describe(const ParamSpace& space) {
  std::ostringstream out;
  for (const ParamSpec& p : space.params) {
    out << p.name << ' ' << p.axis_extent << ' ' << p.candidates.size()
        << "_candidates:";
    for (std::size_t i = 0; i < p.candidates.size(); ++i) {
      out << (i == 0 ? " " : ",") << p.candidates[i];
    }
    out << '\n';
  }
  out << "total_size: " << space_size(space) << '\n';
  return out.str();
}

}  // namespace tiletuner
