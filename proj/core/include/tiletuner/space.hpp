#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tiletuner/problem.hpp"
#include "tiletuner/rng.hpp"

namespace tiletuner {

// One tunable tile factor: the loop extent it splits and the ascending list
// of legal factors, which is exactly the divisors of that extent.
struct ParamSpec {
  std::string name;
  int axis_extent = 0;
  std::vector<int> candidates;

  bool operator==(const ParamSpec&) const = default;
};

// Ordered tile-factor space for one (kernel, problem size) pair. Immutable
// after construction and safe to share across threads.
struct ParamSpace {
  Kernel kernel = Kernel::lu;
  std::string size_name;
  std::vector<ParamSpec> params;

  bool operator==(const ParamSpace&) const = default;
};

// One chosen factor per parameter, positionally aligned with the space.
struct Configuration {
  std::vector<int> values;

  bool operator==(const Configuration&) const = default;
};

// All divisors of n in ascending order. Throws std::invalid_argument for n < 1.
std::vector<int> divisor_candidates(int n);

// Space for a registered (kernel, size). lu/cholesky get two factors over N;
// 3mm gets six factors over the row/column extents of its three products
// (E: NxM, F: MxP, G: NxP), in schedule order.
ParamSpace build_space(Kernel kernel, std::string_view size_name);

// Product of candidate-list lengths.
std::uint64_t space_size(const ParamSpace& space);

// Mixed-radix decode of a flat index; the last parameter varies fastest.
// Throws std::invalid_argument when flat_index >= space_size.
Configuration config_at(const ParamSpace& space, std::uint64_t flat_index);

// Inverse of config_at. Throws std::invalid_argument for configs not in the space.
std::uint64_t index_of(const ParamSpace& space, const Configuration& config);

bool is_valid(const ParamSpace& space, const Configuration& config);

// Surrogate feature vector: log2 of each chosen factor.
std::vector<double> encode(const ParamSpace& space, const Configuration& config);

// One uniform candidate draw per parameter.
Configuration random_config(const ParamSpace& space, Rng& rng);

// Dump format of the `spaces` command: one line per parameter,
// "name extent k_candidates: c1,c2,...", then a final "total_size: <n>".
std::string describe(const ParamSpace& space);

}  // namespace tiletuner
