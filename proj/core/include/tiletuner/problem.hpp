#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tiletuner {

enum class Kernel { lu, cholesky, mm3 };

// Canonical display names: "lu", "cholesky", "3mm".
std::string_view kernel_name(Kernel k);

// Accepts the canonical names plus "mm3" as an alias for "3mm".
// Throws std::out_of_range for anything else.
Kernel parse_kernel(std::string_view name);

// A kernel with concrete dimensions. lu/cholesky use n only; 3mm uses all
// five extents (A: n x l, B: l x m, C: m x o, D: o x p).
struct ProblemSize {
  Kernel kernel = Kernel::lu;
  std::string name;
  int n = 0;
  int l = 0, m = 0, o = 0, p = 0;

  bool operator==(const ProblemSize&) const = default;
};

// Registered sizes per kernel. large/extralarge are the PolyBench 4.2
// dataset dimensions; mini/small are desk-scale additions so tests and CI
// finish in seconds.
const std::vector<ProblemSize>& registered_sizes();

// Throws std::out_of_range for an unregistered (kernel, name) pair.
const ProblemSize& find_size(Kernel kernel, std::string_view name);

}  // namespace tiletuner
