#include "tiletuner/problem.hpp"

#include <stdexcept>

namespace tiletuner {

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::lu: return "lu";
    case Kernel::cholesky: return "cholesky";
    case Kernel::mm3: return "3mm";
  }
  throw std::invalid_argument("unknown kernel enum value");
}

Kernel parse_kernel(std::string_view name) {
  if (name == "lu") return Kernel::lu;
  if (name == "cholesky") return Kernel::cholesky;
  if (name == "3mm" || name == "mm3") return Kernel::mm3;
  throw std::out_of_range("unknown kernel: " + std::string(name));
}

namespace {

std::vector<ProblemSize> make_registry() {
  std::vector<ProblemSize> sizes;
  for (Kernel k : {Kernel::lu, Kernel::cholesky}) {
    sizes.push_back({k, "mini", 64});
    sizes.push_back({k, "small", 400});
    sizes.push_back({k, "large", 2000});
    sizes.push_back({k, "extralarge", 4000});
  }
  sizes.push_back({Kernel::mm3, "mini", 16, 18, 20, 22, 24});
  sizes.push_back({Kernel::mm3, "small", 80, 90, 100, 110, 120});
  sizes.push_back({Kernel::mm3, "large", 800, 900, 1000, 1100, 1200});
  sizes.push_back({Kernel::mm3, "extralarge", 1600, 1800, 2000, 2200, 2400});
  return sizes;
}

}  // namespace

const std::vector<ProblemSize>& registered_sizes() {
  static const std::vector<ProblemSize> registry = make_registry();
  return registry;
}

const ProblemSize& find_size(Kernel kernel, std::string_view name) {
  for (const ProblemSize& s : registered_sizes()) {
    if (s.kernel == kernel && s.name == name) return s;
  }
  throw std::out_of_range("unregistered problem size: " +
                          std::string(kernel_name(kernel)) + "/" +
                          std::string(name));
}

}  // namespace tiletuner
