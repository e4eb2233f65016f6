#pragma once

// Shared helpers for the test suites. Oracles here stay independent of the
// library code paths they check.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "tiletuner/harness.hpp"
#include "tiletuner/space.hpp"

namespace testsupport {

// Trial-division divisor oracle.
inline std::vector<int> brute_force_divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Average-tie ranks, 1-based.
inline std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return 0.0;
  return cov / std::sqrt(va * vb);
}

// Minimal structural XML check: declaration handling, tag balance, attribute
// quote balance, exactly one root element.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", i);
      if (end == std::string::npos) return false;
      i = end + 3;
      continue;
    }
    if (text.compare(i, 2, "<?") == 0) {
      const std::size_t end = text.find("?>", i);
      if (end == std::string::npos) return false;
      i = end + 2;
      continue;
    }
    const std::size_t close = [&] {
      bool quoted = false;
      char quote = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const char c = text[j];
        if (quoted) {
          if (c == quote) quoted = false;
        } else if (c == '"' || c == '\'') {
          quoted = true;
          quote = c;
        } else if (c == '>') {
          return j;
        } else if (c == '<') {
          return std::string::npos;  // nested '<' inside a tag
        }
      }
      return std::string::npos;
    }();
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    const bool closing = !tag.empty() && tag[0] == '/';
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (closing) tag = tag.substr(1);
    std::string name;
    for (char c : tag) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '/') break;
      name += c;
    }
    if (name.empty()) return false;
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      if (stack.empty()) {
        if (++roots > 1) return false;
      }
      stack.push_back(name);
    } else if (stack.empty()) {
      if (++roots > 1) return false;
    }
    i = close + 1;
  }
  return stack.empty() && roots == 1;
}

inline std::filesystem::path make_temp_dir(const std::string& hint) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("tiletuner-" + hint + "-" + std::to_string(::getpid()) +
                    "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

// Ad-hoc space over the given axis extents; candidates are the extents'
// divisors, names positional.
inline tiletuner::ParamSpace make_space(const std::vector<int>& extents,
                                        tiletuner::Kernel kernel = tiletuner::Kernel::lu,
                                        std::string size_name = "adhoc") {
  tiletuner::ParamSpace space{kernel, std::move(size_name), {}};
  for (std::size_t i = 0; i < extents.size(); ++i) {
    space.params.push_back({"P" + std::to_string(i), extents[i],
                            tiletuner::divisor_candidates(extents[i])});
  }
  return space;
}

// Schema-valid trace with randomized contents; exercises every field shape
// the format supports, including failures and an optional wall-clock bound.
inline tiletuner::TuningTrace random_trace(tiletuner::Rng& rng) {
  using namespace tiletuner;
  TuningTrace trace;
  const auto& sizes = registered_sizes();
  const ProblemSize& size = sizes[rng.next_index(sizes.size())];
  trace.kernel = size.kernel;
  trace.size_name = size.name;
  trace.tuner = all_tuner_kinds()[rng.next_index(all_tuner_kinds().size())];
  trace.seed = rng.next_u64();
  trace.budget.max_evals = 1 + rng.next_index(200);
  if (rng.next_bernoulli(0.3)) {
    trace.budget.max_seconds = rng.next_double() * 100;
  }
  trace.protocol.warmups = static_cast<int>(rng.next_index(3));
  trace.protocol.repetitions = 1 + static_cast<int>(rng.next_index(5));
  trace.protocol.aggregate = static_cast<Aggregate>(rng.next_index(3));
  trace.objective = rng.next_bernoulli(0.5) ? ObjectiveKind::synthetic
                                            : ObjectiveKind::measured;
  trace.created_unix = rng.next_bernoulli(0.2)
                           ? 0
                           : static_cast<std::int64_t>(rng.next_index(1u << 30));
  const ParamSpace space = build_space(size.kernel, size.name);
  const std::uint64_t n = rng.next_index(40);
  double elapsed = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < n; ++i) {
    EvalRecord r;
    r.eval_index = i;
    r.config = config_at(space, rng.next_index(space_size(space)));
    if (rng.next_bernoulli(0.85)) {
      r.runtime_s = rng.next_double() * 1e3 + 1e-6;
      best = std::min(best, *r.runtime_s);
    }
    elapsed += rng.next_double();
    r.elapsed_s = elapsed;
    r.best_so_far_s = best;
    trace.records.push_back(std::move(r));
  }
  trace.total_process_s = elapsed + rng.next_double();
  return trace;
}

}  // namespace testsupport
