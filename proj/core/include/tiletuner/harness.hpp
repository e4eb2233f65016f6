#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tiletuner/kernels.hpp"
#include "tiletuner/space.hpp"
#include "tiletuner/tuners.hpp"

namespace tiletuner {

// The loop stops at whichever bound is hit first, or on space exhaustion.
// The wall-clock bound is checked before each evaluation starts.
struct Budget {
  std::uint64_t max_evals = 100;
  std::optional<double> max_seconds;

  bool operator==(const Budget&) const = default;
};

enum class Aggregate { median, min, mean };

std::string_view aggregate_name(Aggregate a);
Aggregate parse_aggregate(std::string_view name);

struct MeasureProtocol {
  int warmups = 1;
  int repetitions = 3;
  Aggregate aggregate = Aggregate::median;

  bool operator==(const MeasureProtocol&) const = default;
};

// TILETUNER_REPS, when set to a positive integer, overrides repetitions.
MeasureProtocol apply_env_overrides(MeasureProtocol protocol);

double aggregate_samples(std::vector<double> samples, Aggregate how);

struct EvalRecord {
  std::uint64_t eval_index = 0;
  Configuration config;
  std::optional<double> runtime_s;  // nullopt marks a failed evaluation
  double elapsed_s = 0.0;
  double best_so_far_s = std::numeric_limits<double>::infinity();

  bool operator==(const EvalRecord&) const = default;
};

enum class ObjectiveKind { synthetic, measured };

std::string_view objective_name(ObjectiveKind k);
ObjectiveKind parse_objective(std::string_view name);

// One full tuning run: the performance database of that run plus everything
// needed to reproduce it.
struct TuningTrace {
  Kernel kernel = Kernel::lu;
  std::string size_name;
  TunerKind tuner = TunerKind::random;
  std::uint64_t seed = 0;
  Budget budget;
  MeasureProtocol protocol;
  ObjectiveKind objective = ObjectiveKind::synthetic;
  std::int64_t created_unix = 0;  // 0 under --reproducible
  std::vector<EvalRecord> records;
  double total_process_s = 0.0;

  bool operator==(const TuningTrace&) const = default;
};

// One timed evaluation: `warmups` untimed runs plus `repetitions` timed runs
// on fresh copies of the case's seeded inputs, reduced by the aggregate.
// Kernel numerical failures propagate as NumericalError; a nonpositive timer
// reading raises MeasurementError.
double measure(const KernelCase& kase, const Configuration& config,
               const MeasureProtocol& protocol);

// Deterministic stand-in for a real measurement:
//   t(c) = 1 + sum_i (log2 c_i - log2 c_i*)^2
// where c_i* is the candidate closest to sqrt(axis_extent), ties toward the
// smaller candidate. Unique global minimum of exactly 1.0 at the optimum.
double synthetic_objective(const ParamSpace& space, const Configuration& config);
Configuration synthetic_optimum(const ParamSpace& space);

struct SyntheticObjective {};
using Objective = std::variant<SyntheticObjective, KernelCase>;

// Drives ask -> evaluate -> tell until the budget or the space runs out.
// Synthetic runs use a virtual clock (cumulative pseudo-runtime) so they are
// bit-deterministic end to end; measured runs use the wall clock and include
// tuner overhead in elapsed time. Measured runs spot-check the tiled kernel
// against its reference on the kernel's mini size before tuning starts.
// On a measurement error the partial trace is flushed to flush_path (when
// given) and the error rethrown.
TuningTrace run_tuning(TunerKind kind, const ParamSpace& space,
                       const Objective& objective, const Budget& budget,
                       const MeasureProtocol& protocol, std::uint64_t seed,
                       const std::filesystem::path& flush_path = {});

}  // namespace tiletuner
