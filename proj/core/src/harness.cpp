#include "tiletuner/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <numeric>
#include <stdexcept>

#include "tiletuner/errors.hpp"
#include "tiletuner/persist.hpp"

namespace tiletuner {

std::string_view aggregate_name(Aggregate a) {
  switch (a) {
    case Aggregate::median: return "median";
    case Aggregate::min: return "min";
    case Aggregate::mean: return "mean";
  }
  throw std::invalid_argument("unknown aggregate enum value");
}

Aggregate parse_aggregate(std::string_view name) {
  if (name == "median") return Aggregate::median;
  if (name == "min") return Aggregate::min;
  if (name == "mean") return Aggregate::mean;
  throw std::out_of_range("unknown aggregate: " + std::string(name));
}

std::string_view objective_name(ObjectiveKind k) {
  return k == ObjectiveKind::synthetic ? "synthetic" : "measured";
}

ObjectiveKind parse_objective(std::string_view name) {
  if (name == "synthetic") return ObjectiveKind::synthetic;
  if (name == "measured") return ObjectiveKind::measured;
  throw std::out_of_range("unknown objective: " + std::string(name));
}

MeasureProtocol apply_env_overrides(MeasureProtocol protocol) {
  if (const char* reps = std::getenv("TILETUNER_REPS")) {
    char* end = nullptr;
    const long v = std::strtol(reps, &end, 10);
    if (end != reps && *end == '\0' && v >= 1) {
      protocol.repetitions = static_cast<int>(v);
    }
  }
  return protocol;
}

double aggregate_samples(std::vector<double> samples, Aggregate how) {
  if (samples.empty()) {
    throw std::invalid_argument("aggregate_samples: empty sample set");
  }
  switch (how) {
    case Aggregate::min:
      return *std::min_element(samples.begin(), samples.end());
    case Aggregate::mean:
      return std::accumulate(samples.begin(), samples.end(), 0.0) /
             static_cast<double>(samples.size());
    case Aggregate::median: {
      std::sort(samples.begin(), samples.end());
      const std::size_t n = samples.size();
      return n % 2 == 1 ? samples[n / 2]
                        : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    }
  }
  throw std::invalid_argument("unknown aggregate enum value");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_protocol(const MeasureProtocol& protocol) {
  if (protocol.warmups < 0 || protocol.repetitions < 1) {
    throw std::invalid_argument(
        "measure: warmups must be >= 0 and repetitions >= 1");
  }
}

// Holds the case's seeded inputs so a tuning run generates them only once.
class KernelRunner {
 public:
  explicit KernelRunner(const KernelCase& kase) : kase_(kase) {
    if (kase.size.kernel == Kernel::mm3) {
      inputs_ = gen_3mm_inputs(kase.size, kase.seed);
    } else {
      spd_ = gen_spd(kase.size.n, kase.seed);
    }
  }

  double measure(const Configuration& config, const MeasureProtocol& protocol) {
    check_protocol(protocol);
    for (int w = 0; w < protocol.warmups; ++w) run_once(config);
    std::vector<double> samples(protocol.repetitions);
    for (double& s : samples) s = run_once(config);
    return aggregate_samples(std::move(samples), protocol.aggregate);
  }

 private:
  double run_once(const Configuration& config) {
    double elapsed = 0.0;
    switch (kase_.size.kernel) {
      case Kernel::lu: {
        Matrix work = spd_;  // fresh copy, untimed
        const auto t0 = Clock::now();
        lu_factor_inplace(work, config.values.at(0), config.values.at(1));
        elapsed = seconds_since(t0);
        break;
      }
      case Kernel::cholesky: {
        Matrix work = spd_;
        const auto t0 = Clock::now();
        cholesky_factor_inplace(work, config.values.at(0), config.values.at(1));
        elapsed = seconds_since(t0);
        break;
      }
      case Kernel::mm3: {
        const auto t0 = Clock::now();
        Matrix g = mm3_tiled(inputs_.a, inputs_.b, inputs_.c, inputs_.d, config);
        elapsed = seconds_since(t0);
        sink_ += g(0, 0);
        break;
      }
    }
    if (elapsed <= 0.0) {
      throw MeasurementError("measure: nonpositive timer reading");
    }
    return elapsed;
  }

  KernelCase kase_;
  Matrix spd_;
  Mm3Inputs inputs_;
  double sink_ = 0.0;
};

// Tiled kernels must reproduce their reference on the mini size before any
// timing is trusted.
void spot_check(const KernelCase& kase) {
  const ParamSpace mini_space = build_space(kase.size.kernel, "mini");
  const KernelCase mini{find_size(kase.size.kernel, "mini"), kase.seed};
  const Configuration probe = config_at(mini_space, space_size(mini_space) / 2);
  const double res = residual_for(mini, probe);
  if (!(res <= 1e-10)) {
    throw MeasurementError("spot check failed: tiled kernel residual " +
                           std::to_string(res));
  }
}

}  // namespace

double measure(const KernelCase& kase, const Configuration& config,
               const MeasureProtocol& protocol) {
  KernelRunner runner(kase);
  return runner.measure(config, protocol);
}

double synthetic_objective(const ParamSpace& space, const Configuration& config) {
  if (!is_valid(space, config)) {
    throw std::invalid_argument("synthetic_objective: configuration not in space");
  }
  const Configuration opt = synthetic_optimum(space);
  double t = 1.0;
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    const double d = std::log2(static_cast<double>(config.values[i])) -
                     std::log2(static_cast<double>(opt.values[i]));
    t += d * d;
  }
  return t;
}

Configuration synthetic_optimum(const ParamSpace& space) {
  Configuration opt;
  opt.values.reserve(space.params.size());
  for (const ParamSpec& p : space.params) {
    const double target = std::sqrt(static_cast<double>(p.axis_extent));
    int best = p.candidates.front();
    double best_dist = std::abs(static_cast<double>(best) - target);
    for (int c : p.candidates) {
      const double dist = std::abs(static_cast<double>(c) - target);
      if (dist < best_dist) {  // strict: ties keep the smaller candidate
        best = c;
        best_dist = dist;
      }
    }
    opt.values.push_back(best);
  }
  return opt;
}

TuningTrace run_tuning(TunerKind kind, const ParamSpace& space,
                       const Objective& objective, const Budget& budget,
                       const MeasureProtocol& protocol, std::uint64_t seed,
                       const std::filesystem::path& flush_path) {
  if (budget.max_evals < 1) {
    throw std::invalid_argument("run_tuning: max_evals must be >= 1");
  }
  const MeasureProtocol effective = apply_env_overrides(protocol);
  check_protocol(effective);
  const bool synthetic = std::holds_alternative<SyntheticObjective>(objective);

  TuningTrace trace;
  trace.kernel = space.kernel;
  trace.size_name = space.size_name;
  trace.tuner = kind;
  trace.seed = seed;
  trace.budget = budget;
  trace.protocol = effective;
  trace.objective = synthetic ? ObjectiveKind::synthetic : ObjectiveKind::measured;
  trace.created_unix = static_cast<std::int64_t>(std::time(nullptr));

  std::optional<KernelRunner> runner;
  if (!synthetic) {
    const KernelCase& kase = std::get<KernelCase>(objective);
    spot_check(kase);
    runner.emplace(kase);
  }

  const auto start = Clock::now();
  double virtual_elapsed = 0.0;
  const auto elapsed = [&] {
    return synthetic ? virtual_elapsed : seconds_since(start);
  };

  std::unique_ptr<Tuner> tuner = make_tuner(kind, space, seed);
  double best = std::numeric_limits<double>::infinity();
  while (trace.records.size() < budget.max_evals) {
    if (budget.max_seconds && elapsed() >= *budget.max_seconds) break;
    Configuration config;
    try {
      config = tuner->ask();
    } catch (const SpaceExhausted&) {
      break;
    }
    std::optional<double> runtime;
    if (synthetic) {
      runtime = synthetic_objective(space, config);
      virtual_elapsed += *runtime;
    } else {
      try {
        runtime = runner->measure(config, effective);
      } catch (const NumericalError&) {
        runtime = std::nullopt;  // penalized by the tuner, recorded as failure
      } catch (const MeasurementError&) {
        trace.total_process_s = elapsed();
        if (!flush_path.empty()) write_trace(trace, flush_path);
        throw;
      }
    }
    tuner->tell(config, runtime);
    if (runtime) best = std::min(best, *runtime);
    trace.records.push_back({trace.records.size(), std::move(config), runtime,
                             elapsed(), best});
  }
  trace.total_process_s = elapsed();
  return trace;
}

}  // namespace tiletuner
