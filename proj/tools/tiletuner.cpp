// Command-line front end: spaces | verify | tune | compare | plot.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tiletuner/errors.hpp"
#include "tiletuner/harness.hpp"
#include "tiletuner/kernels.hpp"
#include "tiletuner/persist.hpp"
#include "tiletuner/space.hpp"
#include "tiletuner/tuners.hpp"

namespace fs = std::filesystem;
using namespace tiletuner;

namespace {

// Input-generation seed for measured runs; --seed drives the search, not the
// data, so runtimes stay comparable across tuner seeds.
constexpr std::uint64_t kInputSeed = 1;

struct CommonArgs {
  std::string kernel;
  std::string size;
};

struct TuneArgs : CommonArgs {
  std::string tuner = "bayesopt";
  std::uint64_t max_evals = 100;
  double max_seconds = 0.0;  // 0 = unbounded
  std::uint64_t seed = 42;
  bool synthetic = false;
  bool reproducible = false;
  std::string out;
};

struct VerifyArgs : CommonArgs {
  std::uint64_t samples = 16;
  std::uint64_t seed = 42;
};

struct PlotArgs {
  std::vector<std::string> traces;
  std::string out = ".";
};

void add_problem_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("kernel,--kernel", args.kernel, "kernel to operate on")
      ->required()
      ->check(CLI::IsMember({"lu", "cholesky", "3mm", "mm3"}));
  cmd->add_option("size,--size", args.size, "problem size name")
      ->required()
      ->check(CLI::IsMember({"mini", "small", "large", "extralarge"}));
}

Budget make_budget(const TuneArgs& args) {
  Budget budget{args.max_evals, std::nullopt};
  if (args.max_seconds > 0.0) budget.max_seconds = args.max_seconds;
  return budget;
}

Objective make_objective(const TuneArgs& args, const ProblemSize& size) {
  if (args.synthetic) return SyntheticObjective{};
  return KernelCase{size, kInputSeed};
}

int cmd_spaces(const CommonArgs& args) {
  const ParamSpace space = build_space(parse_kernel(args.kernel), args.size);
  std::cout << describe(space);
  return 0;
}

// Residual of the tiled kernel on seeded inputs. The TILETUNER_TEST_CORRUPT
// hook perturbs the computed output so the failure path can be exercised.
double verify_residual(const KernelCase& kase, const Configuration& config,
                       bool corrupt) {
  switch (kase.size.kernel) {
    case Kernel::lu: {
      Matrix a = gen_spd(kase.size.n, kase.seed);
      LuFactors f = lu_tiled(a, config.values.at(0), config.values.at(1));
      if (corrupt) f.u(0, 0) += 1.0;
      return lu_residual(a, f);
    }
    case Kernel::cholesky: {
      Matrix a = gen_spd(kase.size.n, kase.seed);
      Matrix l = cholesky_tiled(a, config.values.at(0), config.values.at(1));
      if (corrupt) l(0, 0) += 1.0;
      return cholesky_residual(a, l);
    }
    case Kernel::mm3: {
      Mm3Inputs in = gen_3mm_inputs(kase.size, kase.seed);
      Matrix ref = mm3_reference(in.a, in.b, in.c, in.d);
      Matrix out = mm3_tiled(in.a, in.b, in.c, in.d, config);
      if (corrupt) out(0, 0) += 1.0;
      return mm3_residual(ref, out);
    }
  }
  throw std::invalid_argument("unknown kernel");
}

int cmd_verify(const VerifyArgs& args) {
  const Kernel kernel = parse_kernel(args.kernel);
  const ParamSpace space = build_space(kernel, args.size);
  const KernelCase kase{find_size(kernel, args.size), kInputSeed};
  const bool corrupt = std::getenv("TILETUNER_TEST_CORRUPT") != nullptr;

  std::vector<Configuration> configs;
  const std::uint64_t total = space_size(space);
  if (args.samples >= total) {
    for (std::uint64_t i = 0; i < total; ++i) {
      configs.push_back(config_at(space, i));
    }
  } else {
    Rng rng(args.seed);
    std::set<std::uint64_t> chosen;
    while (chosen.size() < args.samples) chosen.insert(rng.next_index(total));
    for (std::uint64_t flat : chosen) configs.push_back(config_at(space, flat));
  }

  bool all_pass = true;
  for (const Configuration& config : configs) {
    const double residual = verify_residual(kase, config, corrupt);
    const bool pass = residual <= 1e-10;
    all_pass &= pass;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", residual);
    std::cout << args.kernel << ' ' << args.size << ' ' << format_config(config)
              << ' ' << buf << ' ' << (pass ? "PASS" : "FAIL") << '\n';
  }
  return all_pass ? 0 : 1;
}

int report_best(const TuningTrace& trace, const fs::path& path) {
  std::cout << "trace: " << path.string() << '\n';
  std::cout << "evals: " << trace.records.size() << '\n';
  const auto [config, runtime] = best_of(trace);
  std::cout << "best_config: " << format_config(config) << '\n';
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", runtime);
  std::cout << "best_runtime_s: " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.6g", trace.total_process_s);
  std::cout << "total_process_s: " << buf << '\n';
  return 0;
}

int cmd_tune(const TuneArgs& args) {
  const Kernel kernel = parse_kernel(args.kernel);
  const ParamSpace space = build_space(kernel, args.size);
  const TunerKind kind = parse_tuner(args.tuner);
  fs::path out = args.out.empty()
                     ? fs::path(std::string(kernel_name(kernel)) + "_" +
                                args.size + "_" + args.tuner + ".trace")
                     : fs::path(args.out);

  TuningTrace trace = run_tuning(kind, space,
                                 make_objective(args, find_size(kernel, args.size)),
                                 make_budget(args), MeasureProtocol{}, args.seed,
                                 out);
  if (args.reproducible) trace.created_unix = 0;
  write_trace(trace, out);
  return report_best(trace, out);
}

int cmd_compare(const TuneArgs& args) {
  const Kernel kernel = parse_kernel(args.kernel);
  const ParamSpace space = build_space(kernel, args.size);
  const fs::path dir = args.out.empty() ? fs::path("compare") : fs::path(args.out);
  fs::create_directories(dir);

  std::vector<TuningTrace> traces;
  for (TunerKind kind : all_tuner_kinds()) {
    const fs::path out = dir / (std::string(kernel_name(kernel)) + "_" +
                                args.size + "_" + std::string(tuner_name(kind)) +
                                ".trace");
    TuningTrace trace = run_tuning(
        kind, space, make_objective(args, find_size(kernel, args.size)),
        make_budget(args), MeasureProtocol{}, args.seed, out);
    if (args.reproducible) trace.created_unix = 0;
    write_trace(trace, out);
    traces.push_back(std::move(trace));
  }

  const ComparisonSummary summary = summarize(traces);
  write_summary(summary, dir / "summary.txt");
  plot_trace(traces, dir / "trace.svg");
  plot_min(summary, dir / "minimum.svg");
  std::cout << render_summary(summary);
  std::cout << "wrote " << traces.size() << " traces, summary.txt, trace.svg, "
            << "minimum.svg to " << dir.string() << '\n';
  return 0;
}

int cmd_plot(const PlotArgs& args) {
  std::vector<TuningTrace> traces;
  for (const std::string& path : args.traces) {
    traces.push_back(read_trace(path));
  }
  const fs::path dir(args.out);
  fs::create_directories(dir);
  plot_trace(traces, dir / "trace.svg");
  plot_min(summarize(traces), dir / "minimum.svg");
  std::cout << "wrote trace.svg and minimum.svg to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tile-factor autotuner for blocked linear-algebra kernels"};
  app.require_subcommand(1);

  CommonArgs spaces_args;
  CLI::App* spaces_cmd =
      app.add_subcommand("spaces", "print a kernel's tile-factor space");
  add_problem_options(spaces_cmd, spaces_args);

  VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check tiled kernels against their references");
  add_problem_options(verify_cmd, verify_args);
  const auto at_least_one =
      CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max());
  verify_cmd
      ->add_option("--samples", verify_args.samples,
                   "configurations to check (>= space size sweeps all)")
      ->check(at_least_one);
  verify_cmd->add_option("--seed", verify_args.seed, "sampling seed");

  TuneArgs tune_args;
  CLI::App* tune_cmd = app.add_subcommand("tune", "run one tuning session");
  add_problem_options(tune_cmd, tune_args);
  tune_cmd->add_option("--tuner", tune_args.tuner, "search strategy")
      ->check(CLI::IsMember({"random", "grid", "genetic", "boosted", "bayesopt"}));
  tune_cmd->add_option("--max-evals", tune_args.max_evals, "evaluation budget")
      ->check(at_least_one);
  tune_cmd->add_option("--max-seconds", tune_args.max_seconds,
                       "wall-clock budget in seconds");
  tune_cmd->add_option("--seed", tune_args.seed, "tuner seed");
  tune_cmd->add_flag("--synthetic", tune_args.synthetic,
                     "use the deterministic synthetic objective");
  tune_cmd->add_flag("--reproducible", tune_args.reproducible,
                     "zero the trace timestamp for byte-stable output");
  tune_cmd->add_option("--out", tune_args.out, "trace output path");

  TuneArgs compare_args;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run all five tuners and summarize");
  add_problem_options(compare_cmd, compare_args);
  compare_cmd->add_option("--max-evals", compare_args.max_evals,
                          "evaluation budget per tuner")
      ->check(at_least_one);
  compare_cmd->add_option("--max-seconds", compare_args.max_seconds,
                          "wall-clock budget per tuner in seconds");
  compare_cmd->add_option("--seed", compare_args.seed, "tuner seed");
  compare_cmd->add_flag("--synthetic", compare_args.synthetic,
                        "use the deterministic synthetic objective");
  compare_cmd->add_flag("--reproducible", compare_args.reproducible,
                        "zero trace timestamps for byte-stable output");
  compare_cmd->add_option("--out", compare_args.out, "output directory");

  PlotArgs plot_args;
  CLI::App* plot_cmd =
      app.add_subcommand("plot", "re-render plots from stored traces");
  plot_cmd->add_option("traces", plot_args.traces, "trace files")
      ->required()
      ->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", plot_args.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spaces_cmd->parsed()) return cmd_spaces(spaces_args);
    if (verify_cmd->parsed()) return cmd_verify(verify_args);
    if (tune_cmd->parsed()) return cmd_tune(tune_args);
    if (compare_cmd->parsed()) return cmd_compare(compare_args);
    if (plot_cmd->parsed()) return cmd_plot(plot_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
