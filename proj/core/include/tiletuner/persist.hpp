#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tiletuner/harness.hpp"

namespace tiletuner {

// Record-field serialization of a configuration: "P0=v0|P1=v1|...".
std::string format_config(const Configuration& config);
Configuration parse_config(const std::string& text);

// Plain-text trace file: '#'-prefixed header (metadata and the column list),
// then one comma-separated record per evaluation. Floats carry 17 significant
// digits so parse(render(trace)) == trace exactly.
std::string render_trace(const TuningTrace& trace);
TuningTrace parse_trace(const std::string& text);  // throws ParseError

void write_trace(const TuningTrace& trace, const std::filesystem::path& path);
TuningTrace read_trace(const std::filesystem::path& path);

// Best (configuration, runtime) over the successful records, earliest
// eval_index on ties. Throws std::invalid_argument when the trace holds no
// successful evaluation.
std::pair<Configuration, double> best_of(const TuningTrace& trace);

struct SummaryRow {
  TunerKind tuner = TunerKind::random;
  Configuration best_config;
  double best_runtime_s = 0.0;
  std::uint64_t evals_completed = 0;
  double total_process_s = 0.0;
};

struct ComparisonSummary {
  Kernel kernel = Kernel::lu;
  std::string size_name;
  std::vector<SummaryRow> rows;
};

// One row per input trace; all traces must cover the same (kernel, size).
ComparisonSummary summarize(const std::vector<TuningTrace>& traces);
std::string render_summary(const ComparisonSummary& summary);
void write_summary(const ComparisonSummary& summary,
                   const std::filesystem::path& path);

// Runtime-vs-elapsed scatter with one series per tuner. Static, script-free
// SVG. Throws std::invalid_argument on an empty trace list.
void plot_trace(const std::vector<TuningTrace>& traces,
                const std::filesystem::path& path);

// Per-tuner best-runtime bar chart.
void plot_min(const ComparisonSummary& summary,
              const std::filesystem::path& path);

}  // namespace tiletuner
