#include "tiletuner/persist.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tiletuner/errors.hpp"

namespace tiletuner {

namespace {

constexpr const char* kTraceMagic = "# tiletuner-trace v1";
constexpr const char* kSummaryMagic = "# tiletuner-summary v1";
constexpr const char* kArtifactVersion = "0.1.0";
constexpr const char* kColumns =
    "eval_index,config,runtime_s,elapsed_s,best_so_far_s,status";

// 17 significant digits round-trip any finite double exactly.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("bad float '" + s + "'", line);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, int line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParseError("bad integer '" + s + "'", line);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

std::string format_config(const Configuration& config) {
  std::string out;
  for (std::size_t i = 0; i < config.values.size(); ++i) {
    if (i > 0) out += '|';
    out += 'P';
    out += std::to_string(i);
    out += '=';
    out += std::to_string(config.values[i]);
  }
  return out;
}

Configuration parse_config(const std::string& text) {
  Configuration config;
  if (text.empty()) return config;
  for (const std::string& field : split(text, '|')) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad config field '" + field + "'");
    }
    const std::string value = field.substr(eq + 1);
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || v < 1) {
      throw std::invalid_argument("bad config value '" + value + "'");
    }
    config.values.push_back(static_cast<int>(v));
  }
  return config;
}

std::string render_trace(const TuningTrace& trace) {
  std::ostringstream out;
  out << kTraceMagic << '\n';
  out << "# version: " << kArtifactVersion << '\n';
  out << "# kernel: " << kernel_name(trace.kernel) << '\n';
  out << "# size: " << trace.size_name << '\n';
  out << "# tuner: " << tuner_name(trace.tuner) << '\n';
  out << "# seed: " << trace.seed << '\n';
  out << "# max_evals: " << trace.budget.max_evals << '\n';
  out << "# max_seconds: "
      << (trace.budget.max_seconds ? fmt_double(*trace.budget.max_seconds)
                                   : std::string("none"))
      << '\n';
  out << "# warmups: " << trace.protocol.warmups << '\n';
  out << "# repetitions: " << trace.protocol.repetitions << '\n';
  out << "# aggregate: " << aggregate_name(trace.protocol.aggregate) << '\n';
  out << "# objective: " << objective_name(trace.objective) << '\n';
  out << "# created: " << trace.created_unix << '\n';
  out << "# total_process_s: " << fmt_double(trace.total_process_s) << '\n';
  out << "# columns: " << kColumns << '\n';
  for (const EvalRecord& r : trace.records) {
    out << r.eval_index << ',' << format_config(r.config) << ','
        << (r.runtime_s ? fmt_double(*r.runtime_s) : std::string("nan")) << ','
        << fmt_double(r.elapsed_s) << ',' << fmt_double(r.best_so_far_s) << ','
        << (r.runtime_s ? "ok" : "fail") << '\n';
  }
  return out.str();
}

TuningTrace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };
  if (!next_line() || line != kTraceMagic) {
    throw ParseError("missing trace header", 1);
  }

  TuningTrace trace;
  bool columns_seen = false;
  while (next_line()) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t colon = line.find(": ");
      if (colon == std::string::npos || line.size() < 3) {
        throw ParseError("malformed header line", line_no);
      }
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      try {
        if (key == "version") {
          // accepted for forward compatibility
        } else if (key == "kernel") {
          trace.kernel = parse_kernel(value);
        } else if (key == "size") {
          trace.size_name = value;
        } else if (key == "tuner") {
          trace.tuner = parse_tuner(value);
        } else if (key == "seed") {
          trace.seed = parse_u64(value, line_no);
        } else if (key == "max_evals") {
          trace.budget.max_evals = parse_u64(value, line_no);
        } else if (key == "max_seconds") {
          if (value == "none") {
            trace.budget.max_seconds.reset();
          } else {
            trace.budget.max_seconds = parse_double(value, line_no);
          }
        } else if (key == "warmups") {
          trace.protocol.warmups = static_cast<int>(parse_u64(value, line_no));
        } else if (key == "repetitions") {
          trace.protocol.repetitions =
              static_cast<int>(parse_u64(value, line_no));
        } else if (key == "aggregate") {
          trace.protocol.aggregate = parse_aggregate(value);
        } else if (key == "objective") {
          trace.objective = parse_objective(value);
        } else if (key == "created") {
          trace.created_unix = static_cast<std::int64_t>(
              std::strtoll(value.c_str(), nullptr, 10));
        } else if (key == "total_process_s") {
          trace.total_process_s = parse_double(value, line_no);
        } else if (key == "columns") {
          if (value != kColumns) throw ParseError("unexpected columns", line_no);
          columns_seen = true;
        } else {
          throw ParseError("unknown header key '" + key + "'", line_no);
        }
      } catch (const std::out_of_range& e) {
        throw ParseError(e.what(), line_no);
      }
      continue;
    }
    if (!columns_seen) throw ParseError("record before columns header", line_no);
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 6) {
      throw ParseError("expected 6 record fields", line_no);
    }
    EvalRecord rec;
    rec.eval_index = parse_u64(fields[0], line_no);
    try {
      rec.config = parse_config(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
    if (fields[5] == "ok") {
      rec.runtime_s = parse_double(fields[2], line_no);
    } else if (fields[5] == "fail") {
      rec.runtime_s.reset();
    } else {
      throw ParseError("bad status '" + fields[5] + "'", line_no);
    }
    rec.elapsed_s = parse_double(fields[3], line_no);
    rec.best_so_far_s = parse_double(fields[4], line_no);
    trace.records.push_back(std::move(rec));
  }
  if (!columns_seen) {
    throw ParseError("missing columns header", line_no == 0 ? 1 : line_no);
  }
  return trace;
}

void write_trace(const TuningTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << render_trace(trace);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

TuningTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

std::pair<Configuration, double> best_of(const TuningTrace& trace) {
  const EvalRecord* best = nullptr;
  for (const EvalRecord& r : trace.records) {
    if (!r.runtime_s) continue;
    if (best == nullptr || *r.runtime_s < *best->runtime_s ||
        (*r.runtime_s == *best->runtime_s && r.eval_index < best->eval_index)) {
      best = &r;
    }
  }
  if (best == nullptr) {
    throw std::invalid_argument("best_of: trace holds no successful evaluation");
  }
  return {best->config, *best->runtime_s};
}

ComparisonSummary summarize(const std::vector<TuningTrace>& traces) {
  if (traces.empty()) {
    throw std::invalid_argument("summarize: no traces given");
  }
  ComparisonSummary summary;
  summary.kernel = traces.front().kernel;
  summary.size_name = traces.front().size_name;
  for (const TuningTrace& t : traces) {
    if (t.kernel != summary.kernel || t.size_name != summary.size_name) {
      throw std::invalid_argument("summarize: traces cover different problems");
    }
    auto [config, runtime] = best_of(t);
    summary.rows.push_back({t.tuner, std::move(config), runtime,
                            t.records.size(), t.total_process_s});
  }
  return summary;
}

std::string render_summary(const ComparisonSummary& summary) {
  std::ostringstream out;
  out << kSummaryMagic << '\n';
  out << "# kernel: " << kernel_name(summary.kernel) << '\n';
  out << "# size: " << summary.size_name << '\n';
  for (const SummaryRow& row : summary.rows) {
    out << "tuner: " << tuner_name(row.tuner) << '\n';
    out << "  best_runtime_s: " << fmt_double(row.best_runtime_s) << '\n';
    out << "  best_config: " << format_config(row.best_config) << '\n';
    out << "  evals: " << row.evals_completed << '\n';
    out << "  total_process_s: " << fmt_double(row.total_process_s) << '\n';
  }
  return out.str();
}

void write_summary(const ComparisonSummary& summary,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << render_summary(summary);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tiletuner
