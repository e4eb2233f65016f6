#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tiletuner/errors.hpp"
#include "tiletuner/persist.hpp"

namespace tiletuner {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 600;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 170;
constexpr int kMarginTop = 44;
constexpr int kMarginBottom = 64;
constexpr int kTicks = 5;

const char* series_color(TunerKind kind) {
  switch (kind) {
    case TunerKind::random: return "#1f77b4";
    case TunerKind::grid: return "#ff7f0e";
    case TunerKind::genetic: return "#2ca02c";
    case TunerKind::boosted: return "#9467bd";
    case TunerKind::bayesopt: return "#d62728";
  }
  return "#8c564b";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct LinearScale {
  double lo = 0.0, hi = 1.0;
  double px_lo = 0.0, px_hi = 1.0;

  double operator()(double v) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

// Pad a degenerate or empty domain so the scale stays finite.
void widen(double& lo, double& hi) {
  if (!(lo <= hi)) {  // no data
    lo = 0.0;
    hi = 1.0;
    return;
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

class SvgDoc {
 public:
  SvgDoc() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
         << kHeight << "\">\n";
    out_ << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const char* stroke,
            double width = 1.0) {
    out_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
         << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
  }

  void circle(double cx, double cy, double r) {
    out_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
         << fmt(r) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    out_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
         << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"" << fill
         << "\"/>\n";
  }

  void text(double x, double y, const std::string& s,
            const std::string& anchor = "start", int size = 13,
            const std::string& extra = "") {
    out_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
         << "\" font-family=\"sans-serif\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << "\"" << extra << ">"
         << xml_escape(s) << "</text>\n";
  }

  void open_group(const std::string& attrs) { out_ << "<g " << attrs << ">\n"; }
  void close_group() { out_ << "</g>\n"; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

void draw_axes(SvgDoc& svg, const LinearScale& xs, const LinearScale& ys,
               const std::string& x_label, const std::string& y_label,
               bool x_ticks = true) {
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  svg.line(x0, y0, x1, y0, "black");
  svg.line(x0, y0, x0, y1, "black");
  for (int t = 0; t <= kTicks; ++t) {
    const double fy = ys.lo + (ys.hi - ys.lo) * t / kTicks;
    const double py = ys(fy);
    svg.line(x0 - 4, py, x0, py, "black");
    svg.line(x0, py, x1, py, "#e0e0e0", 0.5);
    svg.text(x0 - 8, py + 4, fmt(fy), "end", 11);
    if (x_ticks) {
      const double fx = xs.lo + (xs.hi - xs.lo) * t / kTicks;
      const double px = xs(fx);
      svg.line(px, y0, px, y0 + 4, "black");
      svg.text(px, y0 + 18, fmt(fx), "middle", 11);
    }
  }
  svg.text((x0 + x1) / 2, kHeight - 16, x_label, "middle");
  svg.text(18, (y0 + y1) / 2, y_label, "middle", 13,
           " transform=\"rotate(-90 18 " + fmt((y0 + y1) / 2) + ")\"");
}

void write_svg(const std::string& body, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << body;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void draw_legend(SvgDoc& svg, const std::vector<TunerKind>& kinds) {
  const double lx = kWidth - kMarginRight + 18;
  double ly = kMarginTop + 10;
  for (TunerKind kind : kinds) {
    svg.rect(lx, ly - 9, 12, 12, series_color(kind));
    svg.text(lx + 18, ly + 2, std::string(tuner_name(kind)));
    ly += 22;
  }
}

}  // namespace

void plot_trace(const std::vector<TuningTrace>& traces,
                const std::filesystem::path& path) {
  if (traces.empty()) {
    throw std::invalid_argument("plot_trace: no traces given");
  }
  double x_lo = 0.0, x_hi = -1.0;
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const TuningTrace& t : traces) {
    for (const EvalRecord& r : t.records) {
      if (!r.runtime_s) continue;
      x_hi = std::max(x_hi, r.elapsed_s);
      y_lo = std::min(y_lo, *r.runtime_s);
      y_hi = std::max(y_hi, *r.runtime_s);
    }
  }
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);

  SvgDoc svg;
  const LinearScale xs{x_lo, x_hi, kMarginLeft,
                       static_cast<double>(kWidth - kMarginRight)};
  const LinearScale ys{y_lo, y_hi, static_cast<double>(kHeight - kMarginBottom),
                       static_cast<double>(kMarginTop)};
  svg.text(kWidth / 2.0, 24,
           std::string(kernel_name(traces.front().kernel)) + " / " +
               traces.front().size_name + " tuning evaluations",
           "middle", 16);
  draw_axes(svg, xs, ys, "elapsed seconds", "runtime seconds");

  std::vector<TunerKind> kinds;
  for (const TuningTrace& t : traces) {
    kinds.push_back(t.tuner);
    svg.open_group("fill=\"" + std::string(series_color(t.tuner)) +
                   "\" fill-opacity=\"0.75\"");
    for (const EvalRecord& r : t.records) {
      if (!r.runtime_s) continue;
      svg.circle(xs(r.elapsed_s), ys(*r.runtime_s), 3.0);
    }
    svg.close_group();
  }
  draw_legend(svg, kinds);
  write_svg(svg.finish(), path);
}

void plot_min(const ComparisonSummary& summary,
              const std::filesystem::path& path) {
  if (summary.rows.empty()) {
    throw std::invalid_argument("plot_min: summary holds no rows");
  }
  double y_lo = 0.0, y_hi = 0.0;
  for (const SummaryRow& row : summary.rows) {
    y_hi = std::max(y_hi, row.best_runtime_s);
  }
  if (y_hi <= 0.0) y_hi = 1.0;
  y_hi *= 1.1;

  SvgDoc svg;
  const LinearScale ys{y_lo, y_hi, static_cast<double>(kHeight - kMarginBottom),
                       static_cast<double>(kMarginTop)};
  const LinearScale xs{0.0, 1.0, kMarginLeft,
                       static_cast<double>(kWidth - kMarginRight)};
  svg.text(kWidth / 2.0, 24,
           std::string(kernel_name(summary.kernel)) + " / " +
               summary.size_name + " minimum runtimes",
           "middle", 16);
  draw_axes(svg, xs, ys, "", "runtime seconds", /*x_ticks=*/false);

  const double span = kWidth - kMarginRight - kMarginLeft;
  const double slot = span / static_cast<double>(summary.rows.size());
  const double bar = slot * 0.6;
  const double base = kHeight - kMarginBottom;
  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const SummaryRow& row = summary.rows[i];
    const double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
    const double top = ys(row.best_runtime_s);
    svg.rect(cx - bar / 2, top, bar, base - top, series_color(row.tuner));
    svg.text(cx, base + 18, std::string(tuner_name(row.tuner)), "middle", 12);
    svg.text(cx, top - 6, fmt(row.best_runtime_s), "middle", 11);
  }
  write_svg(svg.finish(), path);
}

}  // namespace tiletuner
