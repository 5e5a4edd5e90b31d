#include "drrs/plot.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace drrs::plot {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
// Longer traces are decimated to keep files small.
constexpr std::size_t kMaxPoints = 2000;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<double> column(const harness::Trace& trace, double (*get)(const harness::TraceRow&)) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& row : trace) out.push_back(get(row));
  return out;
}

}  // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LineChart::add(Series series) {
  if (series.x.size() != series.y.size()) throw std::invalid_argument("series x/y length mismatch");
  series_.push_back(std::move(series));
}

std::string LineChart::render() const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 1e-12 * std::max(1.0, std::abs(y0))) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(title_) + "</text>\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kTop + ph + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick(xv) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label_) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt(kTop + ph / 2) + ")\">" + escape(y_label_) + "</text>\n";

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const Series& s = series_[k];
    const char* color = kPalette[k % kPalette.size()];
    const std::size_t stride = std::max<std::size_t>(1, (s.x.size() + kMaxPoints - 1) / kMaxPoints);
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
    }
    if (!s.x.empty() && (s.x.size() - 1) % stride != 0) {
      points += ' ' + fmt(px(s.x.back())) + "," + fmt(py(s.y.back()));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"";
    if (s.dashed) svg += " stroke-dasharray=\"6,4\"";
    svg += " points=\"" + points + "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    svg += "<line x1=\"" + fmt(kWidth - kRight + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(kWidth - kRight + 36) +
           "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    svg += "<text x=\"" + fmt(kWidth - kRight + 42) + "\" y=\"" + fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> emit_plots(const harness::Trace& trace, const std::filesystem::path& dir,
                                              const std::string& stem) {
  if (trace.empty()) throw std::invalid_argument("emit_plots: empty trace");
  std::filesystem::create_directories(dir);
  using Row = harness::TraceRow;
  const auto t = column(trace, [](const Row& r) { return r.t; });

  LineChart angles("Angles", "t [s]", "angle [rad]");
  angles.add({"phi_v", t, column(trace, [](const Row& r) { return r.state.phi_v; })});
  angles.add({"phi_h", t, column(trace, [](const Row& r) { return r.state.phi_h; })});
  angles.add({"r_v", t, column(trace, [](const Row& r) { return r.r(0); }), true});
  angles.add({"r_h", t, column(trace, [](const Row& r) { return r.r(1); }), true});

  LineChart rotors("Rotor speeds", "t [s]", "omega [rad/s]");
  rotors.add({"omega_a", t, column(trace, [](const Row& r) { return r.omega_a; })});
  rotors.add({"omega_b", t, column(trace, [](const Row& r) { return r.omega_b; })});

  LineChart theta("Parameter estimates", "t [s]", "theta_hat");
  for (int i = 0; i < 6; ++i) {
    std::vector<double> y;
    y.reserve(trace.size());
    for (const auto& row : trace) y.push_back(row.theta_hat[i]);
    theta.add({"theta_hat_" + std::to_string(i + 1), t, std::move(y)});
  }

  std::vector<std::filesystem::path> written;
  for (const auto& [name, chart] : {std::pair{"angles", &angles}, {"rotors", &rotors}, {"theta", &theta}}) {
    const auto path = dir / (stem + "_" + name + ".svg");
    write_file(path, chart->render());
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> emit_sweep_plots(const harness::SweepReport& report,
                                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  using Row = harness::TraceRow;
  using Getter = double (*)(const Row&);
  const std::array<std::pair<const char*, Getter>, 4> quantities{{
      {"phi_v", [](const Row& r) { return r.state.phi_v; }},
      {"phi_h", [](const Row& r) { return r.state.phi_h; }},
      {"omega_a", [](const Row& r) { return r.omega_a; }},
      {"omega_b", [](const Row& r) { return r.omega_b; }},
  }};
  const std::string kind(harness::to_string(report.kind));
  const char* symbol = report.kind == harness::SweepKind::kRotorAxis ? "beta_a" : "alpha";

  std::vector<std::filesystem::path> written;
  for (const auto& [name, get] : quantities) {
    LineChart chart(kind + " sweep: " + name, "t [s]", name);
    for (const auto& point : report.points) {
      chart.add({std::string(symbol) + " = " + tick(point.value),
                 column(point.run.trace, [](const Row& r) { return r.t; }), column(point.run.trace, get)});
    }
    const auto path = dir / (kind + "_sweep_" + name + ".svg");
    write_file(path, chart.render());
    written.push_back(path);
  }
  return written;
}

}  // namespace drrs::plot
