#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "drrs/harness.h"

namespace drrs::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Minimal deterministic SVG line chart.
class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label);

  void add(Series series);
  std::size_t series_count() const { return series_.size(); }
  std::string render() const;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
};

/// Writes <stem>_angles.svg (with dashed references), <stem>_rotors.svg and
/// <stem>_theta.svg into `dir`. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const harness::Trace& trace,
                                              const std::filesystem::path& dir,
                                              const std::string& stem = "trace");

/// One overlay per swept quantity (phi_v, phi_h, omega_a, omega_b) with one
/// series per sweep point.
std::vector<std::filesystem::path> emit_sweep_plots(const harness::SweepReport& report,
                                                    const std::filesystem::path& dir);

}  // namespace drrs::plot
