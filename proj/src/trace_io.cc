#include "drrs/trace_io.h"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace drrs::trace_io {
namespace {

constexpr std::size_t kColumns = 19;

void put(std::string& line, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  line.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_trace_csv(const harness::Trace& trace, std::ostream& out) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const harness::TraceRow& row : trace) {
    const std::array<double, kColumns> values{
        row.t,           row.state.phi_v,     row.state.phi_h,     row.state.phi_v_dot,
        row.state.phi_h_dot, row.r(0),        row.r(1),            row.omega_a,
        row.omega_b,     row.moments(0),      row.moments(1),      row.theta_hat[0],
        row.theta_hat[1], row.theta_hat[2],   row.theta_hat[3],    row.theta_hat[4],
        row.theta_hat[5], row.q(0),           row.q(1)};
    line.clear();
    for (std::size_t i = 0; i < kColumns; ++i) {
      if (i) line.push_back(',');
      put(line, values[i]);
    }
    line.push_back('\n');
    out << line;
  }
}

void write_trace_csv(const harness::Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trace_csv(trace, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

harness::Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error(path.string() + ": not a trace CSV (header mismatch)");
  }
  harness::Trace trace;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, kColumns> v{};
    std::size_t col = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (col < kColumns) {
      const auto [next, ec] = std::from_chars(p, end, v[col]);
      if (ec != std::errc()) break;
      ++col;
      p = next;
      if (p == end) break;
      if (*p != ',') break;
      ++p;
    }
    if (col != kColumns || p != end) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    harness::TraceRow row;
    row.t = v[0];
    row.state = {v[1], v[2], v[3], v[4]};
    row.r = {v[5], v[6]};
    row.omega_a = v[7];
    row.omega_b = v[8];
    row.moments = {v[9], v[10]};
    row.theta_hat = ThetaVec(Vector6d(Eigen::Map<const Vector6d>(&v[11])));
    row.q = {v[17], v[18]};
    trace.push_back(row);
  }
  return trace;
}

}  // namespace drrs::trace_io
