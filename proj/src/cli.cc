#include "drrs/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "drrs/acceptance.h"
#include "drrs/config.h"
#include "drrs/controller.h"
#include "drrs/dynamics.h"
#include "drrs/errors.h"
#include "drrs/harness.h"
#include "drrs/numerics.h"
#include "drrs/plot.h"
#include "drrs/trace_io.h"

namespace drrs::cli {
namespace {

namespace fs = std::filesystem;

// Raised for problems that must be reported before any computation starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

fs::path resolve(const fs::path& out_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : out_dir / path;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir.string());
}

harness::ScenarioConfig read_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return config::parse_config("", overrides);
  if (!fs::is_regular_file(path)) throw UsageError("config file " + path + " does not exist");
  return config::load_config(path, overrides);
}

void print_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << name << " (" << m.rows() << "x" << m.cols() << ")\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << " " << g17(m(i, j) + 0.0);
    out << "\n";
  }
}

void print_metrics(std::ostream& out, const harness::RunMetrics& m) {
  out << "final_error: " << g6(m.final_error(0)) << " " << g6(m.final_error(1)) << "\n"
      << "rms_error_tail: " << g6(m.rms_error_tail(0)) << " " << g6(m.rms_error_tail(1)) << "\n"
      << "max_rotor_speed: " << g6(m.max_rotor_speed) << "\n"
      << "estimator_final:";
  for (int i = 0; i < 6; ++i) out << " " << g6(m.estimator_final[i]);
  out << "\n"
      << "min_excitation_final: " << g6(m.min_excitation_final) << "\n"
      << "authority_events: " << m.authority_event_times.size() << "\n"
      << "singularity_hit: " << (m.singularity_hit ? "true" : "false") << "\n";
  if (m.singularity_hit) out << "singularity_time: " << g6(m.singularity_time) << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  const harness::ScenarioConfig cfg = read_config(config_path, overrides);
  const fs::path dir(out_dir);
  prepare_out_dir(dir);
  const fs::path csv = resolve(dir, cfg.outputs.csv_path);
  if (csv.has_parent_path()) prepare_out_dir(csv.parent_path());
  for (const auto& w : cfg.estimator.warnings()) err << "warning: " << w << "\n";

  const harness::RunResult run = harness::run_scenario(cfg);
  trace_io::write_trace_csv(run.trace, csv);
  out << "trace: " << csv.string() << " (" << run.trace.size() << " rows)\n";
  if (cfg.outputs.svg_path && !run.trace.empty()) {
    for (const auto& p : plot::emit_plots(run.trace, resolve(dir, *cfg.outputs.svg_path))) {
      out << "plot: " << p.string() << "\n";
    }
  }
  print_metrics(out, run.metrics);
  if (run.metrics.singularity_hit) {
    err << "error: run aborted at t = " << g6(run.metrics.singularity_time)
        << " s: phi_v reached the Euler-angle singularity guard\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& kind_name, const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& overrides, double dt, std::ostream& out) {
  harness::SweepKind kind;
  try {
    kind = harness::sweep_kind_from_string(kind_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  harness::ScenarioConfig base = read_config(config_path, overrides);
  base.sim.dt = dt;
  if (auto problems = base.validate(); !problems.empty()) throw ValidationError(std::move(problems));
  const fs::path dir(out_dir);
  prepare_out_dir(dir);

  const harness::SweepReport report = harness::run_sweep(kind, base);
  const std::string stem(harness::to_string(kind));
  trace_io::write_trace_csv(report.nominal.trace, dir / (stem + "_nominal.csv"));

  const fs::path summary = dir / (stem + "_sweep.csv");
  std::ofstream s(summary, std::ios::binary | std::ios::trunc);
  if (!s) throw std::runtime_error("cannot open " + summary.string() + " for writing");
  s << "value,max_angle_deviation,rotor_rms_difference,max_rotor_speed,final_error_v,final_error_h,"
       "singularity_hit\n";
  bool aborted = report.nominal.metrics.singularity_hit;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& pt = report.points[i];
    const auto& m = pt.run.metrics;
    s << g17(pt.value) << "," << g17(pt.max_angle_deviation) << "," << g17(pt.rotor_rms_difference) << ","
      << g17(m.max_rotor_speed) << "," << g17(m.final_error(0)) << "," << g17(m.final_error(1)) << ","
      << (m.singularity_hit ? 1 : 0) << "\n";
    trace_io::write_trace_csv(pt.run.trace, dir / (stem + "_" + std::to_string(i + 1) + ".csv"));
    out << stem << " " << g6(pt.value) << ": max angle deviation " << g6(pt.max_angle_deviation)
        << " rad, rotor RMS difference " << g6(100 * pt.rotor_rms_difference) << " %, max rotor speed "
        << g6(m.max_rotor_speed) << " rad/s" << (m.singularity_hit ? ", ABORTED" : "") << "\n";
    aborted = aborted || m.singularity_hit;
  }
  s.close();
  out << "summary: " << summary.string() << "\n";
  for (const auto& p : plot::emit_sweep_plots(report, dir)) out << "plot: " << p.string() << "\n";
  return aborted ? kExitRuntime : kExitOk;
}

int cmd_gains(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& out) {
  const harness::ScenarioConfig cfg = read_config(config_path, overrides);
  const auto servo = controller::design_servo_gains(cfg.controller.q_weight * Matrix6d::Identity(),
                                                    cfg.controller.r_weight * Eigen::Matrix2d::Identity());
  print_matrix(out, "k_x", servo.k_x);
  print_matrix(out, "k_q", servo.k_q);
  out << "servo riccati residual: " << g6(servo.care.residual) << " (" << servo.care.iterations
      << " Kleinman iterations)\n";
  out << "servo closed-loop spectral abscissa: "
      << g6(numerics::spectral_abscissa(controller::servo_closed_loop(servo))) << "\n";

  const auto tracking = controller::design_tracking_gain(cfg.controller.q_weight * Eigen::Matrix4d::Identity(),
                                                         cfg.controller.r_weight * Eigen::Matrix2d::Identity());
  print_matrix(out, "K", tracking.K);
  const auto bm = controller::BrunovskyModel::standard();
  out << "tracking riccati residual: " << g6(tracking.care.residual) << "\n";
  out << "tracking closed-loop spectral abscissa: "
      << g6(numerics::spectral_abscissa(bm.A_c + bm.B_c * tracking.K)) << "\n";
  print_matrix(out, "theta_true", dynamics::theta_true(cfg.params).values().transpose());
  out << "allocation determinant: " << g17(dynamics::allocation_determinant(cfg.params)) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& work_dir, std::ostream& out) {
  acceptance::Options opts;
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) opts.drrs_executable = self;
  if (!work_dir.empty()) opts.work_dir = work_dir;
  const auto results = acceptance::run_all(opts);
  acceptance::print(results, out);
  for (const auto& r : results) {
    if (!r.passed) return kExitRuntime;
  }
  return kExitOk;
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir, std::ostream& out) {
  if (!fs::is_regular_file(trace_path)) throw UsageError("trace file " + trace_path + " does not exist");
  const harness::Trace trace = trace_io::read_trace_csv(trace_path);
  if (trace.empty()) throw UsageError("trace file " + trace_path + " has no rows");
  const fs::path dir = out_dir.empty() ? fs::path(trace_path).parent_path() : fs::path(out_dir);
  if (!dir.empty()) prepare_out_dir(dir);
  for (const auto& p : plot::emit_plots(trace, dir.empty() ? fs::path(".") : dir, fs::path(trace_path).stem().string())) {
    out << "plot: " << p.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-rotor rotational system simulation laboratory", "drrs"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", kind, trace_path, work_dir, plot_out;
  std::vector<std::string> overrides;
  double sweep_dt = harness::kSweepDt;

  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
  simulate->add_option("--config", config_path, "Scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--set", overrides, "Override, e.g. sim.t_final=10");

  auto* sweep = app.add_subcommand("sweep", "Run a robustness sweep");
  sweep->add_option("--kind", kind, "inertia | rotor | axis")->required();
  sweep->add_option("--config", config_path, "Base scenario JSON file (defaults when omitted)");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--set", overrides, "Override applied to the base scenario");
  sweep->add_option("--dt", sweep_dt, "Integration step for every sweep run");

  auto* gains = app.add_subcommand("gains", "Print the LQR servo and tracking gains");
  gains->add_option("--config", config_path, "Scenario JSON file");
  gains->add_option("--set", overrides, "Override");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--work", work_dir, "Scratch directory");

  auto* plot_cmd = app.add_subcommand("plot", "Render SVG plots from a trace CSV");
  plot_cmd->add_option("--trace", trace_path, "Trace CSV")->required();
  plot_cmd->add_option("--out", plot_out, "Output directory (defaults to the trace's directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir, overrides, out, err);
    if (*sweep) return cmd_sweep(kind, config_path, out_dir, overrides, sweep_dt, out);
    if (*gains) return cmd_gains(config_path, overrides, out);
    if (*verify) return cmd_verify(work_dir, out);
    if (*plot_cmd) return cmd_plot(trace_path, plot_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "config parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace drrs::cli
