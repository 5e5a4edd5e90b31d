#include "drrs/acceptance.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <unistd.h>
#include <sstream>

#include "drrs/cli.h"
#include "drrs/config.h"
#include "drrs/controller.h"
#include "drrs/dynamics.h"
#include "drrs/estimator.h"
#include "drrs/harness.h"
#include "drrs/model.h"
#include "drrs/numerics.h"

namespace drrs::acceptance {
namespace {

using std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Draws inside the operating envelope: |phi_v| up to 1.4 rad, rates within
// 3 rad/s, rotor speeds within 10 rad/s.
struct EnvelopeSampler {
  std::mt19937_64 rng{20240917};
  std::uniform_real_distribution<double> phi_v{-1.4, 1.4};
  std::uniform_real_distribution<double> phi_h{-pi, pi};
  std::uniform_real_distribution<double> rate{-3.0, 3.0};
  std::uniform_real_distribution<double> rotor{-10.0, 10.0};

  PlantState state() { return {phi_v(rng), phi_h(rng), rate(rng), rate(rng)}; }
};

Outcome structural_identity() {
  const PhysicalParams params = PhysicalParams::table1();
  const ThetaVec theta = dynamics::theta_true(params);
  double worst = 0.0;
  for (PhysicsMode mode : {PhysicsMode::kCorrected, PhysicsMode::kPaperLiteral}) {
    EnvelopeSampler s;
    for (int i = 0; i < 1000; ++i) {
      const PlantState x = s.state();
      const double wa = s.rotor(s.rng), wb = s.rotor(s.rng);
      const Eigen::Vector2d euler = dynamics::plant_derivative(params, x, wa, wb, mode).tail<2>();
      const Eigen::Vector2d Omega(dynamics::rotor_map(wa), dynamics::rotor_map(wb));
      const Eigen::Vector2d strict = model::f1(x, mode) + model::f2(x) * theta.theta1() +
                                     model::g_matrix(x) * theta.theta2() * Omega;
      worst = std::max(worst, (euler - strict).cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-12, "max residual " + num(worst) + " over 2x1000 draws"};
}

Outcome allocation_rank() {
  bool ok = true;
  std::string detail;
  PhysicalParams p = PhysicalParams::table1();
  const double scale = p.ell * p.ell * p.k_f * p.k_f + p.k_tau * p.k_tau;

  for (double beta : {0.0, pi / 4}) {
    p.beta_a = p.beta_b = beta;
    const bool exact = dynamics::allocation_determinant(p) == 0.0 &&
                       dynamics::allocation_matrix(p).determinant() == 0.0;
    ok = ok && exact;
  }
  // nπ is not representable, so zero is judged relative to the allocation scale.
  double worst_zero = 0.0;
  for (int n = -2; n <= 2; ++n) {
    p.beta_b = 0.3;
    p.beta_a = 0.3 + n * pi;
    worst_zero = std::max(worst_zero, std::abs(dynamics::allocation_determinant(p)) / scale);
  }
  ok = ok && worst_zero < 1e-15;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-pi, pi), log_scale(-1.0, 1.0);
  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    PhysicalParams q;
    q.ell = std::pow(10.0, log_scale(rng));
    q.k_f = 4e-3 * std::pow(10.0, log_scale(rng));
    q.k_tau = 7.5e-4 * std::pow(10.0, log_scale(rng));
    q.beta_a = angle(rng);
    q.beta_b = angle(rng);
    const Eigen::Matrix2d c = dynamics::allocation_matrix(q);
    const double explicit_det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
    const double s = q.ell * q.ell * q.k_f * q.k_f + q.k_tau * q.k_tau;
    worst_rel = std::max(worst_rel, std::abs(explicit_det - dynamics::allocation_determinant(q)) / s);
  }
  ok = ok && worst_rel < 1e-15;
  detail = "n*pi zero residual " + num(worst_zero) + ", closed form vs 2x2 " + num(worst_rel) + " (relative)";
  return {ok, detail};
}

harness::ScenarioConfig frozen_exact_config(PhysicsMode mode) {
  harness::ScenarioConfig cfg;
  cfg.sim.physics_mode = mode;
  cfg.estimator.theta_hat0 = dynamics::theta_true(cfg.params);
  cfg.estimator.adapt = false;
  return cfg;
}

Outcome exact_linearization() {
  double worst = 0.0;
  bool ok = true;
  for (PhysicsMode mode : {PhysicsMode::kCorrected, PhysicsMode::kPaperLiteral}) {
    const auto run = harness::run_scenario(frozen_exact_config(mode));
    ok = ok && !run.metrics.singularity_hit && run.metrics.authority_event_times.empty();
    worst = std::max(worst, run.metrics.max_linearization_residual);
  }
  return {ok && worst < 1e-10, "max |xi2_dot - v| " + num(worst) + " over every RK4 stage, both modes"};
}

Outcome care_solver() {
  const auto gains = controller::design_servo_gains(10.0 * Matrix6d::Identity(), Eigen::Matrix2d::Identity());
  const double asym = (gains.care.P - gains.care.P.transpose()).cwiseAbs().maxCoeff();
  const double abscissa = numerics::spectral_abscissa(controller::servo_closed_loop(gains));

  numerics::LqrProblem di;
  di.A = Eigen::Matrix2d{{0, 1}, {0, 0}};
  di.B = Eigen::Vector2d(0, 1);
  di.Q = Eigen::Matrix2d::Identity();
  di.R = Eigen::Matrix<double, 1, 1>::Identity();
  const auto sol = numerics::care_solve(di);
  const double k_err = std::max(std::abs(sol.K(0, 0) - 1.0), std::abs(sol.K(0, 1) - std::sqrt(3.0)));

  const bool ok = gains.care.residual < 1e-8 && asym <= 1e-12 && abscissa < -1e-6 && k_err < 1e-9;
  return {ok, "residual " + num(gains.care.residual) + ", asymmetry " + num(asym) + ", abscissa " + num(abscissa) +
                  ", double-integrator K error " + num(k_err)};
}

Outcome step_tracking() {
  const auto run = harness::run_scenario(harness::ScenarioConfig{});
  const auto& m = run.metrics;
  std::size_t late_events = 0;
  for (double t : m.authority_event_times) late_events += t > 1.0;
  const double err = m.final_error.cwiseAbs().maxCoeff();
  const bool ok = !m.singularity_hit && late_events == 0 && err < 1e-2;
  return {ok, "|r - y(30)| = (" + num(std::abs(m.final_error(0))) + ", " + num(std::abs(m.final_error(1))) +
                  "), authority events after 1 s: " + std::to_string(late_events)};
}

Outcome harmonic_tracking() {
  harness::ScenarioConfig cfg;
  cfg.command = harness::HarmonicCommand{};
  const auto run = harness::run_scenario(cfg);
  // Rows with t in [24, 30].
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  int n = 0;
  for (const auto& row : run.trace) {
    if (row.t < 24.0 - 1e-9) continue;
    sum += (row.r - row.state.xi1()).cwiseAbs2();
    ++n;
  }
  const Eigen::Vector2d rms = n ? Eigen::Vector2d((sum / n).cwiseSqrt()) : Eigen::Vector2d::Constant(INFINITY);
  const bool ok = !run.metrics.singularity_hit && rms.maxCoeff() < 0.02;
  return {ok, "tail RMS error (" + num(rms(0)) + ", " + num(rms(1)) + ") rad"};
}

Outcome finite_time_estimator() {
  const ThetaVec theta_star = dynamics::theta_true(PhysicalParams::table1());
  estimator::EstimatorConfig cfg;
  const Matrix6d phi_bar = Matrix6d::Identity();
  const Vector6d xi_bar = theta_star.values();
  const double t_pred = std::pow(theta_star.values().norm(), 1.0 - cfg.alpha1) /
                        ((cfg.c1 + cfg.c2) * (1.0 - cfg.alpha1));

  // Implementation path: theta_update under RK4 at dt.
  const double dt = 1e-3;
  const double t_end = 1.5 * t_pred;
  const long steps = std::lround(t_end / dt);
  std::vector<Vector6d> coarse;
  Vector6d theta = Vector6d::Zero();
  coarse.push_back(theta);
  for (long k = 0; k < steps; ++k) {
    theta = numerics::rk4_step(
        [&](double, const Vector6d& th) { return estimator::theta_update(phi_bar, xi_bar, ThetaVec(th), cfg); },
        theta, k * dt, dt);
    coarse.push_back(theta);
  }

  // Oracle: explicit Euler at dt/10 on the same law, written out directly.
  const double fine_dt = dt / 10;
  Vector6d brute = Vector6d::Zero();
  double max_gap = 0.0;
  for (long k = 0; k < steps; ++k) {
    for (int j = 0; j < 10; ++j) {
      const Vector6d xi = brute - xi_bar;
      const double r = xi.norm();
      if (r > 0.0) {
        brute -= fine_dt * (cfg.c1 * xi / std::pow(r, 1.0 - cfg.alpha1) + cfg.c2 * xi / std::pow(r, 1.0 - cfg.alpha2));
      }
    }
    max_gap = std::max(max_gap, (brute - coarse[static_cast<std::size_t>(k + 1)]).norm());
  }

  double worst_after = 0.0;
  for (long k = 0; k <= steps; ++k) {
    if (k * dt >= 1.05 * t_pred) {
      worst_after = std::max(worst_after, (coarse[static_cast<std::size_t>(k)] - theta_star.values()).norm());
    }
  }
  const bool ok = worst_after < 1e-3 && max_gap < 1e-4;
  return {ok, "T_pred " + num(t_pred) + " s, max error after 1.05 T_pred " + num(worst_after) +
                  ", gap to fine-step oracle " + num(max_gap)};
}

Outcome robustness_sweeps() {
  harness::ScenarioConfig base;
  base.sim.dt = harness::kSweepDt;
  bool ok = true;
  std::ostringstream detail;
  for (auto kind : {harness::SweepKind::kInertia, harness::SweepKind::kRotorCoefficients,
                    harness::SweepKind::kRotorAxis}) {
    const auto report = harness::run_sweep(kind, base);
    double worst_dev = 0.0;
    double min_pair = INFINITY;
    bool completed = !report.nominal.metrics.singularity_hit;
    for (const auto& pt : report.points) {
      completed = completed && !pt.run.metrics.singularity_hit &&
                  pt.run.trace.size() == report.nominal.trace.size();
      worst_dev = std::max(worst_dev, pt.max_angle_deviation);
    }
    for (std::size_t i = 0; i < report.points.size(); ++i) {
      for (std::size_t j = 0; j < report.points.size(); ++j) {
        if (i == j) continue;
        min_pair = std::min(min_pair, harness::relative_rotor_rms_difference(report.points[i].run.trace,
                                                                             report.points[j].run.trace));
      }
    }
    const bool kind_ok = completed && worst_dev < 0.05 && min_pair > 0.10;
    ok = ok && kind_ok;
    detail << harness::to_string(kind) << ": " << (completed ? "complete" : "ABORTED") << ", dev "
           << num(worst_dev) << ", min pairwise rotor diff " << num(min_pair) << "; ";
  }
  std::string d = detail.str();
  if (d.size() >= 2) d.resize(d.size() - 2);
  return {ok, d};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int invoke_simulate(const Options& options, const std::filesystem::path& config,
                    const std::filesystem::path& out) {
  if (!options.drrs_executable.empty()) {
    const std::string cmd = "\"" + options.drrs_executable.string() + "\" simulate --config \"" +
                            config.string() + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
  }
  std::vector<std::string> args{"drrs", "simulate", "--config", config.string(), "--out", out.string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream sink;
  return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
}

Outcome determinism(const Options& options) {
  namespace fs = std::filesystem;
  const fs::path dir = options.work_dir.empty()
                           ? fs::temp_directory_path() / ("drrs_accept_" + std::to_string(::getpid()))
                           : options.work_dir;
  fs::create_directories(dir);
  const fs::path config = dir / "determinism.json";
  {
    std::ofstream out(config, std::ios::binary);
    out << config::serialize_config(harness::ScenarioConfig{});
  }
  const int a = invoke_simulate(options, config, dir / "run_a");
  const int b = invoke_simulate(options, config, dir / "run_b");
  if (a != 0 || b != 0) return {false, "simulate exited with " + std::to_string(a) + "/" + std::to_string(b)};
  const std::string csv_a = slurp(dir / "run_a" / "trace.csv");
  const std::string csv_b = slurp(dir / "run_b" / "trace.csv");
  const bool ok = !csv_a.empty() && csv_a == csv_b;
  if (options.work_dir.empty()) fs::remove_all(dir);
  return {ok, std::to_string(csv_a.size()) + " bytes, " + (ok ? "identical" : "DIFFERENT") +
                  (options.drrs_executable.empty() ? " (in-process)" : "")};
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"structural identity (Euler form vs strict-feedback form)", structural_identity},
      {"allocation rank conditions", allocation_rank},
      {"exact linearization with frozen true parameters", exact_linearization},
      {"CARE solver", care_solver},
      {"step tracking", step_tracking},
      {"harmonic tracking", harmonic_tracking},
      {"finite-time estimator oracle", finite_time_estimator},
      {"robustness sweeps", robustness_sweeps},
      {"CLI determinism", [&options] { return determinism(options); }},
  };
  // Per-criterion wall-clock budgets in seconds; 0 = none.
  const std::array<double, 9> budget{1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 0.0, 60.0, 0.0};

  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult r;
    r.id = static_cast<int>(i + 1);
    r.title = criteria[i].first;
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, {}};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = o.passed;
    r.detail = o.detail;
    if (budget[i] > 0.0 && r.seconds >= budget[i]) {
      r.passed = false;
      r.detail += "; over the " + num(budget[i]) + " s budget";
    }
    results.push_back(std::move(r));
  }
  return results;
}

void print(const std::vector<CriterionResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f s", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.title << " (" << r.detail << ", " << secs << ")\n";
  }
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  out << passed << "/" << results.size() << " criteria passed\n";
}

}  // namespace drrs::acceptance
