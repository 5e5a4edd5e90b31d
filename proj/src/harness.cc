#include "drrs/harness.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <utility>
#include <stdexcept>

#include "drrs/dynamics.h"
#include "drrs/errors.h"
#include "drrs/model.h"
#include "drrs/numerics.h"

namespace drrs::harness {
namespace {

constexpr int kPlant = 0;
constexpr int kIntegrator = 4;
constexpr int kEstimator = 6;
constexpr int kStateSize = kEstimator + estimator::EstimatorState::kPackedSize;
using JointState = Eigen::Matrix<double, kStateSize, 1>;

struct Evaluation {
  JointState derivative;
  Reference ref;
  controller::RotorCommand command;  // applied, after any saturation
  Eigen::Vector2d moments;
  bool authority_lost = false;
};

// Plant, estimator, outer loop and IOL law wired as one vector field.
class ClosedLoop {
 public:
  explicit ClosedLoop(const ScenarioConfig& cfg)
      : cfg_(cfg), theta_star_(dynamics::theta_true(cfg.params)) {
    if (std::holds_alternative<StepCommand>(cfg.command)) {
      servo_ = controller::design_servo_gains(cfg.controller.q_weight * Matrix6d::Identity(),
                                              cfg.controller.r_weight * Eigen::Matrix2d::Identity());
    } else {
      tracking_ = controller::design_tracking_gain(
          cfg.controller.q_weight * Eigen::Matrix4d::Identity(),
          cfg.controller.r_weight * Eigen::Matrix2d::Identity());
    }
  }

  JointState initial_state() const {
    JointState z = JointState::Zero();
    z.segment<estimator::EstimatorState::kPackedSize>(kEstimator) =
        estimator::EstimatorState::initial(cfg_.estimator).pack();
    return z;
  }

  Evaluation evaluate(double t, const JointState& z) {
    const PlantState x = PlantState::from_vector(z.segment<4>(kPlant));
    check_singularity_guard(x.phi_v);
    const Eigen::Vector2d q = z.segment<2>(kIntegrator);
    const estimator::EstimatorState est = estimator::EstimatorState::unpack(
        z.segment<estimator::EstimatorState::kPackedSize>(kEstimator));

    Evaluation ev;
    ev.ref = evaluate_command(cfg_.command, t);
    Eigen::Vector2d v;
    if (servo_) {
      v = controller::servo_v(*servo_, x.to_vector(), q);
    } else {
      Eigen::Vector4d x_d, x_d_dot;
      x_d << ev.ref.r, ev.ref.r_dot;
      x_d_dot << ev.ref.r_dot, ev.ref.r_ddot;
      v = controller::tracking_v(tracking_->K, x.to_vector(), x_d, x_d_dot);
    }

    try {
      ev.command = controller::adaptive_iol_control(x, est.theta_hat, v, cfg_.sim.physics_mode,
                                                    cfg_.controller.control);
    } catch (const SingularControlAuthority&) {
      ev.authority_lost = true;
      ev.command = held_;
    }
    if (cfg_.sim.rotor_speed_limit) {
      const double lim = *cfg_.sim.rotor_speed_limit;
      ev.command.omega_a = std::clamp(ev.command.omega_a, -lim, lim);
      ev.command.omega_b = std::clamp(ev.command.omega_b, -lim, lim);
    }
    ev.command.Omega = dynamics::rotor_map(Eigen::Vector2d(ev.command.omega_a, ev.command.omega_b));
    ev.moments = dynamics::moments(cfg_.params, ev.command.omega_a, ev.command.omega_b);

    const Eigen::Vector4d plant_dot = dynamics::plant_derivative(
        cfg_.params, x, ev.command.omega_a, ev.command.omega_b, cfg_.sim.physics_mode);
    const estimator::EstimatorState est_dot = estimator::estimator_derivative(
        est, x, ev.command.Omega, cfg_.estimator, cfg_.sim.physics_mode);

    ev.derivative.segment<4>(kPlant) = plant_dot;
    ev.derivative.segment<2>(kIntegrator) = ev.ref.r - x.xi1();
    ev.derivative.segment<estimator::EstimatorState::kPackedSize>(kEstimator) = est_dot.pack();

    const Eigen::Vector2d xi2_dot = plant_dot.tail<2>();
    max_linearization_residual_ =
        std::max(max_linearization_residual_, (xi2_dot - v).cwiseAbs().maxCoeff());
    const Eigen::Vector2d regression = model::f1(x, cfg_.sim.physics_mode) +
                                       model::regressor(x, ev.command.Omega) * theta_star_.values();
    max_regressor_residual_ =
        std::max(max_regressor_residual_, (xi2_dot - regression).cwiseAbs().maxCoeff());
    authority_lost_in_step_ = authority_lost_in_step_ || ev.authority_lost;
    return ev;
  }

  void hold(const controller::RotorCommand& cmd) { held_ = cmd; }
  bool take_authority_flag() { return std::exchange(authority_lost_in_step_, false); }
  double max_linearization_residual() const { return max_linearization_residual_; }
  double max_regressor_residual() const { return max_regressor_residual_; }

 private:
  const ScenarioConfig& cfg_;
  ThetaVec theta_star_;
  std::optional<controller::ServoGains> servo_;
  std::optional<controller::TrackingGain> tracking_;
  controller::RotorCommand held_;
  bool authority_lost_in_step_ = false;
  double max_linearization_residual_ = 0.0;
  double max_regressor_residual_ = 0.0;
};

TraceRow make_row(double t, const JointState& z, const Evaluation& ev) {
  TraceRow row;
  row.t = t;
  row.state = PlantState::from_vector(z.segment<4>(kPlant));
  row.r = ev.ref.r;
  row.omega_a = ev.command.omega_a;
  row.omega_b = ev.command.omega_b;
  row.moments = ev.moments;
  row.theta_hat = ThetaVec(z.segment<6>(kStateSize - 6));
  row.q = z.segment<2>(kIntegrator);
  return row;
}

void finish_metrics(const Trace& trace, const JointState& z, RunMetrics& m) {
  if (trace.empty()) return;
  const TraceRow& last = trace.back();
  m.final_error = last.r - last.state.xi1();
  const std::size_t tail_begin = static_cast<std::size_t>(std::floor(0.8 * (trace.size() - 1)));
  Eigen::Vector2d sum_sq = Eigen::Vector2d::Zero();
  for (std::size_t i = tail_begin; i < trace.size(); ++i) {
    sum_sq += (trace[i].r - trace[i].state.xi1()).cwiseAbs2();
  }
  m.rms_error_tail = (sum_sq / static_cast<double>(trace.size() - tail_begin)).cwiseSqrt();
  for (const TraceRow& row : trace) {
    m.max_rotor_speed = std::max({m.max_rotor_speed, std::abs(row.omega_a), std::abs(row.omega_b)});
  }
  m.estimator_final = last.theta_hat;
  const auto est = estimator::EstimatorState::unpack(
      z.segment<estimator::EstimatorState::kPackedSize>(kEstimator));
  m.min_excitation_final = estimator::min_excitation(est.phi_bar);
}

}  // namespace

Reference evaluate_command(const Command& command, double t) {
  if (const auto* step = std::get_if<StepCommand>(&command)) {
    return {step->value, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  }
  const auto& h = std::get<HarmonicCommand>(command);
  const double w = h.frequency;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  return {h.amplitude * Eigen::Vector2d(s, c), h.amplitude * w * Eigen::Vector2d(c, -s),
          -h.amplitude * w * w * Eigen::Vector2d(s, c)};
}

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> problems = params.validate();
  for (auto& p : estimator.validate()) problems.push_back(std::move(p));
  if (const auto* step = std::get_if<StepCommand>(&command)) {
    if (!step->value.allFinite()) problems.emplace_back("command.value must be finite");
  } else {
    const auto& h = std::get<HarmonicCommand>(command);
    if (!std::isfinite(h.amplitude)) problems.emplace_back("command.amplitude must be finite");
    if (!std::isfinite(h.frequency)) problems.emplace_back("command.frequency must be finite");
  }
  if (!(std::isfinite(controller.q_weight) && controller.q_weight >= 0.0)) {
    problems.emplace_back("controller.q_weight must be finite and >= 0");
  }
  if (!(std::isfinite(controller.r_weight) && controller.r_weight > 0.0)) {
    problems.emplace_back("controller.r_weight must be finite and > 0");
  }
  if (!(std::isfinite(controller.control.eps_det) && controller.control.eps_det >= 0.0)) {
    problems.emplace_back("controller.eps_det must be finite and >= 0");
  }
  if (!(std::isfinite(sim.dt) && sim.dt > 0.0)) problems.emplace_back("sim.dt must be finite and > 0");
  if (!(std::isfinite(sim.t_final) && sim.t_final > sim.dt)) {
    problems.emplace_back("sim.t_final must be finite and > sim.dt");
  }
  if (sim.rotor_speed_limit && !(*sim.rotor_speed_limit > 0.0)) {
    problems.emplace_back("sim.rotor_speed_limit must be > 0 when set");
  }
  if (outputs.csv_path.empty()) problems.emplace_back("outputs.csv_path must not be empty");
  return problems;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  if (auto problems = cfg.validate(); !problems.empty()) throw ValidationError(std::move(problems));

  ClosedLoop loop(cfg);
  RunResult result;
  RunMetrics& m = result.metrics;
  const double dt = cfg.sim.dt;
  const long long steps = std::llround(cfg.sim.t_final / dt);
  result.trace.reserve(static_cast<std::size_t>(steps) + 1);

  JointState z = loop.initial_state();
  auto field = [&loop](double t, const JointState& s) { return loop.evaluate(t, s).derivative; };

  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      const Evaluation ev = loop.evaluate(t, z);
      if (!ev.authority_lost) loop.hold(ev.command);
      result.trace.push_back(make_row(t, z, ev));
      if (k < steps) z = numerics::rk4_step(field, z, t, dt);
    } catch (const SingularityError&) {
      m.singularity_hit = true;
      m.singularity_time = t;
      break;
    }
    if (loop.take_authority_flag()) m.authority_event_times.push_back(t);
  }

  m.max_linearization_residual = loop.max_linearization_residual();
  m.max_regressor_residual = loop.max_regressor_residual();
  finish_metrics(result.trace, z, m);
  return result;
}

double max_angle_deviation(const Trace& a, const Trace& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dev = std::max(dev, (a[i].state.xi1() - b[i].state.xi1()).cwiseAbs().maxCoeff());
  }
  return dev;
}

double relative_rotor_rms_difference(const Trace& trace, const Trace& reference) {
  const std::size_t n = std::min(trace.size(), reference.size());
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = trace[i].omega_a - reference[i].omega_a;
    const double db = trace[i].omega_b - reference[i].omega_b;
    diff += da * da + db * db;
    ref += reference[i].omega_a * reference[i].omega_a + reference[i].omega_b * reference[i].omega_b;
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / ref);
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kInertia: return "inertia";
    case SweepKind::kRotorCoefficients: return "rotor";
    case SweepKind::kRotorAxis: return "axis";
  }
  return "unknown";
}

SweepKind sweep_kind_from_string(std::string_view name) {
  if (name == "inertia") return SweepKind::kInertia;
  if (name == "rotor") return SweepKind::kRotorCoefficients;
  if (name == "axis") return SweepKind::kRotorAxis;
  throw std::invalid_argument("unknown sweep kind '" + std::string(name) +
                              "' (expected inertia | rotor | axis)");
}

std::vector<double> sweep_values(SweepKind kind) {
  using std::numbers::pi;
  switch (kind) {
    case SweepKind::kInertia: return {0.1, 0.5, 1.5, 2.0};
    case SweepKind::kRotorCoefficients: return {0.5, 10.0, 100.0, 1000.0};
    case SweepKind::kRotorAxis: return {pi / 8, pi / 6, pi / 4, pi / 3};
  }
  return {};
}

PhysicalParams sweep_params(SweepKind kind, const PhysicalParams& base, double value) {
  PhysicalParams p = base;
  switch (kind) {
    case SweepKind::kInertia:
      p.J1 *= value;
      p.J2 *= value;
      p.J3 *= value;
      break;
    case SweepKind::kRotorCoefficients:
      p.k_f *= value;
      p.k_tau *= value;
      break;
    case SweepKind::kRotorAxis:
      p.beta_a = value;
      p.beta_b = -value;
      break;
  }
  return p;
}

SweepReport run_sweep(SweepKind kind, const ScenarioConfig& base) {
  SweepReport report{kind, {}, {}};
  const std::vector<double> values = sweep_values(kind);

  std::vector<std::future<RunResult>> jobs;
  jobs.push_back(std::async(std::launch::async, [&base] { return run_scenario(base); }));
  for (double value : values) {
    ScenarioConfig cfg = base;
    cfg.params = sweep_params(kind, base.params, value);
    jobs.push_back(std::async(std::launch::async, [cfg] { return run_scenario(cfg); }));
  }

  report.nominal = jobs.front().get();
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint point;
    point.value = values[i];
    point.run = jobs[i + 1].get();
    point.max_angle_deviation = max_angle_deviation(point.run.trace, report.nominal.trace);
    point.rotor_rms_difference = relative_rotor_rms_difference(point.run.trace, report.nominal.trace);
    report.points.push_back(std::move(point));
  }
  return report;
}

}  // namespace drrs::harness
