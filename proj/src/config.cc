#include "drrs/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drrs/errors.h"

namespace drrs::config {
namespace {

using json = nlohmann::json;
using harness::ScenarioConfig;

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError({"override '" + assignment + "' is not of the form key=value"});
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ValidationError({"override key '" + key + "' has an empty component"});
    if (!node->is_object()) throw ValidationError({"override key '" + key + "' does not name an object field"});
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

// Reads one section, recording type errors and unknown keys into `problems`.
class Section {
 public:
  Section(const json& doc, const char* name, std::vector<std::string>& problems)
      : name_(name), problems_(problems) {
    if (!doc.contains(name)) return;
    const json& s = doc.at(name);
    if (!s.is_object()) {
      problems_.push_back(std::string(name) + " must be an object");
      return;
    }
    node_ = &s;
  }

  ~Section() {
    if (!node_) return;
    for (const auto& [key, _] : node_->items()) {
      if (!seen_.count(key)) problems_.push_back("unknown key " + path(key));
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number()) out = v->get<double>();
      else problems_.push_back(path(key) + " must be a number");
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else problems_.push_back(path(key) + " must be a boolean");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else problems_.push_back(path(key) + " must be a string");
    }
  }

  template <int N>
  void vector(const std::string& key, Eigen::Matrix<double, N, 1>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != N ||
          !std::all_of(v->begin(), v->end(), [](const json& e) { return e.is_number(); })) {
        problems_.push_back(path(key) + " must be an array of " + std::to_string(N) + " numbers");
        return;
      }
      for (int i = 0; i < N; ++i) out(i) = (*v)[static_cast<std::size_t>(i)].get<double>();
    }
  }

  void problem(const std::string& key, const std::string& what) { problems_.push_back(path(key) + " " + what); }

 private:
  std::string path(const std::string& key) const { return std::string(name_) + "." + key; }

  const char* name_;
  std::vector<std::string>& problems_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

ScenarioConfig from_json(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ValidationError({"top level must be a JSON object"});
  static const std::set<std::string> kSections{"physical", "command", "estimator", "controller", "sim", "outputs"};
  for (const auto& [key, _] : doc.items()) {
    if (!kSections.count(key)) problems.push_back("unknown key " + key);
  }

  ScenarioConfig cfg;
  {
    Section s(doc, "physical", problems);
    PhysicalParams& p = cfg.params;
    s.number("J1", p.J1);
    s.number("J2", p.J2);
    s.number("J3", p.J3);
    s.number("ell", p.ell);
    s.number("k_f", p.k_f);
    s.number("k_tau", p.k_tau);
    s.number("beta_a", p.beta_a);
    s.number("beta_b", p.beta_b);
  }
  {
    Section s(doc, "command", problems);
    std::string type = "step";
    s.string("type", type);
    if (type == "step") {
      harness::StepCommand step;
      s.vector<2>("value", step.value);
      cfg.command = step;
    } else if (type == "harmonic") {
      harness::HarmonicCommand h;
      s.number("amplitude", h.amplitude);
      s.number("frequency", h.frequency);
      cfg.command = h;
    } else {
      s.problem("type", "must be \"step\" or \"harmonic\"");
    }
  }
  {
    Section s(doc, "estimator", problems);
    auto& e = cfg.estimator;
    s.number("gamma", e.gamma);
    s.number("lambda", e.lambda);
    s.number("c1", e.c1);
    s.number("c2", e.c2);
    s.number("alpha1", e.alpha1);
    s.number("alpha2", e.alpha2);
    Vector6d theta0 = e.theta_hat0.values();
    s.vector<6>("theta_hat0", theta0);
    e.theta_hat0 = ThetaVec(theta0);
    s.boolean("adapt", e.adapt);
  }
  {
    Section s(doc, "controller", problems);
    auto& c = cfg.controller;
    s.number("q_weight", c.q_weight);
    s.number("r_weight", c.r_weight);
    s.number("eps_det", c.control.eps_det);
    s.boolean("paper_literal_sign", c.control.paper_literal_sign);
  }
  {
    Section s(doc, "sim", problems);
    auto& sim = cfg.sim;
    s.number("dt", sim.dt);
    s.number("t_final", sim.t_final);
    std::string mode(to_string(sim.physics_mode));
    s.string("physics_mode", mode);
    try {
      sim.physics_mode = physics_mode_from_string(mode);
    } catch (const std::invalid_argument&) {
      s.problem("physics_mode", "must be \"corrected\" or \"paper_literal\"");
    }
    if (const json* lim = s.find("rotor_speed_limit")) {
      if (lim->is_null()) sim.rotor_speed_limit.reset();
      else if (lim->is_number()) sim.rotor_speed_limit = lim->get<double>();
      else s.problem("rotor_speed_limit", "must be a number or null");
    }
  }
  {
    Section s(doc, "outputs", problems);
    s.string("csv_path", cfg.outputs.csv_path);
    if (const json* svg = s.find("svg_path")) {
      if (svg->is_null()) cfg.outputs.svg_path.reset();
      else if (svg->is_string()) cfg.outputs.svg_path = svg->get<std::string>();
      else s.problem("svg_path", "must be a string or null");
    }
  }

  if (problems.empty()) problems = cfg.validate();
  else for (auto& p : cfg.validate()) problems.push_back(std::move(p));
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return cfg;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return from_json(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  json doc;
  const PhysicalParams& p = cfg.params;
  doc["physical"] = {{"J1", p.J1},   {"J2", p.J2},       {"J3", p.J3},          {"ell", p.ell},
                     {"k_f", p.k_f}, {"k_tau", p.k_tau}, {"beta_a", p.beta_a}, {"beta_b", p.beta_b}};
  if (const auto* step = std::get_if<harness::StepCommand>(&cfg.command)) {
    doc["command"] = {{"type", "step"}, {"value", {step->value(0), step->value(1)}}};
  } else {
    const auto& h = std::get<harness::HarmonicCommand>(cfg.command);
    doc["command"] = {{"type", "harmonic"}, {"amplitude", h.amplitude}, {"frequency", h.frequency}};
  }
  const auto& e = cfg.estimator;
  json theta = json::array();
  for (int i = 0; i < 6; ++i) theta.push_back(e.theta_hat0[i]);
  doc["estimator"] = {{"gamma", e.gamma}, {"lambda", e.lambda}, {"c1", e.c1},
                      {"c2", e.c2},       {"alpha1", e.alpha1}, {"alpha2", e.alpha2},
                      {"theta_hat0", theta}, {"adapt", e.adapt}};
  const auto& c = cfg.controller;
  doc["controller"] = {{"q_weight", c.q_weight},
                       {"r_weight", c.r_weight},
                       {"eps_det", c.control.eps_det},
                       {"paper_literal_sign", c.control.paper_literal_sign}};
  doc["sim"] = {{"dt", cfg.sim.dt},
                {"t_final", cfg.sim.t_final},
                {"physics_mode", std::string(to_string(cfg.sim.physics_mode))},
                {"rotor_speed_limit", cfg.sim.rotor_speed_limit ? json(*cfg.sim.rotor_speed_limit) : json(nullptr)}};
  doc["outputs"] = {{"csv_path", cfg.outputs.csv_path},
                    {"svg_path", cfg.outputs.svg_path ? json(*cfg.outputs.svg_path) : json(nullptr)}};
  return doc.dump(2) + "\n";
}

}  // namespace drrs::config
