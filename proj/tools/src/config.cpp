#include "fracstep_app/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep::app {

namespace {

using nlohmann::json;

// Object view that remembers which keys were read and rejects the rest.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }
  [[nodiscard]] std::string at(const std::string& key) const { return path_ + "/" + key; }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(at(key), "required key missing");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "expected a finite number");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t minimum = 1) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
      throw ConfigError(at(key), "expected an integer >= " + std::to_string(minimum));
    }
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected a boolean");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t min_size = 1) {
    const json& v = get(key);
    if (!v.is_array() || v.size() < min_size) {
      throw ConfigError(at(key), "expected an array of at least " + std::to_string(min_size) + " numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        throw ConfigError(at(key) + "/" + std::to_string(i), "expected a finite number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  /// Throws on keys that were never read.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.contains(key)) throw ConfigError(at(key), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::function<double(double)> linear_samples(std::vector<double> values, double length) {
  return [values = std::move(values), length](double x) {
    const double u = std::clamp(x / length, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(u), values.size() - 2);
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * values[i] + w * values[i + 1];
  };
}

struct Coefficient {
  bool constant = true;
  double value = 0.0;
  std::function<double(double)> fn;
};

Coefficient coefficient(Object& parent, const std::string& key, double fallback, double length) {
  Coefficient c;
  c.value = fallback;
  if (!parent.has(key)) return c;
  const json& v = parent.get(key);
  if (v.is_number()) {
    c.value = v.get<double>();
    return c;
  }
  Object o(v, parent.at(key));
  auto samples = o.numbers("samples", 2);
  o.finish();
  c.constant = false;
  c.fn = linear_samples(std::move(samples), length);
  return c;
}

OrderSchedule parse_schedule(Object& o) {
  try {
    if (o.has("order")) {
      const double order = o.number("order");
      const double horizon = o.number("horizon", 1.0);
      o.finish();
      return OrderSchedule::constant(order, horizon);
    }
    auto breakpoints = o.numbers("breakpoints", 2);
    auto orders = o.numbers("orders", 1);
    o.finish();
    return OrderSchedule(std::move(breakpoints), std::move(orders));
  } catch (const Error& e) {
    throw ConfigError(o.path(), e.what());
  }
}

std::vector<std::pair<std::size_t, double>> mode_pairs(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of [n, coefficient] pairs");
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& p = v[i];
    const std::string here = path + "/" + std::to_string(i);
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || p[0].get<long long>() < 1 ||
        !p[1].is_number()) {
      throw ConfigError(here, "expected [n >= 1, coefficient]");
    }
    out.emplace_back(p[0].get<std::size_t>(), p[1].get<double>());
  }
  return out;
}

std::function<double(double)> parse_initial(Object& o, double length) {
  std::function<double(double)> fn = [](double) { return 0.0; };
  int forms = 0;
  if (o.has("eigenmodes")) {
    ++forms;
    auto pairs = mode_pairs(o.get("eigenmodes"), o.at("eigenmodes"));
    fn = [pairs, length](double x) {
      double s = 0.0;
      for (const auto& [n, c] : pairs) s += c * sine_mode(n, length, x);
      return s;
    };
  }
  if (o.has("sines")) {
    ++forms;
    auto pairs = mode_pairs(o.get("sines"), o.at("sines"));
    fn = [pairs, length](double x) {
      double s = 0.0;
      for (const auto& [n, c] : pairs) s += c * std::sin(static_cast<double>(n) * std::numbers::pi * x / length);
      return s;
    };
  }
  if (o.has("samples")) {
    ++forms;
    fn = linear_samples(o.numbers("samples", 2), length);
  }
  if (forms > 1) throw ConfigError(o.path(), "give exactly one of eigenmodes, sines, samples");
  o.finish();
  return fn;
}

SourceTerm::SeparablePart parse_term(Object& o, double length) {
  SourceTerm::SeparablePart part;
  {
    Object shape(o.get("shape"), o.at("shape"));
    const std::size_t n = shape.count("sine", 1);
    const bool normalized = shape.flag("normalized", true);
    shape.finish();
    const double scale = normalized ? std::sqrt(2.0 / length) : 1.0;
    part.shape = [n, length, scale](double x) {
      return scale * std::sin(static_cast<double>(n) * std::numbers::pi * x / length);
    };
  }
  Object p(o.get("profile"), o.at("profile"));
  const std::string type = p.text("type", "");
  if (type == "constant") {
    const double c = p.number("value");
    part.profile = [c](double) { return c; };
    part.profile_derivative = [](double) { return 0.0; };
  } else if (type == "power") {
    const double c = p.number("coefficient", 1.0);
    const double q = p.number("exponent");
    if (q < 0.0) throw ConfigError(p.at("exponent"), "exponent must be >= 0");
    part.profile = [c, q](double t) { return q == 0.0 ? c : c * std::pow(t, q); };
    part.profile_derivative = [c, q](double t) {
      if (q == 0.0) return 0.0;
      if (t == 0.0) return q == 1.0 ? c : (q > 1.0 ? 0.0 : std::copysign(HUGE_VAL, c));
      return c * q * std::pow(t, q - 1.0);
    };
  } else if (type == "polynomial") {
    auto a = p.numbers("coefficients", 1);
    part.profile = [a](double t) {
      double s = 0.0;
      for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * t + *it;
      return s;
    };
    part.profile_derivative = [a](double t) {
      double s = 0.0;
      for (std::size_t k = a.size(); k-- > 1;) s = s * t + static_cast<double>(k) * a[k];
      return s;
    };
  } else if (type == "exp") {
    const double c = p.number("coefficient", 1.0);
    const double r = p.number("rate");
    part.profile = [c, r](double t) { return c * std::exp(r * t); };
    part.profile_derivative = [c, r](double t) { return c * r * std::exp(r * t); };
  } else {
    throw ConfigError(p.at("type"), "expected one of constant, power, polynomial, exp");
  }
  p.finish();
  o.finish();
  return part;
}

SourceTerm parse_source(Object& o, double length) {
  const json& terms = o.get("terms");
  if (!terms.is_array()) throw ConfigError(o.at("terms"), "expected an array");
  std::vector<SourceTerm::SeparablePart> parts;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Object t(terms[i], o.at("terms") + "/" + std::to_string(i));
    parts.push_back(parse_term(t, length));
  }
  o.finish();
  return parts.empty() ? SourceTerm::zero() : SourceTerm::separable(std::move(parts));
}

ProblemSpec parse_problem(Object& o) {
  ProblemSpec spec;
  const double length = o.number("length", 1.0);
  if (!(length > 0.0)) throw ConfigError(o.at("length"), "length must be positive");

  bool constant = true;
  {
    Coefficient a{true, 1.0, {}};
    Coefficient c{true, 0.0, {}};
    if (o.has("operator")) {
      Object op(o.get("operator"), o.at("operator"));
      a = coefficient(op, "diffusivity", 1.0, length);
      c = coefficient(op, "reaction", 0.0, length);
      op.finish();
    }
    constant = a.constant && c.constant;
    if (constant) {
      spec.op = OperatorSpec::constant_coefficients(length, a.value, c.value);
    } else {
      auto fa = a.constant ? std::function<double(double)>([v = a.value](double) { return v; }) : a.fn;
      auto fc = c.constant ? std::function<double(double)>([v = c.value](double) { return v; }) : c.fn;
      spec.op = OperatorSpec::sampled_coefficients(length, fa, fc);
    }
  }
  const std::string backend = o.text("backend", constant ? "analytic" : "finite_difference");
  if (backend == "analytic") {
    if (!constant) throw ConfigError(o.at("backend"), "the analytic backend needs constant coefficients");
    spec.backend = OperatorBackend::analytic;
  } else if (backend == "finite_difference") {
    spec.backend = OperatorBackend::finite_difference;
  } else {
    throw ConfigError(o.at("backend"), "expected analytic or finite_difference");
  }

  {
    Object s(o.get("schedule"), o.at("schedule"));
    spec.schedule = parse_schedule(s);
  }
  if (o.has("initial")) {
    Object i(o.get("initial"), o.at("initial"));
    spec.initial = parse_initial(i, length);
  }
  if (o.has("source")) {
    Object s(o.get("source"), o.at("source"));
    spec.source = parse_source(s, length);
  }
  if (o.has("epsilons")) spec.epsilons = o.numbers("epsilons");
  spec.modes = o.count("modes", spec.modes);
  spec.spatial_points = o.count("spatial_points", spec.spatial_points, 4);
  if (o.has("quadrature")) {
    Object q(o.get("quadrature"), o.at("quadrature"));
    spec.quad.cells = q.count("cells", spec.quad.cells);
    spec.quad.grading = q.number("grading", spec.quad.grading);
    if (!(spec.quad.grading >= 1.0)) {
      throw ConfigError(q.at("grading"), "grading must be >= 1");
    }
    spec.quad.jacobi_nodes = q.count("jacobi_nodes", spec.quad.jacobi_nodes);
    q.finish();
  }
  o.finish();
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(o.path(), e.what());
  }
  return spec;
}

void parse_run(Object& o, RunConfig& cfg) {
  const double horizon = cfg.problem.schedule.horizon();
  std::size_t count = 101;
  if (o.has("times")) {
    Object t(o.get("times"), o.at("times"));
    if (t.has("values")) {
      cfg.times = t.numbers("values");
      for (double v : cfg.times) {
        if (!(v >= 0.0 && v <= horizon)) throw ConfigError(t.at("values"), "times must lie in [0, T]");
      }
    } else {
      count = t.count("count", count, 2);
    }
    t.finish();
  }
  if (cfg.times.empty()) {
    for (std::size_t i = 0; i < count; ++i) {
      cfg.times.push_back(i + 1 == count ? horizon : horizon * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  }
  cfg.x_points = o.count("x_points", cfg.x_points, 2);
  if (o.has("oracle")) {
    Object r(o.get("oracle"), o.at("oracle"));
    cfg.oracle.tau = r.number("tau", cfg.oracle.tau);
    if (!(cfg.oracle.tau > 0.0)) throw ConfigError(r.at("tau"), "tau must be positive");
    const std::string mode = r.text("mode", "modes");
    if (mode != "modes" && mode != "full") throw ConfigError(r.at("mode"), "expected modes or full");
    cfg.oracle.full = mode == "full";
    cfg.oracle.spatial_points = r.count("spatial_points", cfg.oracle.spatial_points, 16);
    r.finish();
  }
  if (o.has("compare")) {
    Object c(o.get("compare"), o.at("compare"));
    const auto e = c.numbers("tau_exponents");
    cfg.compare.tau_exponents.clear();
    for (double v : e) {
      if (v != std::floor(v) || v < 0.0 || v > 24.0) {
        throw ConfigError(c.at("tau_exponents"), "exponents must be integers in [0, 24]");
      }
      cfg.compare.tau_exponents.push_back(static_cast<int>(v));
    }
    c.finish();
  }
  if (o.has("ml")) {
    Object m(o.get("ml"), o.at("ml"));
    const json& pts = m.get("points");
    if (!pts.is_array()) throw ConfigError(m.at("points"), "expected an array of [alpha, beta, z]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const json& p = pts[i];
      if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number()) {
        throw ConfigError(m.at("points") + "/" + std::to_string(i), "expected [alpha, beta, z]");
      }
      cfg.ml_points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    m.finish();
  }
  o.finish();
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  cfg.source = doc;
  Object root(doc, "");
  if (root.has("$schema")) root.get("$schema");
  if (root.has("description")) root.get("description");
  {
    Object p(root.get("problem"), "/problem");
    cfg.problem = parse_problem(p);
  }
  if (root.has("run")) {
    Object r(root.get("run"), "/run");
    parse_run(r, cfg);
  } else {
    json empty = json::object();
    Object r(empty, "/run");
    parse_run(r, cfg);
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace fracstep::app
