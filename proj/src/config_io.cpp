#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "thermoplast/cli_io.hpp"

namespace thermoplast {

namespace {

using K = ConfigError::Kind;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Value {
  std::string key;
  std::string text;
  int line;
};

double as_double(const Value& v) {
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) throw ConfigError(K::invalid_value, v.key, v.line, "expected a number, got '" + v.text + "'");
  return out;
}

template <class I = int>
I as_int(const Value& v) {
  I out = 0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) throw ConfigError(K::invalid_value, v.key, v.line, "expected an integer, got '" + v.text + "'");
  return out;
}

bool as_bool(const Value& v) {
  if (v.text == "true" || v.text == "1" || v.text == "yes") return true;
  if (v.text == "false" || v.text == "0" || v.text == "no") return false;
  throw ConfigError(K::invalid_value, v.key, v.line, "expected true or false, got '" + v.text + "'");
}

std::vector<double> as_list(const Value& v) {
  std::vector<double> out;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(as_double({v.key, trim(item), v.line}));
  if (out.empty()) throw ConfigError(K::invalid_value, v.key, v.line, "expected a comma-separated list");
  return out;
}

template <class E>
E as_enum(const Value& v, const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [n, e] : names)
    if (v.text == n) return e;
  std::string allowed;
  for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n);
  throw ConfigError(K::invalid_value, v.key, v.line, "unknown value '" + v.text + "' (allowed: " + allowed + ")");
}

const std::vector<std::pair<const char*, ThermalStressFunction::Kind>> f_kinds = {
    {"piecewise_power", ThermalStressFunction::Kind::piecewise_power},
    {"zero", ThermalStressFunction::Kind::zero},
    {"expression", ThermalStressFunction::Kind::expression}};
const std::vector<std::pair<const char*, BoundaryFluxSpec::Kind>> g_kinds = {
    {"zero", BoundaryFluxSpec::Kind::zero},         {"constant", BoundaryFluxSpec::Kind::constant},
    {"sin_time", BoundaryFluxSpec::Kind::sin_time}, {"x_linear", BoundaryFluxSpec::Kind::x_linear},
    {"smooth", BoundaryFluxSpec::Kind::smooth}};
const std::vector<std::pair<const char*, InitialTemperatureSpec::Kind>> theta0_kinds = {
    {"constant", InitialTemperatureSpec::Kind::constant}, {"bump", InitialTemperatureSpec::Kind::bump}};
const std::vector<std::pair<const char*, BodyForceSpec::Kind>> load_kinds = {
    {"zero", BodyForceSpec::Kind::zero},
    {"constant", BodyForceSpec::Kind::constant},
    {"ramp", BodyForceSpec::Kind::ramp},
    {"gaussian", BodyForceSpec::Kind::gaussian}};

using Setter = std::function<void(ModelConfig&, const Value&)>;

#define TP_DOUBLE(key, field) {key, [](ModelConfig& c, const Value& v) { c.field = as_double(v); }}
#define TP_INT(key, field) {key, [](ModelConfig& c, const Value& v) { c.field = as_int(v); }}
#define TP_BOOL(key, field) {key, [](ModelConfig& c, const Value& v) { c.field = as_bool(v); }}
#define TP_LIST(key, field) {key, [](ModelConfig& c, const Value& v) { c.field = as_list(v); }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      TP_INT("grid.nx", grid.nx),
      TP_INT("grid.ny", grid.ny),
      TP_DOUBLE("grid.lx", grid.lx),
      TP_DOUBLE("grid.ly", grid.ly),
      TP_DOUBLE("material.lame_first", material.lame_first),
      TP_DOUBLE("material.lame_second", material.lame_second),
      TP_DOUBLE("flow.k", flow.k),
      TP_DOUBLE("flow.lambda", flow.lambda),
      {"flow.f", [](ModelConfig& c, const Value& v) { c.flow.f.kind = as_enum(v, f_kinds); }},
      TP_DOUBLE("flow.a", flow.f.a),
      TP_DOUBLE("flow.M", flow.f.M),
      TP_DOUBLE("flow.alpha", flow.f.alpha),
      TP_DOUBLE("flow.c_neg", flow.f.c_neg),
      {"flow.expression",
       [](ModelConfig& c, const Value& v) {
         try {
           c.flow.f.expression = Expression::parse(v.text);
         } catch (const ExpressionError& e) {
           throw ConfigError(K::invalid_value, v.key, v.line, e.what());
         }
       }},
      {"thermal.g", [](ModelConfig& c, const Value& v) { c.thermal.g.kind = as_enum(v, g_kinds); }},
      TP_DOUBLE("thermal.g_value", thermal.g.value),
      TP_DOUBLE("thermal.g_omega", thermal.g.omega),
      {"thermal.theta0", [](ModelConfig& c, const Value& v) { c.thermal.theta0.kind = as_enum(v, theta0_kinds); }},
      TP_DOUBLE("thermal.theta0_value", thermal.theta0.value),
      TP_DOUBLE("thermal.theta0_amplitude", thermal.theta0.amplitude),
      {"loads.F", [](ModelConfig& c, const Value& v) { c.loads.kind = as_enum(v, load_kinds); }},
      TP_DOUBLE("loads.fx", loads.fx),
      TP_DOUBLE("loads.fy", loads.fy),
      TP_DOUBLE("loads.t_ramp", loads.t_ramp),
      TP_DOUBLE("loads.x0", loads.x0),
      TP_DOUBLE("loads.y0", loads.y0),
      TP_DOUBLE("loads.width", loads.width),
      TP_DOUBLE("time.t_end", time.t_end),
      TP_DOUBLE("time.dt", time.dt),
      TP_BOOL("time.allow_dt_above_lambda", time.allow_dt_above_lambda),
      TP_DOUBLE("solver.cg_tol", solver.cg_tol),
      TP_INT("solver.cg_maxit", solver.cg_maxit),
      TP_BOOL("solver.jacobi", solver.jacobi),
      TP_DOUBLE("solver.picard_tol", solver.picard_tol),
      TP_INT("solver.picard_max", solver.picard_max),
      TP_DOUBLE("solver.picard_damping", solver.picard_damping),
      TP_DOUBLE("solver.picard_r", solver.picard_r),
      TP_INT("solver.plastic_max", solver.plastic_max),
      TP_INT("output.every", output.every),
      TP_BOOL("output.vtk", output.vtk),
      TP_BOOL("output.csv", output.csv),
      TP_DOUBLE("diagnostics.trunc_K", diagnostics.trunc_K),
      TP_DOUBLE("diagnostics.boccardo_q", diagnostics.boccardo_q),
      TP_LIST("diagnostics.tail_K", diagnostics.tail_K),
      TP_DOUBLE("diagnostics.tail_C", diagnostics.tail_C),
      TP_LIST("diagnostics.renorm_M", diagnostics.renorm_M),
      TP_DOUBLE("diagnostics.dissipation_tol", diagnostics.dissipation_tol),
      TP_DOUBLE("diagnostics.trace_tol", diagnostics.trace_tol),
      TP_DOUBLE("diagnostics.m_balance_tol", diagnostics.m_balance_tol),
      {"seed", [](ModelConfig& c, const Value& v) { c.seed = as_int<unsigned>(v); }},
  };
  return table;
}

#undef TP_DOUBLE
#undef TP_INT
#undef TP_BOOL
#undef TP_LIST

// Keys a custom scenario must set explicitly.
const std::vector<std::string> custom_required = {"flow.k", "flow.lambda", "time.dt", "time.t_end"};

std::string num(double v) { return fmt::format("{}", v); }

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out;
}

}  // namespace

std::vector<std::string> scenario_names() { return {"shear_ramp", "thermal_bump", "elastic_only", "custom"}; }

ModelConfig scenario_config(const std::string& name) {
  ModelConfig c;
  c.scenario = name;
  if (name == "shear_ramp") {
    c.loads.kind = BodyForceSpec::Kind::ramp;
    c.loads.fx = 4.0;
    c.loads.t_ramp = 0.25;
    c.thermal.g.kind = BoundaryFluxSpec::Kind::constant;
    c.thermal.g.value = 1.0;
  } else if (name == "thermal_bump") {
    c.thermal.theta0.kind = InitialTemperatureSpec::Kind::bump;
    c.thermal.theta0.amplitude = 6.0;
    c.time.dt = 0.025;
  } else if (name == "elastic_only") {
    c.loads.kind = BodyForceSpec::Kind::constant;
    c.loads.fx = 0.5;
  } else if (name != "custom") {
    throw ConfigError(K::invalid_value, "scenario", 0,
                      "unknown scenario '" + name + "' (allowed: shear_ramp, thermal_bump, elastic_only, custom)");
  }
  return c;
}

ModelConfig parse_config(const std::string& text) {
  std::vector<Value> values;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(K::syntax, trim(body), line, "expected 'key = value'");
    Value v{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
    if (v.key.empty()) throw ConfigError(K::syntax, "", line, "missing key before '='");
    if (v.text.empty()) throw ConfigError(K::syntax, v.key, line, "missing value after '='");
    if (v.key != "scenario" && !setters().count(v.key)) throw ConfigError(K::unknown_key, v.key, line, "unknown key");
    if (seen.count(v.key))
      throw ConfigError(K::syntax, v.key, line, fmt::format("duplicate key (first set on line {})", seen[v.key]));
    seen[v.key] = line;
    values.push_back(std::move(v));
  }

  std::string scenario = "shear_ramp";
  for (const auto& v : values)
    if (v.key == "scenario") scenario = v.text;
  ModelConfig cfg;
  try {
    cfg = scenario_config(scenario);
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), "scenario", seen.count("scenario") ? seen["scenario"] : 0, "unknown scenario '" + scenario + "'");
  }
  if (scenario == "custom")
    for (const auto& key : custom_required)
      if (!seen.count(key)) throw ConfigError(K::missing_key, key, 0, "required by the custom scenario");

  for (const auto& v : values)
    if (v.key != "scenario") setters().at(v.key)(cfg, v);

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const auto it = seen.find(e.key());
    if (it == seen.end() || e.line() != 0) throw;
    std::string msg = e.what();
    const std::string prefix = e.key() + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ConfigError(e.kind(), e.key(), it->second, msg);
  }
  return cfg;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(K::syntax, "", 0, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ModelConfig& c) {
  std::string o;
  auto put = [&o](const std::string& key, const std::string& value) { o += key + " = " + value + "\n"; };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  put("scenario", c.scenario);
  put("seed", std::to_string(c.seed));
  put("grid.nx", std::to_string(c.grid.nx));
  put("grid.ny", std::to_string(c.grid.ny));
  put("grid.lx", num(c.grid.lx));
  put("grid.ly", num(c.grid.ly));
  put("material.lame_first", num(c.material.lame_first));
  put("material.lame_second", num(c.material.lame_second));
  put("flow.k", num(c.flow.k));
  put("flow.lambda", num(c.flow.lambda));
  put("flow.f", to_string(c.flow.f.kind));
  put("flow.a", num(c.flow.f.a));
  put("flow.M", num(c.flow.f.M));
  put("flow.alpha", num(c.flow.f.alpha));
  put("flow.c_neg", num(c.flow.f.c_neg));
  if (c.flow.f.expression) put("flow.expression", c.flow.f.expression->text());
  put("thermal.g", to_string(c.thermal.g.kind));
  put("thermal.g_value", num(c.thermal.g.value));
  put("thermal.g_omega", num(c.thermal.g.omega));
  put("thermal.theta0", to_string(c.thermal.theta0.kind));
  put("thermal.theta0_value", num(c.thermal.theta0.value));
  put("thermal.theta0_amplitude", num(c.thermal.theta0.amplitude));
  put("loads.F", to_string(c.loads.kind));
  put("loads.fx", num(c.loads.fx));
  put("loads.fy", num(c.loads.fy));
  put("loads.t_ramp", num(c.loads.t_ramp));
  put("loads.x0", num(c.loads.x0));
  put("loads.y0", num(c.loads.y0));
  put("loads.width", num(c.loads.width));
  put("time.t_end", num(c.time.t_end));
  put("time.dt", num(c.time.dt));
  put("time.allow_dt_above_lambda", b(c.time.allow_dt_above_lambda));
  put("solver.cg_tol", num(c.solver.cg_tol));
  put("solver.cg_maxit", std::to_string(c.solver.cg_maxit));
  put("solver.jacobi", b(c.solver.jacobi));
  put("solver.picard_tol", num(c.solver.picard_tol));
  put("solver.picard_max", std::to_string(c.solver.picard_max));
  put("solver.picard_damping", num(c.solver.picard_damping));
  put("solver.picard_r", num(c.solver.picard_r));
  put("solver.plastic_max", std::to_string(c.solver.plastic_max));
  put("output.every", std::to_string(c.output.every));
  put("output.vtk", b(c.output.vtk));
  put("output.csv", b(c.output.csv));
  put("diagnostics.trunc_K", num(c.diagnostics.trunc_K));
  put("diagnostics.boccardo_q", num(c.diagnostics.boccardo_q));
  put("diagnostics.tail_K", list(c.diagnostics.tail_K));
  put("diagnostics.tail_C", num(c.diagnostics.tail_C));
  put("diagnostics.renorm_M", list(c.diagnostics.renorm_M));
  put("diagnostics.dissipation_tol", num(c.diagnostics.dissipation_tol));
  put("diagnostics.trace_tol", num(c.diagnostics.trace_tol));
  put("diagnostics.m_balance_tol", num(c.diagnostics.m_balance_tol));
  return o;
}

}  // namespace thermoplast
