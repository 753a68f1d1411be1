#include "thermoplast/model_config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace thermoplast {

ConfigError::ConfigError(Kind kind, std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + key + ": " + message
                                  : (key.empty() ? message : key + ": " + message)),
      kind_(kind),
      key_(std::move(key)),
      line_(line) {}

bool ThermalStressFunction::vanishes() const {
  switch (kind) {
    case Kind::zero:
      return true;
    case Kind::piecewise_power:
      return M == 0.0 && c_neg == 0.0;
    case Kind::expression:
      return false;
  }
  return false;
}

bool operator==(const ThermalStressFunction& x, const ThermalStressFunction& y) {
  const std::string ex = x.expression ? x.expression->text() : std::string();
  const std::string ey = y.expression ? y.expression->text() : std::string();
  return x.kind == y.kind && x.a == y.a && x.M == y.M && x.alpha == y.alpha && x.c_neg == y.c_neg &&
         ex == ey;
}

double eval_f(const ThermalStressFunction& f, double r) {
  switch (f.kind) {
    case ThermalStressFunction::Kind::zero:
      return 0.0;
    case ThermalStressFunction::Kind::piecewise_power:
      if (r >= 0.0) return f.M * (std::pow(1.0 + r, f.alpha) - 1.0);
      return -f.c_neg * (std::sqrt(1.0 - r) - 1.0);
    case ThermalStressFunction::Kind::expression:
      return f.expression ? (*f.expression)(r) : 0.0;
  }
  return 0.0;
}

std::string to_string(ThermalStressFunction::Kind kind) {
  switch (kind) {
    case ThermalStressFunction::Kind::piecewise_power:
      return "piecewise_power";
    case ThermalStressFunction::Kind::zero:
      return "zero";
    case ThermalStressFunction::Kind::expression:
      return "expression";
  }
  return "?";
}

std::optional<double> find_growth_violation(const ThermalStressFunction& f) {
  constexpr double slack = 1e-12;
  const double f0 = eval_f(f, 0.0);
  if (!std::isfinite(f0) || std::abs(f0) > slack) return 0.0;
  // log-spaced magnitudes in [1e-6, 1e6], both signs
  for (int i = 0; i <= 480; ++i) {
    const double mag = std::pow(10.0, -6.0 + i * 0.025);
    for (double r : {mag, -mag}) {
      const double v = eval_f(f, r);
      if (!std::isfinite(v)) return r;
      if (std::abs(v) > f.a + f.M * std::pow(std::abs(r), f.alpha) + slack) return r;
      if (r < 0.0 && std::abs(v) > f.c_neg * std::sqrt(1.0 + std::abs(r)) + slack) return r;
    }
  }
  return std::nullopt;
}

std::array<double, 2> BodyForceSpec::evaluate(double x, double y, double t) const {
  switch (kind) {
    case Kind::zero:
      return {0.0, 0.0};
    case Kind::constant:
      return {fx, fy};
    case Kind::ramp: {
      const double s = t_ramp > 0.0 ? std::min(t / t_ramp, 1.0) : 1.0;
      return {s * fx, s * fy};
    }
    case Kind::gaussian: {
      const double d2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
      const double s = std::exp(-d2 / (2.0 * width * width));
      return {s * fx, s * fy};
    }
  }
  return {0.0, 0.0};
}

std::string to_string(BodyForceSpec::Kind kind) {
  switch (kind) {
    case BodyForceSpec::Kind::zero:
      return "zero";
    case BodyForceSpec::Kind::constant:
      return "constant";
    case BodyForceSpec::Kind::ramp:
      return "ramp";
    case BodyForceSpec::Kind::gaussian:
      return "gaussian";
  }
  return "?";
}

double InitialTemperatureSpec::evaluate(double x, double y, double lx, double ly) const {
  if (kind == Kind::constant) return value;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double b = 0.25 * (1.0 - std::cos(two_pi * x / lx)) * (1.0 - std::cos(two_pi * y / ly));
  return value + amplitude * b;
}

std::string to_string(InitialTemperatureSpec::Kind kind) {
  return kind == InitialTemperatureSpec::Kind::constant ? "constant" : "bump";
}

int ModelConfig::steps() const { return static_cast<int>(std::llround(time.t_end / time.dt)); }

namespace {

using K = ConfigError::Kind;

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(K::out_of_range, key, 0, message);
}

}  // namespace

void ModelConfig::validate() const {
  require(grid.nx >= 2, "grid.nx", "must be at least 2");
  require(grid.ny >= 2, "grid.ny", "must be at least 2");
  require(grid.lx > 0.0, "grid.lx", "must be positive");
  require(grid.ly > 0.0, "grid.ly", "must be positive");
  require(std::abs(grid.lx / grid.nx - grid.ly / grid.ny) <= 1e-12 * (grid.lx / grid.nx), "grid.ny",
          "cells must be square (lx/nx == ly/ny)");
  require(material.lame_second > 0.0, "material.lame_second", "must be positive");
  require(material.lame_first > -2.0 * material.lame_second / 3.0, "material.lame_first",
          "must exceed -2/3 lame_second");
  require(flow.k > 0.0, "flow.k", "yield limit must be positive");
  require(flow.lambda > 0.0, "flow.lambda", "must be positive");

  const auto& f = flow.f;
  require(f.a >= 0.0, "flow.a", "must be nonnegative");
  require(f.M >= 0.0, "flow.M", "must be nonnegative");
  require(f.alpha > 0.5 && f.alpha < 5.0 / 6.0, "flow.alpha", "must lie in the open interval (1/2, 5/6)");
  require(f.c_neg > 0.0 || f.kind != ThermalStressFunction::Kind::piecewise_power || f.M == 0.0, "flow.c_neg",
          "must be positive");
  if (f.kind == ThermalStressFunction::Kind::expression && !f.expression)
    throw ConfigError(K::missing_key, "flow.expression", 0, "required when flow.f = expression");
  if (auto r = find_growth_violation(f)) {
    std::ostringstream os;
    os << "growth bound violated at r = " << *r;
    throw ConfigError(K::out_of_range, "flow.f", 0, os.str());
  }

  require(time.dt > 0.0, "time.dt", "must be positive");
  require(time.t_end >= time.dt * (1.0 - 1e-12), "time.t_end", "must be at least dt");
  require(std::abs(steps() * time.dt - time.t_end) <= 1e-9 * time.t_end, "time.dt", "must divide t_end");
  require(time.dt <= flow.lambda * (1.0 + 1e-12) || time.allow_dt_above_lambda, "time.dt",
          "exceeds flow.lambda; set time.allow_dt_above_lambda = true to override");

  require(solver.cg_tol > 0.0, "solver.cg_tol", "must be positive");
  require(solver.cg_maxit > 0, "solver.cg_maxit", "must be positive");
  require(solver.picard_tol > 0.0, "solver.picard_tol", "must be positive");
  require(solver.picard_max > 0, "solver.picard_max", "must be positive");
  require(solver.picard_damping >= 0.1 && solver.picard_damping <= 1.0, "solver.picard_damping",
          "must lie in [0.1, 1]");
  require(solver.picard_r > 1.0 && solver.picard_r < 2.0, "solver.picard_r", "must lie in (1, 2)");
  require(solver.plastic_max > 0, "solver.plastic_max", "must be positive");

  require(output.every > 0, "output.every", "must be positive");

  require(diagnostics.trunc_K > 0.0, "diagnostics.trunc_K", "must be positive");
  require(diagnostics.boccardo_q >= 1.0 && diagnostics.boccardo_q < 1.25, "diagnostics.boccardo_q",
          "must lie in [1, 5/4)");
  require(!diagnostics.tail_K.empty(), "diagnostics.tail_K", "must not be empty");
  for (std::size_t i = 0; i < diagnostics.tail_K.size(); ++i) {
    require(diagnostics.tail_K[i] > 0.0, "diagnostics.tail_K", "entries must be positive");
    require(i == 0 || diagnostics.tail_K[i] > diagnostics.tail_K[i - 1], "diagnostics.tail_K",
            "must be ascending");
  }
  require(diagnostics.tail_C > 0.0, "diagnostics.tail_C", "must be positive");
  for (double m : diagnostics.renorm_M) require(m > 0.0, "diagnostics.renorm_M", "entries must be positive");
}

}  // namespace thermoplast
