#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoplast/expression.hpp"
#include "thermoplast/thermal_lift.hpp"

namespace thermoplast {

/// Invalid configuration. `key` and `line` locate the offending entry when known
/// (line 0 means the value came from a default or a scenario).
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_key, missing_key, invalid_value, out_of_range };

  ConfigError(Kind kind, std::string key, int line, const std::string& message);

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  std::string key_;
  int line_;
};

/// Thermal part f of the stress, sigma = D(e(u) - e^p) - f(theta) Id.
/// Growth bounds: |f(r)| <= a + M |r|^alpha, and |f(r)| <= c_neg (1 + |r|)^(1/2)
/// for r <= 0, with alpha in (1/2, 5/6).
struct ThermalStressFunction {
  enum class Kind { piecewise_power, zero, expression };
  Kind kind = Kind::piecewise_power;
  double a = 0.5;
  double M = 0.5;
  double alpha = 0.7;
  double c_neg = 0.5;
  std::optional<Expression> expression;

  /// True when f vanishes identically, so the mechanics ignore temperature.
  bool vanishes() const;

  friend bool operator==(const ThermalStressFunction& x, const ThermalStressFunction& y);
};

/// Default variant: M((1+r)^alpha - 1) for r >= 0 and -c_neg((1-r)^(1/2) - 1) for r < 0.
double eval_f(const ThermalStressFunction& f, double r);

std::string to_string(ThermalStressFunction::Kind kind);

/// Checks the growth bounds on a fixed sample of r values. Returns the first
/// violating r, if any.
std::optional<double> find_growth_violation(const ThermalStressFunction& f);

/// Body force, optionally ramped linearly in time over [0, t_ramp].
struct BodyForceSpec {
  enum class Kind { zero, constant, ramp, gaussian };
  Kind kind = Kind::zero;
  double fx = 0.0;
  double fy = 0.0;
  double t_ramp = 1.0;
  double x0 = 0.5;
  double y0 = 0.5;
  double width = 0.15;

  std::array<double, 2> evaluate(double x, double y, double t) const;
  friend bool operator==(const BodyForceSpec&, const BodyForceSpec&) = default;
};

std::string to_string(BodyForceSpec::Kind kind);

/// theta_0 = value + amplitude * b(x, y) with the zero-flux bump
/// b = (1 - cos(2 pi x / lx)) (1 - cos(2 pi y / ly)) / 4.
struct InitialTemperatureSpec {
  enum class Kind { constant, bump };
  Kind kind = Kind::constant;
  double value = 0.0;
  double amplitude = 0.0;

  double evaluate(double x, double y, double lx, double ly) const;
  friend bool operator==(const InitialTemperatureSpec&, const InitialTemperatureSpec&) = default;
};

std::string to_string(InitialTemperatureSpec::Kind kind);

struct GridSpec {
  int nx = 32;
  int ny = 32;
  double lx = 1.0;
  double ly = 1.0;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct MaterialSpec {
  double lame_first = 1.5;
  double lame_second = 1.0;
  friend bool operator==(const MaterialSpec&, const MaterialSpec&) = default;
};

struct FlowSpec {
  double k = 0.05;
  double lambda = 0.05;
  ThermalStressFunction f;
  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct ThermalSpec {
  BoundaryFluxSpec g;
  InitialTemperatureSpec theta0;
  friend bool operator==(const ThermalSpec&, const ThermalSpec&) = default;
};

struct TimeSpec {
  double t_end = 0.5;
  double dt = 5e-3;
  bool allow_dt_above_lambda = false;
  friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

struct SolverSpec {
  double cg_tol = 1e-10;
  int cg_maxit = 20000;
  bool jacobi = false;
  double picard_tol = 1e-10;
  int picard_max = 50;
  double picard_damping = 1.0;
  double picard_r = 1.2;
  int plastic_max = 500;
  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct OutputSpec {
  int every = 10;
  bool vtk = true;
  bool csv = true;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct DiagnosticsSpec {
  double trunc_K = 5.0;
  double boccardo_q = 1.2;
  std::vector<double> tail_K = {1.0, 2.0, 5.0, 10.0};
  double tail_C = 1.0;
  std::vector<double> renorm_M = {1.0, 2.0, 5.0, 10.0};
  double dissipation_tol = 1e-12;
  double trace_tol = 1e-12;
  double m_balance_tol = 0.05;
  friend bool operator==(const DiagnosticsSpec&, const DiagnosticsSpec&) = default;
};

struct ModelConfig {
  std::string scenario = "shear_ramp";
  GridSpec grid;
  MaterialSpec material;
  FlowSpec flow;
  ThermalSpec thermal;
  BodyForceSpec loads;
  TimeSpec time;
  SolverSpec solver;
  OutputSpec output;
  DiagnosticsSpec diagnostics;
  unsigned seed = 12345;

  /// Number of time steps, t_end / dt.
  int steps() const;

  /// Throws ConfigError on any invariant violation.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace thermoplast
