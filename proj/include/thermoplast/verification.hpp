#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "thermoplast/convex_plasticity.hpp"
#include "thermoplast/tensors.hpp"

namespace thermoplast {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;  // worst observed deviation
};

/// Components uniform in [-scale, scale].
SymTensor random_tensor(std::mt19937_64& rng, double scale);

/// A point of K: random spherical part, deviator of norm at most k.
SymTensor random_admissible(std::mt19937_64& rng, const YieldSurface& ys, double spherical_scale);

SuiteResult check_tensor_algebra(std::mt19937_64& rng, int samples);

/// Resolvent identity, Lipschitz bound, trace, dissipation closed form.
SuiteResult check_yosida_identities(std::mt19937_64& rng, int samples, const YieldSurface& ys,
                                    const YosidaParam& yp);

using TensorMap = std::function<SymTensor(const SymTensor&)>;

/// (y(A) - y(B)) : (A - B) >= -1e-12 on random pairs.
SuiteResult check_monotone(const TensorMap& y, std::mt19937_64& rng, int samples, double scale);

/// Variational inequality (T - PT) : (Z - PT) <= 0 for Z in K, nearest-point
/// property and nonexpansiveness.
SuiteResult check_projection(std::mt19937_64& rng, int samples, const YieldSurface& ys);

SuiteResult check_truncation(std::mt19937_64& rng, int samples);

/// Symmetry and quadrature oracles of the assembled operators.
SuiteResult check_assembly(std::mt19937_64& rng);

/// Linearity and mass growth of the boundary lift.
SuiteResult check_lift(std::mt19937_64& rng);

SuiteResult check_manufactured();

std::vector<SuiteResult> run_property_suites(unsigned seed);

/// Errors of a refinement study on the unit square.
struct ConvergenceStudy {
  std::string name;
  std::vector<int> n;
  std::vector<double> error;
  std::vector<double> orders() const;
  double min_order() const;
};

/// L2 error for u = (sin pi x sin pi y, 0) with the matching body force.
double mms_elasticity_error(int n, double lame_first = 1.5, double lame_second = 1.0);

/// Max nodal error for an affine displacement imposed on the boundary.
double mms_linear_displacement_error(int n);

/// L2 error of the mean-free Neumann problem -Lap u = 2 pi^2 cos pi x cos pi y.
double mms_laplacian_error(int n);

/// L2 error at t_end of the heat step for theta = (1 + t) cos pi x cos pi y.
double mms_heat_error(int n, double dt, double t_end);

ConvergenceStudy elasticity_study(const std::vector<int>& ns);
ConvergenceStudy laplacian_study(const std::vector<int>& ns);
ConvergenceStudy heat_study(const std::vector<int>& ns, double dt = 0.01, double t_end = 0.1);

}  // namespace thermoplast
