#pragma once

#include "thermoplast/tensors.hpp"

namespace thermoplast {

/// von Mises admissible set K = { T : |dev T| <= k }.
class YieldSurface {
 public:
  explicit YieldSurface(double k);
  double k() const { return k_; }

 private:
  double k_;
};

/// Regularization parameter lambda. It also fixes the truncation height 1/lambda.
class YosidaParam {
 public:
  explicit YosidaParam(double lambda);
  double lambda() const { return lambda_; }
  double truncation_height() const { return 1.0 / lambda_; }

 private:
  double lambda_;
};

bool in_K(const SymTensor& t, const YieldSurface& ys);

/// Nearest point of K (radial return of the deviatoric part).
SymTensor project_K(const SymTensor& t, const YieldSurface& ys);

/// Y(T) = (|PT| - k)_+ / (2 lambda) * PT / |PT|, zero when PT vanishes.
SymTensor yosida(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp);

/// Y(T) : T in closed form, (|PT| - k)_+ |PT| / (2 lambda).
double yosida_dissipation(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp);

/// Potential of Y: (|PT| - k)_+^2 / (4 lambda).
double yosida_potential(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp);

/// Clamp of r to [-K, K].
double truncate(double r, double height);

/// Antiderivative of the truncation, quadratic inside [-K, K] and linear outside.
double phi(double r, double height);

}  // namespace thermoplast
