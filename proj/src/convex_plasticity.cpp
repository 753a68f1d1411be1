#include "thermoplast/convex_plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoplast {

namespace {

constexpr double kZeroDeviator = 1e-300;

}  // namespace

YieldSurface::YieldSurface(double k) : k_(k) {
  if (!(k > 0.0)) throw std::invalid_argument("yield limit k must be positive, got " + std::to_string(k));
}

YosidaParam::YosidaParam(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("yosida lambda must be positive, got " + std::to_string(lambda));
}

bool in_K(const SymTensor& t, const YieldSurface& ys) { return norm(deviator(t)) <= ys.k(); }

SymTensor project_K(const SymTensor& t, const YieldSurface& ys) {
  const SymTensor dev = deviator(t);
  const double r = norm(dev);
  if (r <= ys.k()) return t;
  const SymTensor spherical = t - dev;
  return spherical + (ys.k() / r) * dev;
}

SymTensor yosida(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp) {
  const SymTensor dev = deviator(t);
  const double r = norm(dev);
  if (r <= kZeroDeviator) return {};
  const double over = std::max(r - ys.k(), 0.0);
  if (over == 0.0) return {};
  return traceless((over / (2.0 * yp.lambda() * r)) * dev);
}

double yosida_dissipation(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp) {
  const double r = norm(deviator(t));
  return std::max(r - ys.k(), 0.0) * r / (2.0 * yp.lambda());
}

double yosida_potential(const SymTensor& t, const YieldSurface& ys, const YosidaParam& yp) {
  const double over = std::max(norm(deviator(t)) - ys.k(), 0.0);
  return over * over / (4.0 * yp.lambda());
}

double truncate(double r, double height) { return std::min(height, std::max(r, -height)); }

double phi(double r, double height) {
  const double a = std::abs(r);
  if (a <= height) return 0.5 * r * r;
  return 0.5 * height * height + height * (a - height);
}

}  // namespace thermoplast
