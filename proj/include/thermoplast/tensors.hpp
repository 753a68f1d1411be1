#pragma once

#include <array>
#include <cmath>

namespace thermoplast {

/// Symmetric 3x3 tensor. Only the six independent components are stored, in the
/// order (xx, yy, zz, xy, xz, yz). Off-diagonal entries count twice in `inner`.
struct SymTensor {
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  double xy = 0.0;
  double xz = 0.0;
  double yz = 0.0;

  static constexpr SymTensor identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static constexpr SymTensor diagonal(double a, double b, double c) { return {a, b, c, 0.0, 0.0, 0.0}; }

  constexpr double trace() const { return xx + yy + zz; }

  constexpr std::array<double, 6> components() const { return {xx, yy, zz, xy, xz, yz}; }
  static constexpr SymTensor from_components(const std::array<double, 6>& c) {
    return {c[0], c[1], c[2], c[3], c[4], c[5]};
  }

  constexpr SymTensor& operator+=(const SymTensor& o) {
    xx += o.xx; yy += o.yy; zz += o.zz; xy += o.xy; xz += o.xz; yz += o.yz;
    return *this;
  }
  constexpr SymTensor& operator-=(const SymTensor& o) {
    xx -= o.xx; yy -= o.yy; zz -= o.zz; xy -= o.xy; xz -= o.xz; yz -= o.yz;
    return *this;
  }
  constexpr SymTensor& operator*=(double s) {
    xx *= s; yy *= s; zz *= s; xy *= s; xz *= s; yz *= s;
    return *this;
  }

  friend constexpr SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend constexpr SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend constexpr SymTensor operator-(SymTensor a) { return a *= -1.0; }
  friend constexpr SymTensor operator*(double s, SymTensor a) { return a *= s; }
  friend constexpr SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend constexpr SymTensor operator/(SymTensor a, double s) { return a *= (1.0 / s); }
  friend constexpr bool operator==(const SymTensor&, const SymTensor&) = default;
};

/// Full contraction A:B.
constexpr double inner(const SymTensor& a, const SymTensor& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

inline double norm(const SymTensor& a) { return std::sqrt(inner(a, a)); }

/// Deviatoric projection T - (tr T / 3) Id.
/// Sets zz = -(xx + yy), so that trace() evaluates to exactly zero.
constexpr SymTensor traceless(SymTensor t) {
  t.zz = -(t.xx + t.yy);
  return t;
}

constexpr SymTensor deviator(const SymTensor& t) {
  const double m = t.trace() / 3.0;
  return traceless({t.xx - m, t.yy - m, t.zz - m, t.xy, t.xz, t.yz});
}

/// Isotropic elasticity tensor D e = 2 mu e + lambda (tr e) Id.
class ElasticityTensor {
 public:
  /// Throws std::invalid_argument unless lame_second > 0 and
  /// lame_first > -(2/3) lame_second.
  ElasticityTensor(double lame_first, double lame_second);

  double lame_first() const { return lame_first_; }
  double lame_second() const { return lame_second_; }

  /// Smallest eigenvalue of D on symmetric tensors.
  double coercivity() const;

  SymTensor apply(const SymTensor& e) const {
    const double vol = lame_first_ * e.trace();
    SymTensor s = (2.0 * lame_second_) * e;
    s.xx += vol;
    s.yy += vol;
    s.zz += vol;
    return s;
  }

  SymTensor apply_inverse(const SymTensor& s) const {
    const double two_mu = 2.0 * lame_second_;
    const double vol = lame_first_ * s.trace() / (two_mu * (two_mu + 3.0 * lame_first_));
    SymTensor e = s / two_mu;
    e.xx -= vol;
    e.yy -= vol;
    e.zz -= vol;
    return e;
  }

  friend bool operator==(const ElasticityTensor&, const ElasticityTensor&) = default;

 private:
  double lame_first_;
  double lame_second_;
};

inline SymTensor apply_D(const ElasticityTensor& d, const SymTensor& e) { return d.apply(e); }
inline SymTensor apply_D_inv(const ElasticityTensor& d, const SymTensor& s) { return d.apply_inverse(s); }

}  // namespace thermoplast
