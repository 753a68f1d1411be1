#include <Eigen/Dense>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "thermoplast/tensors.hpp"

using namespace thermoplast;

namespace {

SymTensor random_sym(std::mt19937_64& rng, double scale = 3.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

double max_abs_diff(const SymTensor& a, const SymTensor& b) {
  const auto ca = a.components();
  const auto cb = b.components();
  double m = 0.0;
  for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

// D as a 6x6 matrix acting on the stored components.
Eigen::Matrix<double, 6, 6> storage_matrix(const ElasticityTensor& d) {
  Eigen::Matrix<double, 6, 6> m;
  for (int j = 0; j < 6; ++j) {
    std::array<double, 6> e{};
    e[j] = 1.0;
    const auto col = d.apply(SymTensor::from_components(e)).components();
    for (int i = 0; i < 6; ++i) m(i, j) = col[i];
  }
  return m;
}

}  // namespace

TEST_CASE("deviator examples") {
  CHECK(max_abs_diff(deviator(SymTensor::identity()), SymTensor{}) == 0.0);
  const SymTensor d = deviator(SymTensor::diagonal(3, 0, 0));
  CHECK(max_abs_diff(d, SymTensor::diagonal(2, -1, -1)) < 1e-15);
  const SymTensor t{1.0, -0.25, -0.75, 0.4, -2.0, 0.1};
  CHECK(max_abs_diff(deviator(t), t) < 1e-15);
}

TEST_CASE("inner examples") {
  CHECK(inner(SymTensor::identity(), SymTensor::identity()) == 3.0);
  SymTensor shear;
  shear.xy = 1.0;
  CHECK(inner(shear, shear) == 2.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const SymTensor a = random_sym(rng);
    CHECK(inner(a, a) >= 0.0);
  }
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const SymTensor a = random_sym(rng), b = random_sym(rng), c = random_sym(rng);
    const double s = 0.37;
    CHECK(inner(a, b) == inner(b, a));
    CHECK(inner(s * a + c, b) == doctest::Approx(s * inner(a, b) + inner(c, b)).epsilon(1e-12));
  }
}

TEST_CASE("apply_D examples") {
  const ElasticityTensor d(1.5, 1.0);
  CHECK(max_abs_diff(apply_D(d, SymTensor::identity()), (2.0 + 4.5) * SymTensor::identity()) < 1e-15);
  const SymTensor e{0.5, -0.2, -0.3, 0.1, 0.7, -0.4};
  CHECK(max_abs_diff(apply_D(d, e), 2.0 * e) < 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const SymTensor x = random_sym(rng);
    CHECK(max_abs_diff(apply_D_inv(d, apply_D(d, x)), x) < 1e-13);
    CHECK(max_abs_diff(apply_D(d, apply_D_inv(d, x)), x) < 1e-13);
  }
  CHECK(max_abs_diff(apply_D_inv(d, SymTensor{}), SymTensor{}) == 0.0);
}

TEST_CASE("apply_D_inv matches the numerically inverted 6x6 matrix") {
  std::mt19937_64 rng(4);
  for (auto [lf, ls] : {std::pair{1.5, 1.0}, std::pair{0.0, 2.0}, std::pair{-0.5, 1.0}, std::pair{40.0, 0.3}}) {
    const ElasticityTensor d(lf, ls);
    const Eigen::Matrix<double, 6, 6> inv = storage_matrix(d).inverse();
    for (int i = 0; i < 50; ++i) {
      const SymTensor s = random_sym(rng);
      const auto c = s.components();
      const Eigen::Matrix<double, 6, 1> e = inv * Eigen::Map<const Eigen::Matrix<double, 6, 1>>(c.data());
      const auto got = apply_D_inv(d, s).components();
      for (int k = 0; k < 6; ++k) CHECK(got[k] == doctest::Approx(e(k)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("coercivity agrees with the smallest eigenvalue") {
  // Eigenvalues on the Mandel-scaled representation, where inner is Euclidean.
  for (auto [lf, ls] : {std::pair{1.5, 1.0}, std::pair{-0.5, 1.0}}) {
    const ElasticityTensor d(lf, ls);
    Eigen::Matrix<double, 6, 6> m = storage_matrix(d);
    Eigen::Matrix<double, 6, 1> w;
    w << 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0);
    const Eigen::Matrix<double, 6, 6> mandel = w.asDiagonal() * m * w.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(mandel);
    CHECK(d.coercivity() == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-12));
    CHECK(d.coercivity() == doctest::Approx(std::min(2 * ls, 2 * ls + 3 * lf)));
  }
}

TEST_CASE("invalid Lame parameters are rejected") {
  CHECK_THROWS_AS(ElasticityTensor(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ElasticityTensor(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("property: deviator trace, idempotence, orthogonality") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const SymTensor a = random_sym(rng, 10.0);
    const SymTensor p = deviator(a);
    CHECK(std::abs(p.trace()) <= 1e-14);
    CHECK(max_abs_diff(deviator(p), p) <= 1e-14);
    CHECK(std::abs(inner(p, SymTensor::identity())) <= 1e-13);
  }
}

TEST_CASE("property: D is positive and symmetric") {
  const ElasticityTensor d(1.5, 1.0);
  const double c0 = d.coercivity();
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10000; ++i) {
    const SymTensor a = random_sym(rng), b = random_sym(rng);
    CHECK(inner(apply_D(d, a), a) >= c0 * inner(a, a) * (1.0 - 1e-14));
    const double ab = inner(apply_D(d, a), b);
    const double ba = inner(a, apply_D(d, b));
    CHECK(std::abs(ab - ba) <= 1e-12 * std::max(1.0, std::abs(ab)));
  }
}
