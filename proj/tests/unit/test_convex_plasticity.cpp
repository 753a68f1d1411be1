#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "projection_oracle.hpp"
#include "thermoplast/convex_plasticity.hpp"
#include "thermoplast/verification.hpp"

using namespace thermoplast;

namespace {

double max_abs_diff(const SymTensor& a, const SymTensor& b) {
  const auto ca = a.components();
  const auto cb = b.components();
  double m = 0.0;
  for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

SymTensor shear(double v) {
  SymTensor t;
  t.xy = v;
  return t;
}

// Composite Simpson rule, independent of the library's clamp.
double simpson(double (*f)(double, double), double b, double k, int n) {
  const double h = b / n;
  double acc = f(0.0, k) + f(b, k);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h, k);
  return acc * h / 3.0;
}

double clamp_ref(double r, double k) { return r > k ? k : (r < -k ? -k : r); }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(YieldSurface(0.0), std::invalid_argument);
  CHECK_THROWS_AS(YieldSurface(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(YosidaParam(0.0), std::invalid_argument);
  CHECK(YosidaParam(0.05).truncation_height() == doctest::Approx(20.0));
}

TEST_CASE("in_K examples") {
  const YieldSurface ys(1.0);
  CHECK(in_K(SymTensor{}, ys));
  CHECK(in_K(100.0 * SymTensor::identity(), YieldSurface(1e-3)));
  CHECK_FALSE(in_K(shear(std::sqrt(2.0)), ys));
}

TEST_CASE("project_K examples") {
  const YieldSurface ys(1.0);
  const SymTensor inside{3.2, 2.9, 3.0, 0.1, 0.0, -0.2};
  REQUIRE(in_K(inside, ys));
  CHECK(project_K(inside, ys) == inside);
  CHECK(max_abs_diff(project_K(shear(std::sqrt(2.0)), ys), shear(std::sqrt(2.0) / 2.0)) < 1e-15);
}

TEST_CASE("project_K agrees with the brute-force nearest point") {
  std::mt19937_64 rng(11);
  const YieldSurface ys(1.0);
  for (int i = 0; i < 10; ++i) {
    const SymTensor t = random_tensor(rng, 3.0);
    CHECK(max_abs_diff(project_K(t, ys), oracle::brute_force_projection(t, 1.0)) < 1e-6);
  }
}

TEST_CASE("yosida examples") {
  const YieldSurface ys(1.0);
  const YosidaParam yp(0.5);
  CHECK(yosida(SymTensor{0.3, 0.1, 0.0, 0.2, 0.0, 0.0}, ys, yp) == SymTensor{});
  CHECK(max_abs_diff(yosida(shear(std::sqrt(2.0)), ys, yp), shear(std::sqrt(2.0) / 2.0)) < 1e-15);
  CHECK(yosida(7.0 * SymTensor::identity(), ys, yp) == SymTensor{});
}

TEST_CASE("truncate and phi examples") {
  CHECK(truncate(0.0, 5.0) == 0.0);
  CHECK(truncate(7.0, 5.0) == 5.0);
  CHECK(truncate(-7.0, 5.0) == -5.0);
  CHECK(truncate(3.0, 5.0) == 3.0);
  CHECK(phi(0.0, 2.0) == 0.0);
  const double quad = simpson(clamp_ref, 3.0, 2.0, 3000);
  CHECK(quad == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(phi(3.0, 2.0) == doctest::Approx(quad).epsilon(1e-10));
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    CHECK(phi(-r, 4.0) == phi(r, 4.0));
  }
}

TEST_CASE("property: Yosida monotone, Lipschitz, resolvent identity, deviatoric") {
  std::mt19937_64 rng(13);
  const double k = 1.0;
  const YieldSurface ys(k);
  for (double lambda : {0.5, 0.05, 0.01}) {
    const YosidaParam yp(lambda);
    for (int i = 0; i < 10000; ++i) {
      const SymTensor a = random_tensor(rng, 3.0 * k), b = random_tensor(rng, 3.0 * k);
      const SymTensor ya = yosida(a, ys, yp), yb = yosida(b, ys, yp);
      CHECK(inner(ya - yb, a - b) >= -1e-12);
      CHECK(norm(ya - yb) <= norm(a - b) / (2.0 * lambda) * (1.0 + 1e-10));
      CHECK(max_abs_diff(ya, (a - project_K(a, ys)) / (2.0 * lambda)) <= 1e-12);
      CHECK(std::abs(ya.trace()) <= 1e-14);
      const double pa = std::sqrt(inner(deviator(a), deviator(a)));
      const double closed = std::max(pa - k, 0.0) * pa / (2.0 * lambda);
      CHECK(inner(ya, a) >= 0.0);
      CHECK(inner(ya, a) == doctest::Approx(closed).epsilon(1e-12).scale(1.0));
      CHECK(yosida_dissipation(a, ys, yp) == doctest::Approx(closed).epsilon(1e-12).scale(1.0));
      CHECK((ya == SymTensor{}) == in_K(a, ys));
    }
  }
}

TEST_CASE("property: Yosida is the gradient of its potential") {
  std::mt19937_64 rng(14);
  const YieldSurface ys(1.0);
  const YosidaParam yp(0.1);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const SymTensor t = random_tensor(rng, 3.0);
    const SymTensor y = yosida(t, ys, yp);
    const auto c = t.components();
    const auto yc = y.components();
    for (int j = 0; j < 6; ++j) {
      auto cp = c, cm = c;
      cp[j] += h;
      cm[j] -= h;
      const double fd = (yosida_potential(SymTensor::from_components(cp), ys, yp) -
                         yosida_potential(SymTensor::from_components(cm), ys, yp)) /
                        (2.0 * h);
      const double exact = (j < 3 ? 1.0 : 2.0) * yc[j];
      CHECK(fd == doctest::Approx(exact).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("property: projection nonexpansive and idempotent") {
  std::mt19937_64 rng(15);
  const YieldSurface ys(0.7);
  for (int i = 0; i < 10000; ++i) {
    const SymTensor a = random_tensor(rng, 3.0), b = random_tensor(rng, 3.0);
    const SymTensor pa = project_K(a, ys);
    CHECK(norm(pa - project_K(b, ys)) <= norm(a - b) + 1e-12);
    CHECK(max_abs_diff(project_K(pa, ys), pa) <= 1e-14);
    CHECK(norm(deviator(pa)) <= 0.7 * (1.0 + 1e-14));
  }
}

TEST_CASE("property: truncation bounds and phi derivative") {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> uk(0.1, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double r = u(rng), s = u(rng), k = uk(rng);
    CHECK(std::abs(truncate(r, k)) <= k);
    CHECK(std::abs(truncate(r, k) - truncate(s, k)) <= std::abs(r - s));
    if (r <= s) CHECK(truncate(r, k) <= truncate(s, k));
    // convexity of phi along the chord
    CHECK(phi(0.5 * (r + s), k) <= 0.5 * (phi(r, k) + phi(s, k)) + 1e-12);
    const double h = 1e-4;
    if (std::abs(std::abs(r) - k) > 10 * h) {
      const double fd = (phi(r + h, k) - phi(r - h, k)) / (2.0 * h);
      CHECK(fd == doctest::Approx(truncate(r, k)).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("mutation canary: a negated Yosida map fails the monotonicity suite") {
  const YieldSurface ys(1.0);
  const YosidaParam yp(0.05);
  std::mt19937_64 rng(17);
  const SuiteResult good = check_monotone([&](const SymTensor& t) { return yosida(t, ys, yp); }, rng, 2000, 3.0);
  const SuiteResult bad = check_monotone([&](const SymTensor& t) { return -yosida(t, ys, yp); }, rng, 2000, 3.0);
  CHECK(good.pass);
  CHECK_FALSE(bad.pass);
}
