#include "doctest.h"

#include "pettyfn/quadrature.hpp"
#include "pettyfn/random.hpp"

using namespace pettyfn;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("sphere rules carry the full sphere area") {
  for (int n = 1; n <= 5; ++n) {
    const SphereRule rule = SphereRule::make(n);
    double s = 0.0;
    for (double w : rule.weights) s += w;
    CHECK(s == doctest::Approx(unit_sphere_area(n)).epsilon(1e-9));
    for (const auto& u : rule.nodes) CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sphere rules pair antipodal nodes") {
  for (int n = 2; n <= 4; ++n) {
    const SphereRule rule = SphereRule::make(n, n == 4 ? 2000 : 0);
    for (std::size_t k = 0; k < rule.size(); k += 97) {
      double best = kInf;
      for (const auto& v : rule.nodes) best = std::min(best, (v + rule.nodes[k]).norm());
      CHECK(best < 1e-12);
    }
  }
}

TEST_CASE("degree-two exactness of the deterministic rules") {
  CounterRng rng(7);
  for (int n = 2; n <= 3; ++n) {
    const SphereRule rule = SphereRule::make(n);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec v = rng.normal_vector(n);
      const double s = sphere_integrate([&](const Vec& u) { return std::pow(v.dot(u), 2); }, rule);
      CHECK(s == doctest::Approx(v.squaredNorm() * unit_sphere_area(n) / n).epsilon(1e-10));
    }
  }
}

TEST_CASE("sphere_integrate examples") {
  const SphereRule circle = SphereRule::make(2);
  CHECK(sphere_integrate([](const Vec&) { return 1.0; }, circle) == doctest::Approx(2 * kPi).epsilon(1e-12));
  // Mean of |<v,u>| over the circle is 2ω_1/(2ω_2) = 2/π; times 2π gives 4.
  const Vec v = vec2(0.6, 0.8);
  CHECK(sphere_integrate([&](const Vec& u) { return std::abs(v.dot(u)); }, circle) ==
        doctest::Approx(4.0).epsilon(1e-6));
  const SphereRule sphere = SphereRule::make(3);
  CHECK(sphere_integrate([](const Vec& u) { return u[0] * u[0]; }, sphere) ==
        doctest::Approx(4 * kPi / 3).epsilon(1e-10));
}

TEST_CASE("sphere mean identity for |<v,u>|") {
  CounterRng rng(11);
  for (int n = 2; n <= 3; ++n) {
    const SphereRule rule = SphereRule::make(n);
    const double factor = 2 * unit_ball_volume(n - 1) / unit_sphere_area(n);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec v = rng.normal_vector(n) * (0.1 + 3 * rng.next_uniform());
      const double mean = sphere_integrate([&](const Vec& u) { return std::abs(v.dot(u)); }, rule) /
                          unit_sphere_area(n);
      CHECK(relative_error(mean, factor * v.norm()) <= 1e-3);
    }
  }
}

TEST_CASE("Monte-Carlo sphere rule reports a standard error") {
  const SphereRule rule = SphereRule::make(4, 20000, 3);
  const Estimate e = sphere_integrate_estimate([](const Vec& u) { return u[0] * u[0] + u[1]; }, rule);
  const double exact = unit_sphere_area(4) / 4;
  CHECK(e.error > 0.0);
  CHECK(std::abs(e.value - exact) <= 4 * e.error);
}

TEST_CASE("exp_homogeneous_integral examples") {
  const SphereRule circle = SphereRule::make(2);
  // ∫ e^{-|z|} dz over R^2 = 2π.
  CHECK(exp_homogeneous_integral([](const Vec&) { return 1.0; }, circle) == doctest::Approx(2 * kPi).epsilon(1e-12));
  for (int n = 1; n <= 3; ++n) {
    const SphereRule rule = SphereRule::make(n);
    const double c = 1.7;
    CHECK(exp_homogeneous_integral([&](const Vec&) { return c; }, rule) ==
          doctest::Approx(int_factorial(n) * unit_ball_volume(n) * std::pow(c, -n)).epsilon(1e-10));
  }
  // 2! vol(cross-polytope) = 4.
  CHECK(exp_homogeneous_integral([](const Vec& u) { return std::abs(u[0]) + std::abs(u[1]); }, circle) ==
        doctest::Approx(4.0).epsilon(1e-5));
  CHECK_THROWS_AS(exp_homogeneous_integral([](const Vec& u) { return u[0]; }, circle), Error);
}

TEST_CASE("box_integrate examples") {
  IntegrationSpec spec;
  const Box unit{Vec::Zero(2), Vec::Ones(2)};
  CHECK(box_integrate([](const Vec&) { return 1.0; }, unit, spec).value == doctest::Approx(1.0).epsilon(1e-14));

  const Box wide{Vec::Constant(2, -8.0), Vec::Constant(2, 8.0)};
  const BoxIntegral g = box_integrate([](const Vec& x) { return std::exp(-0.5 * x.squaredNorm()); }, wide, spec);
  CHECK(std::abs(g.value - 2 * kPi) <= 1e-6);

  IntegrationSpec mc;
  mc.method = Method::MonteCarlo;
  mc.samples = 1'000'000;
  const Box square{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  const BoxIntegral disk = box_integrate([](const Vec& x) { return x.squaredNorm() <= 1.0 ? 1.0 : 0.0; }, square, mc);
  CHECK(disk.error > 0.0);
  CHECK(std::abs(disk.value - kPi) <= 3 * disk.error);
}

TEST_CASE("Monte-Carlo box integration is bit-reproducible") {
  IntegrationSpec mc;
  mc.method = Method::MonteCarlo;
  mc.samples = 10000;
  mc.seed = 42;
  const Box box{Vec::Zero(3), Vec::Ones(3)};
  auto f = [](const Vec& x) { return std::sin(x[0]) * std::exp(x[1] - x[2]); };
  const BoxIntegral a = box_integrate(f, box, mc);
  const BoxIntegral b = box_integrate(f, box, mc);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
  mc.seed = 43;
  CHECK(box_integrate(f, box, mc).value != a.value);
}

TEST_CASE("budget flag") {
  IntegrationSpec mc;
  mc.method = Method::MonteCarlo;
  mc.samples = 100;
  mc.target_rel_error = 1e-6;
  const Box box{Vec::Zero(2), Vec::Ones(2)};
  const BoxIntegral r = box_integrate([](const Vec& x) { return x[0] > 0.5 ? 1.0 : 0.0; }, box, mc);
  CHECK(r.budget_exceeded);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  auto [x, w] = gauss_legendre(8);
  double s0 = 0, s14 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s14 += w[i] * std::pow(x[i], 14);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("pairwise summation") {
  std::vector<double> xs(1000, 0.1);
  CHECK(pairwise_sum(xs) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum({}) == 0.0);
}
