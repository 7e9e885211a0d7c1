#include "doctest.h"

#include "pettyfn/petty.hpp"
#include "pettyfn/random.hpp"

using namespace pettyfn;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ConvexBody square(double lo, double hi) {
  return ConvexBody::polytope({vec({lo, lo}), vec({hi, lo}), vec({hi, hi}), vec({lo, hi})});
}

ConvexBody cube3() {
  std::vector<Vec> v;
  for (int m = 0; m < 8; ++m) v.push_back(vec({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0}));
  return ConvexBody::polytope(v);
}

ConvexBody centred_simplex() { return ConvexBody::polytope({vec({2, -1}), vec({-1, 2}), vec({-1, -1})}); }

LogConcaveFn quadratic_grid() {
  const Box box(Vec::Constant(2, -8.0), Vec::Constant(2, 8.0));
  return LogConcaveFn::grid(GridFn::sample(box, {129, 129}, [](const Vec& x) { return 0.5 * x.squaredNorm(); }));
}

std::vector<LogConcaveFn> zoo() {
  Mat cov(2, 2);
  cov << 2.0, 0.6, 0.6, 0.8;
  return {LogConcaveFn::indicator(square(0, 1)),
          LogConcaveFn::indicator(ConvexBody::ball(2, 1.3), 2.0),
          LogConcaveFn::indicator(ConvexBody::zonotope({vec({1, 0}), vec({0, 1}), vec({1, 1})})),
          LogConcaveFn::exp_gauge(centred_simplex()),
          LogConcaveFn::exp_gauge(cube3(), 0.5),
          LogConcaveFn::gaussian(2, 1.0),
          LogConcaveFn::gaussian(cov, 1.7),
          LogConcaveFn::radial(2, 1.5, 0.8),
          LogConcaveFn::radial(3, 3.0, 1.2, 0.5),
          quadratic_grid()};
}

// ½ ∫ |<∇f, u>| by a midpoint rule with the analytic gradient.
double direct_half_integral(const LogConcaveFn& f, const Vec& u, int cells) {
  const Box box = effective_box(f);
  return 0.5 * midpoint_rule([&](const Vec& x) { return std::abs(gradient(f, x).dot(u)); }, box, cells);
}

}  // namespace

TEST_CASE("petty support examples") {
  CHECK(petty_support(LogConcaveFn::indicator(square(0, 1)), vec({1, 0})) == doctest::Approx(1.0).epsilon(1e-14));
  const LogConcaveFn g = LogConcaveFn::gaussian(2, 1.0);
  CHECK(petty_support(g, vec({1, 0})) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-6));
  CHECK(petty_support(g, vec({0.6, -0.8})) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-6));
  const LogConcaveFn eb = LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1));
  CHECK(petty_support(eb, vec({0, 1})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(PettySupport(eb, {}, PettyRoute::Direct)(vec({0, 1})) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("gaussian support against the analytic gradient") {
  Mat cov(2, 2);
  cov << 2.0, 0.6, 0.6, 0.8;
  for (const LogConcaveFn& f : {LogConcaveFn::gaussian(2, 1.0), LogConcaveFn::gaussian(cov, 1.7),
                                LogConcaveFn::radial(2, 1.5, 0.8)}) {
    for (const Vec& u : {vec({1, 0}), vec({0.28, 0.96})}) {
      const double oracle = direct_half_integral(f, u, 1200);
      CHECK(petty_support(f, u) == doctest::Approx(oracle).epsilon(2e-4));
    }
  }
}

TEST_CASE("grid potential support") {
  const LogConcaveFn f = quadratic_grid();
  for (const Vec& u : {vec({1, 0}), vec({0.6, 0.8})})
    CHECK(petty_support(f, u) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(5e-3));
  CHECK(grad_l1(f) == doctest::Approx(2 * kPi * std::sqrt(kPi / 2)).epsilon(5e-3));

  const Box box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0));
  const LogConcaveFn cut =
      LogConcaveFn::grid(GridFn::sample(box, {33, 33}, [](const Vec& x) { return 0.5 * x.squaredNorm(); }));
  try {
    (void)gradient_atoms(cut);
    FAIL("expected NotIntegrableGradient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIntegrableGradient);
  }
}

TEST_CASE("polar projection eval") {
  const LogConcaveFn g = LogConcaveFn::gaussian(2, 1.0);
  CHECK(polar_projection_eval(g, Vec::Zero(2)) == 1.0);
  CHECK(polar_projection_eval(LogConcaveFn::indicator(ConvexBody::ball(2, 1)), vec({0.6, 0.8})) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(polar_projection_eval(g, vec({0, 1})) == doctest::Approx(std::exp(-std::sqrt(2 * kPi))).epsilon(1e-6));
  const PettySupport h(g);
  CHECK(polar_projection_eval(h, vec({0, 2})) == doctest::Approx(std::exp(-2 * std::sqrt(2 * kPi))).epsilon(1e-6));
}

TEST_CASE("polar projection integrals") {
  CHECK(polar_projection_integral(LogConcaveFn::gaussian(2, 1.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(polar_projection_integral(LogConcaveFn::indicator(square(0, 1))) == doctest::Approx(4.0).epsilon(1e-6));
  for (const ConvexBody& k : {square(-1, 1), centred_simplex(), cube3(), ConvexBody::ball(3, 0.7)}) {
    const int n = k.dim();
    const double ratio = polar_projection_integral(LogConcaveFn::exp_gauge(k)) /
                         polar_projection_integral(LogConcaveFn::indicator(k));
    CHECK(ratio == doctest::Approx(std::pow(int_factorial(n - 1), -n)).epsilon(1e-12));
  }
  CHECK(polar_projection_integral(LogConcaveFn::half_gaussian()) == doctest::Approx(2.0));
}

TEST_CASE("degenerate petty body") {
  try {
    (void)polar_projection_integral(LogConcaveFn::zero(2));
    FAIL("expected DegeneratePettyBody");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePettyBody);
  }
}

TEST_CASE("petty body") {
  CHECK(petty_body_polar_volume(LogConcaveFn::indicator(ConvexBody::ball(2, 1))) ==
        doctest::Approx(kPi / 16).epsilon(1e-12));
  CHECK(petty_body_polar_volume(LogConcaveFn::gaussian(2, 1.0)) == doctest::Approx(1.0 / 8).epsilon(1e-6));
  CHECK(grad_l1(LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1))) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(grad_l1(LogConcaveFn::gaussian(2, 1.0)) == doctest::Approx(2 * kPi * std::sqrt(kPi / 2)).epsilon(1e-6));
  CHECK(grad_l1(LogConcaveFn::half_gaussian()) == doctest::Approx(2.0));

  const LogConcaveFn f = LogConcaveFn::gaussian(2, 1.3);
  const PettySupport h(f);
  CounterRng rng(5, 0);
  for (int i = 0; i < 20; ++i) {
    const Vec u = rng.unit_vector(2);
    CHECK(petty_body_support(h, u) == 2 * h(u));
  }
}

TEST_CASE("evenness") {
  CounterRng rng(11, 0);
  for (const LogConcaveFn& f : zoo()) {
    const PettySupport h(f);
    for (int i = 0; i < 25; ++i) {
      const Vec u = rng.unit_vector(f.dim());
      CHECK(h(u) == doctest::Approx(h(-u)).epsilon(1e-9));
    }
    // Paired nodes of the evaluation rule.
    const auto& nodes = h.rule().nodes;
    for (std::size_t j = 0; j < nodes.size(); j += nodes.size() / 16 + 1)
      CHECK(h(nodes[j]) == doctest::Approx(h(-nodes[j])).epsilon(1e-9));
  }
}

TEST_CASE("petty body identity on a shared rule") {
  for (const LogConcaveFn& f : zoo()) {
    for (PettyRoute route : {PettyRoute::ShortCircuit, PettyRoute::Direct}) {
      const PettySupport h(f, {}, route);
      const int n = f.dim();
      const double lhs = polar_projection_integral(h);
      const double rhs = std::pow(2.0, n) * int_factorial(n) * petty_body_polar_volume(h);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("radial functions have constant support") {
  for (const LogConcaveFn& f : {LogConcaveFn::gaussian(2, 1.0), LogConcaveFn::radial(2, 1.5, 0.8),
                                LogConcaveFn::radial(3, 3.0, 1.2, 0.5), LogConcaveFn::gaussian(3, 0.4),
                                LogConcaveFn::exp_gauge(ConvexBody::ball(3, 2.0))}) {
    const PettySupport h(f, {}, PettyRoute::Direct);
    const auto v = h.values();
    double mean = 0.0, var = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    for (double x : v) var += (x - mean) * (x - mean);
    const double cov = std::sqrt(var / v.size()) / mean;
    CHECK(cov <= 1e-3);
  }
}

TEST_CASE("direct exponential gauge atoms match the projection body") {
  for (const ConvexBody& k : {square(-1, 1), centred_simplex(), cube3()}) {
    const LogConcaveFn f = LogConcaveFn::exp_gauge(k);
    const PettySupport fast(f), slow(f, {}, PettyRoute::Direct);
    CounterRng rng(3, 0);
    for (int i = 0; i < 10; ++i) {
      const Vec u = rng.unit_vector(k.dim());
      CHECK(slow(u) == doctest::Approx(fast(u)).epsilon(1e-3));
    }
    CHECK(slow.grad_l1() == doctest::Approx(fast.grad_l1()).epsilon(1e-3));
  }
}

TEST_CASE("mollified indicator converges to the projection body") {
  const ConvexBody k = centred_simplex();
  const double r = origin_inradius(k);
  const std::vector<Vec> dirs = {vec({1, 0}), vec({0.6, 0.8}), vec({-0.28, 0.96})};
  const ConvexBody pk = projection_body(k);
  std::vector<std::vector<double>> values;
  for (double s : {0.1, 0.05, 0.025}) values.push_back(mollified_indicator_support(k, dirs, s * r, 4096));
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const double exact = support(pk, dirs[d]);
    double prev = kInf;
    int i = 0;
    for (double s : {0.1, 0.05, 0.025}) {
      const double err = values[i][d] - exact;
      // For a ramp around a planar body the excess is exactly ε|u|.
      CHECK(err / (s * r) == doctest::Approx(1.0).epsilon(2e-2));
      CHECK(std::abs(err) < prev);
      prev = std::abs(err);
      ++i;
    }
    CHECK(2 * values[2][d] - values[1][d] == doctest::Approx(exact).epsilon(1e-3));
  }
}
