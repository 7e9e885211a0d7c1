#include "doctest.h"

#include "pettyfn/logconcave.hpp"
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

ConvexBody centred_simplex() { return ConvexBody::polytope({vec({2, -1}), vec({-1, 2}), vec({-1, -1})}); }

std::vector<LogConcaveFn> smooth_zoo() {
  Mat cov(2, 2);
  cov << 2.0, 0.6, 0.6, 0.8;
  return {LogConcaveFn::gaussian(2, 1.0), LogConcaveFn::gaussian(cov, 1.7), LogConcaveFn::radial(2, 1.5, 0.8),
          LogConcaveFn::radial(3, 3.0, 1.2, 0.5), LogConcaveFn::exp_gauge(centred_simplex()),
          LogConcaveFn::exp_gauge(square(-1, 1), 2.0), LogConcaveFn::exp_gauge(ConvexBody::ball(3, 0.7))};
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(eval(LogConcaveFn::indicator(ConvexBody::ball(2, 1)), vec({0.3, 0.4})) == 1.0);
  CHECK(eval(LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1)), vec({1.2, 1.6})) == doctest::Approx(std::exp(-2.0)));
  const LogConcaveFn hg = LogConcaveFn::half_gaussian();
  CHECK(eval(hg, vec({-1})) == 0.0);
  CHECK(eval(hg, vec({1})) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(eval(LogConcaveFn::indicator(ConvexBody::ball(2, 1), 3.0), vec({0, 0})) == 3.0);
  CHECK(eval(LogConcaveFn::zero(2), vec({0, 0})) == 0.0);
}

TEST_CASE("gradient examples") {
  const Vec g = gradient(LogConcaveFn::gaussian(2, 1.0), vec({1, 0}));
  CHECK(g[0] == doctest::Approx(-std::exp(-0.5)).epsilon(1e-15));
  CHECK(g[1] == 0.0);
  const Vec e = gradient(LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1)), vec({2, 0}));
  CHECK(e[0] == doctest::Approx(-std::exp(-2.0)).epsilon(1e-15));
  CHECK(std::abs(e[1]) < 1e-300);
  CHECK(gradient(LogConcaveFn::indicator(ConvexBody::ball(2, 1)), vec({0.2, 0.1})).norm() == 0.0);
  CHECK_THROWS_AS(gradient(LogConcaveFn::exp_gauge(square(-1, 1)), vec({1, 1})), Error);
  CHECK_THROWS_AS(gradient(LogConcaveFn::radial(2, 1.5, 1.0), vec({0, 0})), Error);
}

TEST_CASE("gradient matches central differences of eval") {
  CounterRng rng(5);
  const double step = 1e-4;
  for (const LogConcaveFn& f : smooth_zoo()) {
    const int n = f.dim();
    int checked = 0;
    while (checked < 20) {
      const Vec x = rng.normal_vector(n) * 1.2;
      Vec g;
      try {
        g = gradient(f, x);
      } catch (const Error&) {
        continue;
      }
      Vec fd(n);
      bool smooth = true;
      for (int d = 0; d < n; ++d) {
        Vec a = x, b = x;
        a[d] += step;
        b[d] -= step;
        // Skip points within a step of a gauge-cone boundary.
        try {
          (void)gradient(f, a), (void)gradient(f, b);
        } catch (const Error&) {
          smooth = false;
        }
        fd[d] = (eval(f, a) - eval(f, b)) / (2 * step);
      }
      if (!smooth) continue;
      if (f.kind() == LogConcaveFn::Kind::ExpGauge &&
          gauge_cone(f.as<ExpGauge>().body, x + step * Vec::Ones(n)) != gauge_cone(f.as<ExpGauge>().body, x))
        continue;
      CHECK((g - fd).norm() <= 1e-5 * std::max(g.norm(), 1e-3));
      ++checked;
    }
  }
}

TEST_CASE("support_function examples") {
  CHECK(support_function(LogConcaveFn::indicator(square(0, 1)), vec({1, 1})) == 2.0);
  const LogConcaveFn eg = LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1));
  CHECK(support_function(eg, vec({0.3, 0.4})) == 0.0);
  CHECK(support_function(eg, vec({1.2, 1.6})) == kInf);
  CHECK(support_function(LogConcaveFn::gaussian(2, 1.0), vec({1, 2})) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(support_function(LogConcaveFn::zero(2), vec({1, 2})) == -kInf);
}

TEST_CASE("support function of a grid potential matches the closed form") {
  const GridFn phi = GridFn::sample(Box{Vec::Constant(2, -8), Vec::Constant(2, 8)}, {161, 161},
                                    [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const LogConcaveFn f = LogConcaveFn::grid(phi);
  CHECK(support_function(f, vec({1.0, -0.5})) == doctest::Approx(0.625).epsilon(1e-2));
  CHECK(eval(f, vec({0.55, 0.25})) == doctest::Approx(std::exp(-0.5 * (0.55 * 0.55 + 0.0625))).epsilon(5e-3));
  CHECK(eval(f, vec({9.0, 0.0})) == 0.0);
}

TEST_CASE("polar examples") {
  const LogConcaveFn pi = polar(LogConcaveFn::indicator(ConvexBody::ball(2, 1)));
  REQUIRE(pi.kind() == LogConcaveFn::Kind::ExpGauge);
  CHECK(pi.as<ExpGauge>().body.radius() == 1.0);
  const LogConcaveFn pe = polar(LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1)));
  REQUIRE(pe.kind() == LogConcaveFn::Kind::Indicator);
  CHECK(pe.as<Indicator>().body.radius() == 1.0);

  const LogConcaveFn ph = polar(LogConcaveFn::half_gaussian());
  CHECK(eval(ph, vec({-3.0})) == 1.0);
  CHECK(eval(ph, vec({2.0})) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

  try {
    polar(LogConcaveFn::indicator(square(0, 1)));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PolarNotRepresentable);
  }
  // The grid fallback still represents e^{-h_K}.
  const LogConcaveFn fallback = polar_on_grid(LogConcaveFn::indicator(square(0, 1)),
                                              Box{Vec::Constant(2, -2), Vec::Constant(2, 2)}, {9, 9});
  CHECK(eval(fallback, vec({1.0, -1.0})) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("polar is an involution on the symmetric closed forms") {
  const LogConcaveFn ib = LogConcaveFn::indicator(ConvexBody::ball(3, 1));
  CHECK(polar(polar(ib)).kind() == LogConcaveFn::Kind::Indicator);
  CHECK(polar(polar(ib)).as<Indicator>().body.radius() == 1.0);
  const LogConcaveFn eb = LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1));
  CHECK(polar(polar(eb)).as<ExpGauge>().body.radius() == 1.0);
  const LogConcaveFn g = LogConcaveFn::gaussian(2, 1.0);
  CHECK((polar(polar(g)).as<Gaussian>().covariance - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK(polar(polar(LogConcaveFn::half_gaussian())).as<HalfGaussian>().polar == false);
}

TEST_CASE("polar equals e^{-h_f}") {
  CounterRng rng(9);
  auto zoo = smooth_zoo();
  zoo.push_back(LogConcaveFn::indicator(square(-1, 2)));
  zoo.push_back(LogConcaveFn::indicator(ConvexBody::ball(2, 1.5), 2.0));
  for (const LogConcaveFn& f : zoo) {
    const LogConcaveFn p = polar(f);
    for (int k = 0; k < 100; ++k) {
      const Vec y = rng.normal_vector(f.dim());
      const double h = support_function(f, y);
      if (!std::isfinite(h)) continue;
      // Skip points within rounding of the boundary of an indicator polar.
      if (p.kind() == LogConcaveFn::Kind::Indicator && std::abs(gauge(p.as<Indicator>().body, y) - 1.0) < 1e-9) continue;
      CHECK(std::abs(eval(p, y) - std::exp(-h)) <= 1e-9);
    }
  }
}

TEST_CASE("polar reverses order") {
  CounterRng rng(13);
  struct Pair {
    LogConcaveFn lo, hi;
  };
  const std::vector<Pair> pairs{
      {LogConcaveFn::indicator(ConvexBody::ball(2, 0.8)), LogConcaveFn::indicator(square(-1, 1))},
      {LogConcaveFn::gaussian(2, 0.7), LogConcaveFn::gaussian(2, 1.3)},
      {LogConcaveFn::exp_gauge(centred_simplex(), 0.5), LogConcaveFn::exp_gauge(square(-2, 2), 0.9)},
      {LogConcaveFn::radial(2, 2.0, 1.0, 0.3), LogConcaveFn::radial(2, 2.0, 1.0, 1.0)},
  };
  for (const auto& [lo, hi] : pairs) {
    const LogConcaveFn plo = polar(lo), phi = polar(hi);
    bool ordered = true, premise = true;
    for (int k = 0; k < 1000; ++k) {
      const Vec x = rng.normal_vector(2) * 1.5;
      premise = premise && eval(lo, x) <= eval(hi, x) + 1e-12;
      ordered = ordered && eval(plo, x) >= eval(phi, x) - 1e-9;
    }
    CHECK(premise);
    CHECK(ordered);
  }
}

TEST_CASE("constant_on_ray examples") {
  const RaySpec e1{vec({0, 0}), vec({1, 0})};
  CHECK(constant_on_ray(LogConcaveFn::indicator(ConvexBody::ball(2, 1)), e1).behavior == RayBehavior::NotConstant);
  const RayResult r = constant_on_ray(polar(LogConcaveFn::half_gaussian()), RaySpec{vec({-1}), vec({-1})});
  CHECK(r.behavior == RayBehavior::ConstantPositive);
  CHECK(r.value == 1.0);
  CHECK(constant_on_ray(LogConcaveFn::gaussian(2, 1.0), RaySpec{vec({0.3, -2}), vec({0.6, 0.8})}).behavior ==
        RayBehavior::NotConstant);
  CHECK(constant_on_ray(LogConcaveFn::indicator(ConvexBody::ball(2, 1)), RaySpec{vec({3, 0}), vec({1, 0})})
            .behavior == RayBehavior::Zero);
}

TEST_CASE("is_integrable examples") {
  CHECK(is_integrable(LogConcaveFn::exp_gauge(centred_simplex())).status == Integrability::Integrable);
  const IntegrabilityVerdict v = is_integrable(polar(LogConcaveFn::half_gaussian()));
  CHECK(v.status == Integrability::NotIntegrable);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->direction[0] == -1.0);
  CHECK(is_integrable(LogConcaveFn::zero(2)).status == Integrability::ZeroFunction);

  const GridFn bowl = GridFn::sample(Box{Vec::Constant(2, -3), Vec::Constant(2, 3)}, {31, 31},
                                     [](const Vec& x) { return x.norm() + 0.1 * x.squaredNorm(); });
  CHECK(is_integrable(LogConcaveFn::grid(bowl)).status == Integrability::Integrable);
  const GridFn trough = GridFn::sample(Box{Vec::Constant(2, -3), Vec::Constant(2, 3)}, {31, 31},
                                       [](const Vec& x) { return x[1] * x[1]; });
  const IntegrabilityVerdict t = is_integrable(LogConcaveFn::grid(trough));
  CHECK(t.status == Integrability::Inconclusive);
  CHECK(t.witness.has_value());
}

TEST_CASE("closed-form integrals agree with box quadrature") {
  IntegrationSpec spec;
  spec.resolution = 2048;
  std::vector<LogConcaveFn> zoo = smooth_zoo();
  zoo.push_back(LogConcaveFn::half_gaussian());
  for (const LogConcaveFn& f : zoo) {
    if (f.dim() > 2) continue;
    const Box box = effective_box(f);
    spec.resolution = f.kind() == LogConcaveFn::Kind::ExpGauge ? 2048 : 512;
    for (double q : {1.0, 2.0}) {
      const double numeric = box_integrate([&](const Vec& x) { return std::pow(eval(f, x), q); }, box, spec).value;
      INFO(std::string(to_string(f.kind())), " q=", q);
      // Gauge kinks limit the midpoint rule on the wide exp-gauge boxes.
      CHECK(relative_error(power_integral(f, q), numeric) <= 2e-4);
    }
  }
  CHECK(l1_norm(LogConcaveFn::exp_gauge(square(-1, 1))) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(lp_norm(LogConcaveFn::gaussian(2, 1.0), 2.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
}

TEST_CASE("integrable closed forms are stable under box doubling") {
  IntegrationSpec spec;
  spec.resolution = 256;
  std::vector<LogConcaveFn> zoo = smooth_zoo();
  zoo.push_back(LogConcaveFn::indicator(ConvexBody::ball(2, 1)));
  zoo.push_back(LogConcaveFn::half_gaussian());
  for (const LogConcaveFn& f : zoo) {
    if (f.dim() > 2) continue;
    REQUIRE(is_integrable(f).status == Integrability::Integrable);
    const DoublingCheck d = box_doubling(f, spec);
    CHECK(std::isfinite(d.value));
    CHECK(d.relative_change < 1e-6);
  }
}

TEST_CASE("polar integrability theorem check") {
  const VerificationReport ball = polar_integrability_theorem_check(LogConcaveFn::indicator(ConvexBody::ball(2, 1)));
  CHECK(ball.status == Status::Passed);
  const VerificationReport sq = polar_integrability_theorem_check(LogConcaveFn::indicator(square(-1, 1)));
  CHECK(sq.status == Status::Passed);
  // Oracle for the square: ∫ e^{-h_K} = 2! vol(K°) = 2 · 2.
  const LogConcaveFn p = polar(LogConcaveFn::indicator(square(-1, 1)));
  CHECK(l1_norm(p) == doctest::Approx(4.0).epsilon(1e-12));
  const VerificationReport hg = polar_integrability_theorem_check(LogConcaveFn::half_gaussian());
  CHECK(hg.status == Status::Skipped);
  CHECK(!hg.reason.empty());
  CHECK(polar_integrability_theorem_check(polar(LogConcaveFn::half_gaussian())).status == Status::Passed);
  for (const LogConcaveFn& f : smooth_zoo()) CHECK(polar_integrability_theorem_check(f).status == Status::Passed);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(LogConcaveFn::exp_gauge(square(0, 1)), Error);
  CHECK_THROWS_AS(LogConcaveFn::radial(2, 0.5, 1.0), Error);
  CHECK_THROWS_AS(LogConcaveFn::gaussian(2, 1.0, 0.0), Error);
  const GridFn bump = GridFn::sample(Box{Vec::Constant(1, -2), Vec::Constant(1, 2)}, {21},
                                     [](const Vec& x) { return std::cos(3 * x[0]); });
  CHECK_THROWS_AS(LogConcaveFn::grid(bump), Error);
}
