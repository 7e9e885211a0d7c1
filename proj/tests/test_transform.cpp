#include "doctest.h"

#include <algorithm>

#include "pettyfn/random.hpp"
#include "pettyfn/transform.hpp"

using namespace pettyfn;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

Box cube(int n, double lo, double hi) { return Box{Vec::Constant(n, lo), Vec::Constant(n, hi)}; }

// Brute-force sup over every primal grid point.
double brute_conjugate(const GridFn& f, const Vec& y) {
  double best = -kInf;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::isfinite(f.values[k])) best = std::max(best, f.point(k).dot(y) - f.values[k]);
  return best;
}

GridFn random_convex_grid(CounterRng& rng, int n, int count) {
  // Max of a few random affine pieces plus a quadratic; optionally a half-space as +inf.
  const int pieces = 1 + static_cast<int>(rng.next_uniform() * 4);
  std::vector<Vec> a;
  std::vector<double> b;
  for (int i = 0; i < pieces; ++i) {
    a.push_back(rng.normal_vector(n));
    b.push_back(rng.next_normal());
  }
  const double q = rng.next_uniform();
  const Vec cut = rng.unit_vector(n);
  const bool restrict_domain = rng.next_uniform() < 0.5;
  return GridFn::sample(cube(n, -2.0, 2.0), std::vector<int>(n, count), [&](const Vec& x) {
    if (restrict_domain && cut.dot(x) > 1.0) return kInf;
    double v = -kInf;
    for (int i = 0; i < pieces; ++i) v = std::max(v, a[i].dot(x) + b[i]);
    return v + q * x.squaredNorm();
  });
}

}  // namespace

TEST_CASE("conjugate_1d examples") {
  {
    const auto xs = linspace(-8, 8, 801);
    std::vector<double> phi;
    for (double x : xs) phi.push_back(0.5 * x * x);
    const auto ys = linspace(-3, 3, 121);
    const auto c = conjugate_1d(xs, phi, ys);
    const double h = xs[1] - xs[0];
    double worst = 0.0;
    for (std::size_t k = 0; k < ys.size(); ++k) worst = std::max(worst, std::abs(c[k] - 0.5 * ys[k] * ys[k]));
    CHECK(worst <= h * h);
  }
  {
    const auto xs = linspace(-3, 3, 601);
    std::vector<double> phi;
    for (double x : xs) phi.push_back(std::abs(x) <= 1.0 + 1e-12 ? 0.0 : kInf);
    const auto ys = linspace(-5, 5, 41);
    const auto c = conjugate_1d(xs, phi, ys);
    for (std::size_t k = 0; k < ys.size(); ++k) CHECK(c[k] == doctest::Approx(std::abs(ys[k])).epsilon(1e-12));
  }
  {
    const auto xs = linspace(-10, 10, 2001);
    std::vector<double> phi;
    for (double x : xs) phi.push_back(std::abs(x));
    const auto ys = linspace(-2, 2, 81);
    const auto c = conjugate_1d(xs, phi, ys);
    const auto oracle = conjugate_1d_brute(xs, phi, ys);
    for (std::size_t k = 0; k < ys.size(); ++k) {
      CHECK(std::abs(c[k] - oracle[k]) <= 1e-12);
      if (std::abs(ys[k]) <= 1.0) CHECK(std::abs(c[k]) <= 1e-12);
      if (std::abs(ys[k]) > 1.2) CHECK(c[k] >= 10 * (std::abs(ys[k]) - 1.0) - 1e-9);
    }
  }
}

TEST_CASE("conjugate_1d rejects an empty domain") {
  const auto xs = linspace(0, 1, 5);
  const std::vector<double> phi(5, kInf);
  const std::vector<double> ys{0.0};
  try {
    conjugate_1d(xs, phi, ys);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyEffectiveDomain);
  }
}

TEST_CASE("linear-time path equals the brute-force path") {
  CounterRng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_uniform() * 511);
    const int m = 1 + static_cast<int>(rng.next_uniform() * 512);
    std::vector<double> xs(n), phi(n), ys(m);
    double x = -5.0 * rng.next_uniform();
    for (int i = 0; i < n; ++i) {
      x += 0.01 + rng.next_uniform();
      xs[i] = x;
      // Arbitrary (generally non-convex) samples with some +inf holes.
      phi[i] = rng.next_uniform() < 0.1 ? kInf : 3.0 * rng.next_normal();
    }
    phi[static_cast<std::size_t>(rng.next_uniform() * n)] = 0.5;
    for (int k = 0; k < m; ++k) ys[k] = 6.0 * rng.next_normal();
    const auto fast = conjugate_1d(xs, phi, ys);
    const auto slow = conjugate_1d_brute(xs, phi, ys);
    double worst = 0.0;
    for (int k = 0; k < m; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]) / std::max(1.0, std::abs(slow[k])));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("conjugate_nd examples") {
  {
    const GridFn f = GridFn::sample(cube(2, -8, 8), {161, 161}, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
    const Conjugate c = conjugate_nd(f, cube(2, -3, 3), {31, 31});
    const double h = f.max_step();
    for (std::size_t k = 0; k < c.fn.size(); ++k) {
      CHECK(std::abs(c.fn.values[k] - 0.5 * c.fn.point(k).squaredNorm()) <= h * h);
      CHECK(c.truncated[k] == 0);
    }
  }
  {
    const GridFn f = GridFn::sample(cube(2, -1, 2), {31, 31}, [](const Vec& x) {
      return x.minCoeff() >= -1e-12 && x.maxCoeff() <= 1.0 + 1e-12 ? 0.0 : kInf;
    });
    const Conjugate c = conjugate_nd(f, cube(2, -4, 4), {17, 17});
    for (std::size_t k = 0; k < c.fn.size(); ++k) {
      const Vec y = c.fn.point(k);
      CHECK(c.fn.values[k] == doctest::Approx(std::max(y[0], 0.0) + std::max(y[1], 0.0)).epsilon(1e-12));
    }
  }
  {
    const GridFn f = GridFn::sample(cube(2, -6, 6), {121, 121}, [](const Vec& x) { return x.norm(); });
    const Conjugate c = conjugate_nd(f, cube(2, -2, 2), {41, 41});
    for (std::size_t k = 0; k < c.fn.size(); ++k) {
      const double r = c.fn.point(k).norm();
      if (r <= 1.0) CHECK(std::abs(c.fn.values[k]) <= 1e-12);
      if (r >= 1.2) CHECK(c.fn.values[k] >= 0.5);
    }
  }
}

TEST_CASE("conjugate_nd equals brute force") {
  CounterRng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const GridFn f = random_convex_grid(rng, n, n == 3 ? 7 : 13);
    const Conjugate c = conjugate_nd(f, cube(n, -3, 3), std::vector<int>(n, n == 3 ? 5 : 9));
    for (std::size_t k = 0; k < c.fn.size(); ++k) {
      const double oracle = brute_conjugate(f, c.fn.point(k));
      CHECK(std::abs(c.fn.values[k] - oracle) <= 1e-9 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("order reversal of the conjugate") {
  CounterRng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 2;
    GridFn f1 = random_convex_grid(rng, n, 9);
    GridFn f2 = f1;
    for (double& v : f2.values)
      if (std::isfinite(v)) v += rng.next_uniform() * 2.0;
    const Box dual = cube(n, -4, 4);
    const std::vector<int> shape(n, 11);
    const Conjugate c1 = conjugate_nd(f1, dual, shape);
    const Conjugate c2 = conjugate_nd(f2, dual, shape);
    bool ordered = true;
    for (std::size_t k = 0; k < c1.fn.size(); ++k) ordered = ordered && c1.fn.values[k] >= c2.fn.values[k] - 1e-12;
    CHECK(ordered);
  }
}

TEST_CASE("conjugates are convex and satisfy Young-Fenchel") {
  CounterRng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 2;
    // Conjugates of arbitrary (non-convex) samples are still convex.
    GridFn f = GridFn::sample(cube(n, -2, 2), std::vector<int>(n, 9), [&](const Vec&) { return 2.0 * rng.next_normal(); });
    const Conjugate c = conjugate_nd(f, cube(n, -3, 3), std::vector<int>(n, 13));
    CHECK(convexity_violation(c.fn) <= 1e-9);
    bool young = true;
    for (std::size_t i = 0; i < f.size(); i += 3)
      for (std::size_t j = 0; j < c.fn.size(); j += 5)
        young = young && f.values[i] + c.fn.values[j] >= f.point(i).dot(c.fn.point(j)) - 1e-9;
    CHECK(young);
  }
}

TEST_CASE("double conjugate examples") {
  auto quad = [](int count) {
    return GridFn::sample(cube(1, -4, 4), {count}, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  };
  const BiconjugateReport coarse = double_conjugate_check(quad(41));
  const BiconjugateReport fine = double_conjugate_check(quad(81));
  CHECK(fine.max_deviation <= 0.5 * coarse.max_deviation + 1e-15);

  const GridFn absf = GridFn::sample(cube(2, -4, 4), {41, 41}, [](const Vec& x) { return x.norm(); });
  const BiconjugateReport a = double_conjugate_check(absf);
  CHECK(a.points > 0);
  CHECK(a.max_deviation <= a.step);

  Vec slope(2);
  slope << 0.7, -1.3;
  const GridFn affine = GridFn::sample(cube(2, -2, 2), {21, 21}, [&](const Vec& x) { return slope.dot(x) + 0.4; });
  CHECK(double_conjugate_check(affine, 0.5).max_deviation <= 1e-9);
}

TEST_CASE("double conjugate requires convex input") {
  const GridFn bump = GridFn::sample(cube(1, -2, 2), {21}, [](const Vec& x) { return std::cos(3 * x[0]); });
  try {
    double_conjugate_check(bump);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConvexInput);
  }
}

TEST_CASE("interpolation and truncation flags") {
  const GridFn f = GridFn::sample(cube(2, 0, 1), {3, 3}, [](const Vec& x) { return x[0] + 2 * x[1]; });
  Vec x(2);
  x << 0.3, 0.8;
  CHECK(interpolate(f, x) == doctest::Approx(1.9).epsilon(1e-14));
  x << 1.5, 0.0;
  CHECK(interpolate(f, x) == kInf);

  // A linear function on a bounded box always attains its sup on the boundary.
  const GridFn g = GridFn::sample(cube(1, -1, 1), {11}, [](const Vec& x) { return x[0]; });
  const Conjugate c = conjugate_nd(g, cube(1, -2, 2), {5});
  CHECK(std::all_of(c.truncated.begin(), c.truncated.end(), [](unsigned char t) { return t == 1; }));
}
