#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "pettyfn/random.hpp"
#include "pettyfn/suites.hpp"

using namespace pettyfn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::vector<NamedBody> criterion_bodies(int n) {
  std::vector<NamedBody> out;
  for (auto& b : body_zoo(n))
    if (b.name != "cross-polytope") out.push_back(std::move(b));
  return out;
}

const VerificationReport& find(const std::vector<VerificationReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("missing report " + name);
}

Outcome identity_criterion(const std::string& report_name, double tol) {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3})
    for (const auto& b : criterion_bodies(n)) {
      const VerificationReport& r = find(check_body_identities(b.body, {}, b.name), report_name);
      const double err = std::abs(r.ratio - 1.0);
      worst = std::max(worst, err);
      o.pass = o.pass && r.status == Status::Passed && err <= tol;
    }
  o.detail = "8 bodies (n=2,3), max rel err " + num(worst, 3);
  return o;
}

Outcome criterion1() { return identity_criterion("gauge-integral", 1e-3); }
Outcome criterion2() { return identity_criterion("gauge-petty-integral-ratio", 1e-3); }

Outcome criterion3() {
  Outcome o;
  double min_ratio = kInf, radial_lo = kInf, radial_hi = -kInf;
  std::size_t count = 0;
  for (int n : {2, 3})
    for (const auto& f : function_zoo(n)) {
      const VerificationReport r = check_theorem_polar(f.f, {}, f.name);
      ++count;
      min_ratio = std::min(min_ratio, r.ratio);
      o.pass = o.pass && r.ratio >= 1.0 - 1e-3;
      if (f.name == "gaussian" || f.name == "indicator(ball)" || f.name == "exp_gauge(ball)") {
        radial_lo = std::min(radial_lo, r.ratio);
        radial_hi = std::max(radial_hi, r.ratio);
        o.pass = o.pass && r.ratio <= 1.0 + 1e-2;
      }
    }
  const VerificationReport g = check_theorem_polar(LogConcaveFn::gaussian(2, 1.0));
  const double two_pi3 = 2.0 * kPi * kPi * kPi;
  const double gerr = relative_error(g.lhs, two_pi3);
  o.pass = o.pass && gerr <= 1e-3;
  o.detail = std::to_string(count) + " functions, min ratio " + num(min_ratio) + ", radial ratios [" +
             num(radial_lo) + ", " + num(radial_hi) + "], gaussian lhs vs 2pi^3 rel err " + num(gerr, 3);
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::string detail;
  for (int n : {2, 3}) {
    const VerificationReport r = check_corollary_surface(ConvexBody::ball(n, 1.0), {}, "ball");
    o.pass = o.pass && std::abs(r.ratio - 1.0) <= 1e-3;
    detail += "ball n=" + std::to_string(n) + " ratio " + num(r.ratio, 8) + "; ";
    for (const auto& b : criterion_bodies(n)) o.pass = o.pass && check_corollary_surface(b.body).ratio >= 1.0 - 1e-3;
  }
  o.detail = detail + "zoo ratios >= 1";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::string detail;
  for (int n : {2, 3}) {
    const double lower = binomial(2 * n, n) / std::pow(n, n);
    const double upper = std::pow(unit_ball_volume(n) / unit_ball_volume(n - 1), n);
    const double simplex = petty_zhang_middle(body_zoo(n)[2].body);
    const double ball = petty_zhang_middle(ConvexBody::ball(n, 1.0));
    o.pass = o.pass && relative_error(simplex, lower) <= 1e-3 && relative_error(ball, upper) <= 1e-3;
    detail += "n=" + std::to_string(n) + " simplex " + num(simplex) + " vs " + num(lower) + ", ball " + num(ball) +
              " vs " + num(upper) + "; ";
    if (n == 2) {
      const double square = petty_zhang_middle(body_zoo(2)[1].body);
      o.pass = o.pass && lower == 1.5 && square - lower > 0.1 && upper - square > 0.1;
      detail += "square " + num(square) + "; ";
    }
  }
  o.detail = detail.substr(0, detail.size() - 2);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::string detail;
  IntegrationSpec mc;
  mc.method = Method::MonteCarlo;
  for (int n : {2, 3}) {
    const auto up = check_functional_petty_zhang(LogConcaveFn::indicator(ConvexBody::ball(n, 1.0)), mc);
    const auto lo = check_functional_petty_zhang(LogConcaveFn::exp_gauge(body_zoo(n)[2].body), mc);
    const double eu = std::abs(up[1].ratio - 1.0), el = std::abs(lo[0].ratio - 1.0);
    o.pass = o.pass && eu <= 1e-3 && el <= 2e-2 && lo[0].error_estimate > 0.0;
    detail += "n=" + std::to_string(n) + " upper(ball) err " + num(eu, 3) + ", lower(simplex gauge) ratio " +
              num(lo[0].ratio) + " +- " + num(lo[0].error_estimate, 2) + "; ";
  }
  o.detail = detail.substr(0, detail.size() - 2);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0.0;
  std::size_t count = 0;
  for (int n : {2, 3})
    for (const auto& f : function_zoo(n)) {
      const VerificationReport r = check_integral_volume(f.f, {}, f.name);
      ++count;
      worst = std::max(worst, std::abs(r.ratio - 1.0));
    }
  o.pass = worst <= 1e-6;
  o.detail = std::to_string(count) + " functions, max rel err " + num(worst, 3);
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3})
    for (double a : {1.0, std::exp(1.0), 0.25}) {
      const VerificationReport r = check_entropic_bound(LogConcaveFn::indicator(ConvexBody::ball(n, 1.0), a), a);
      worst = std::max(worst, std::abs(r.ratio - 1.0));
      o.pass = o.pass && r.status == Status::Passed;
    }
  const VerificationReport g = check_entropic_bound(LogConcaveFn::gaussian(2, 1.0), std::exp(-0.5));
  o.pass = o.pass && worst <= 1e-3 && g.status == Status::Passed && g.ratio < 1.0 - 1e-2;
  o.detail = "a*indicator(ball) max rel err " + num(worst, 3) + "; gaussian ratio " + num(g.ratio);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const IntegrabilityVerdict hg = is_integrable(polar(LogConcaveFn::half_gaussian()));
  const bool witness = hg.status == Integrability::NotIntegrable && hg.witness &&
                       hg.witness->direction.size() == 1 && hg.witness->direction[0] == -1.0;
  o.pass = witness;
  double worst = 0.0;
  std::size_t integrable = 0;
  for (int n : {2, 3})
    for (const auto& f : function_zoo(n)) {
      if (!origin_interior_to_support(f.f)) continue;
      const LogConcaveFn g = polar(f.f);
      const bool ok = is_integrable(g).status == Integrability::Integrable;
      o.pass = o.pass && ok;
      if (!ok) continue;
      ++integrable;
      worst = std::max(worst, box_doubling(g).relative_change);
    }
  o.pass = o.pass && worst < 1e-6;
  o.detail = std::string("polar(half_gaussian): ") + to_string(hg.status) +
             (witness ? ", witness (-1)" : ", wrong witness") + "; " + std::to_string(integrable) +
             " zoo polars integrable, max doubling change " + num(worst, 3);
  return o;
}

Outcome criterion10(double threshold) {
  Outcome o;
  const std::vector<double> log_t{0.0, -1.0, -3.0, -9.0, -99.0, -1e3, -1e6, -1e12};
  const FalsifyTable t2 = falsify_log_bound(log_t, 2, threshold);
  const FalsifyTable t3 = falsify_log_bound(log_t, 3, threshold);
  const double at_e9 = t2.rows[3].quantity;
  o.pass = at_e9 == 10.0 && t2.monotone && t3.monotone && t2.exceeded && t3.exceeded;
  o.detail = "n=2 at t=e^-9: " + num(at_e9, 17) + ", monotone " + (t2.monotone && t3.monotone ? "yes" : "no") +
             ", threshold " + num(threshold) + " exceeded " + (t2.exceeded && t3.exceeded ? "yes" : "no");
  return o;
}

// Property suites, 100 seeded instances each.

Box grid_box(int n, double r) { return Box{Vec::Constant(n, -r), Vec::Constant(n, r)}; }

GridFn random_convex_grid(CounterRng& rng, int n, int count, bool restrict_domain) {
  const int pieces = 1 + static_cast<int>(rng.next_uniform() * 4);
  std::vector<Vec> a;
  std::vector<double> b;
  for (int i = 0; i < pieces; ++i) {
    a.push_back(rng.normal_vector(n));
    b.push_back(rng.next_normal());
  }
  const double q = 0.2 + rng.next_uniform();
  const Vec cut = rng.unit_vector(n);
  return GridFn::sample(grid_box(n, 2.0), std::vector<int>(n, count), [&](const Vec& x) {
    if (restrict_domain && cut.dot(x) > 1.0) return kInf;
    double v = -kInf;
    for (int i = 0; i < pieces; ++i) v = std::max(v, a[i].dot(x) + b[i]);
    return v + q * x.squaredNorm();
  });
}

ConvexBody random_polytope(CounterRng& rng, int n, int count) {
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) pts.push_back(rng.normal_vector(n));
  return ConvexBody::polytope(pts);
}

ConvexBody random_centred_polytope(CounterRng& rng, int n, int count) {
  std::vector<Vec> pts;
  Vec mean = Vec::Zero(n);
  for (int i = 0; i < count; ++i) {
    pts.push_back(rng.normal_vector(n));
    mean += pts.back() / count;
  }
  for (Vec& p : pts) p -= mean;
  return ConvexBody::polytope(pts);
}

struct Property {
  std::string name;
  std::function<bool(CounterRng&, int)> instance;
};

Outcome criterion11(std::uint64_t seed) {
  const std::vector<Property> props{
      {"legendre-involution",
       [](CounterRng& rng, int k) {
         const GridFn f = random_convex_grid(rng, 1 + k % 2, k % 2 ? 25 : 81, false);
         const BiconjugateReport r = double_conjugate_check(f, 0.25);
         return r.points > 0 && r.max_deviation <= 4.0 * r.step;
       }},
      {"order-reversal",
       [](CounterRng& rng, int k) {
         const int n = 1 + k % 2;
         const GridFn f1 = random_convex_grid(rng, n, 9, rng.next_uniform() < 0.5);
         GridFn f2 = f1;
         for (double& v : f2.values)
           if (std::isfinite(v)) v += 2.0 * rng.next_uniform();
         const Conjugate c1 = conjugate_nd(f1, grid_box(n, 4), std::vector<int>(n, 11));
         const Conjugate c2 = conjugate_nd(f2, grid_box(n, 4), std::vector<int>(n, 11));
         for (std::size_t i = 0; i < c1.fn.size(); ++i)
           if (c1.fn.values[i] < c2.fn.values[i] - 1e-12) return false;
         return true;
       }},
      {"young-fenchel",
       [](CounterRng& rng, int k) {
         const int n = 1 + k % 2;
         const GridFn f = random_convex_grid(rng, n, 9, rng.next_uniform() < 0.5);
         const Conjugate c = conjugate_nd(f, grid_box(n, 3), std::vector<int>(n, 13));
         for (std::size_t i = 0; i < f.size(); ++i) {
           if (!std::isfinite(f.values[i])) continue;
           for (std::size_t j = 0; j < c.fn.size(); ++j)
             if (f.values[i] + c.fn.values[j] < f.point(i).dot(c.fn.point(j)) - 1e-9) return false;
         }
         return true;
       }},
      {"support-homogeneity",
       [](CounterRng& rng, int k) {
         const int n = 2 + k % 3;
         const ConvexBody bodies[] = {random_polytope(rng, n, 10), ConvexBody::ball(n, 0.5 + rng.next_uniform()),
                                      ConvexBody::zonotope({rng.normal_vector(n), rng.normal_vector(n),
                                                            rng.normal_vector(n), rng.normal_vector(n)})};
         for (const auto& b : bodies) {
           const Vec x = rng.normal_vector(n);
           const double lambda = 0.1 + 5.0 * rng.next_uniform();
           const double hx = support(b, x);
           if (std::abs(support(b, lambda * x) - lambda * hx) > 1e-12 * std::max(1.0, std::abs(lambda * hx)))
             return false;
         }
         return true;
       }},
      {"support-subadditivity",
       [](CounterRng& rng, int k) {
         const int n = 2 + k % 3;
         const ConvexBody bodies[] = {random_polytope(rng, n, 10), ConvexBody::ball(n, 0.5 + rng.next_uniform()),
                                      ConvexBody::zonotope({rng.normal_vector(n), rng.normal_vector(n),
                                                            rng.normal_vector(n), rng.normal_vector(n)})};
         for (const auto& b : bodies) {
           const Vec x = rng.normal_vector(n), y = rng.normal_vector(n);
           if (support(b, x + y) > support(b, x) + support(b, y) + 1e-12) return false;
         }
         return true;
       }},
      {"minkowski-balance",
       [](CounterRng& rng, int k) {
         const ConvexBody p = random_polytope(rng, 2 + k % 3, 6 + k % 9);
         return surface_area_measure(p).balance().norm() <= 1e-9;
       }},
      {"petty-evenness",
       [](CounterRng& rng, int k) {
         const int n = 2 + k % 2;
         LogConcaveFn f = LogConcaveFn::zero(n);
         PettyRoute route = PettyRoute::Direct;
         switch (k % 4) {
           case 0: {
             const Mat a = Mat::Identity(n, n) + 0.4 * Mat::NullaryExpr(n, n, [&] { return rng.next_normal(); });
             f = LogConcaveFn::gaussian(a * a.transpose() + 0.1 * Mat::Identity(n, n), 0.5 + rng.next_uniform());
             break;
           }
           case 1: f = LogConcaveFn::radial(n, 1.0 + 3.0 * rng.next_uniform(), 0.5 + rng.next_uniform()); break;
           case 2: f = LogConcaveFn::exp_gauge(random_centred_polytope(rng, 2, 8)); break;
           default:
             f = LogConcaveFn::indicator(random_polytope(rng, n, 8));
             route = PettyRoute::ShortCircuit;
         }
         const PettySupport h(f, {}, route);
         for (int i = 0; i < 8; ++i) {
           const Vec u = rng.unit_vector(f.dim());
           if (relative_error(h(u), h(-u)) > 1e-6) return false;
         }
         return true;
       }},
      {"petty-radial-constancy",
       [](CounterRng& rng, int k) {
         const int n = 2 + k % 2;
         const double s = 0.4 + 1.6 * rng.next_uniform();
         const LogConcaveFn f = k % 3 == 0   ? LogConcaveFn::gaussian(n, s)
                                : k % 3 == 1 ? LogConcaveFn::radial(n, 1.0 + 3.0 * rng.next_uniform(), s)
                                             : LogConcaveFn::exp_gauge(ConvexBody::ball(n, s));
         const PettySupport h(f, {}, PettyRoute::Direct);
         double mean = 0.0, var = 0.0;
         for (double v : h.values()) mean += v;
         mean /= h.values().size();
         for (double v : h.values()) var += (v - mean) * (v - mean);
         return std::sqrt(var / h.values().size()) / mean <= 1e-3;
       }},
  };
  Outcome o;
  std::string failures;
  for (std::size_t p = 0; p < props.size(); ++p) {
    CounterRng rng(seed, 1000 + p);
    int passed = 0;
    for (int k = 0; k < 100; ++k) passed += props[p].instance(rng, k) ? 1 : 0;
    if (passed != 100) {
      o.pass = false;
      failures += " " + props[p].name + " " + std::to_string(passed) + "/100";
    }
  }
  o.detail = std::to_string(props.size()) + " properties x 100 instances, seed " + std::to_string(seed) +
             (failures.empty() ? ", all pass" : ", failing:" + failures);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance table for pettyfn"};
  double threshold = 1e6;
  std::uint64_t seed = 0;
  std::vector<int> only;
  app.add_option("--threshold", threshold, "Fixed constant the falsification table must exceed");
  app.add_option("--seed", seed, "Seed for the property suites");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, [&] { return criterion10(threshold); },
      [&] { return criterion11(seed); },
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %2d  %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
