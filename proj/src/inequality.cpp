#include "pettyfn/inequality.hpp"

#include <algorithm>

#include "pettyfn/random.hpp"

namespace pettyfn {
namespace {

bool ball_radius(const ConvexBody& body, double& r) {
  if (body.kind() == ConvexBody::Kind::Ball) {
    r = body.radius();
    return true;
  }
  if (body.kind() == ConvexBody::Kind::Scaled && ball_radius(body.inner(), r)) {
    r *= body.factor();
    return true;
  }
  return false;
}

ConvexBody polytope_form(const ConvexBody& body) {
  return body.kind() == ConvexBody::Kind::Polytope ? body : to_polytope(body);
}

bool is_simplex(const ConvexBody& body) {
  double r = 0.0;
  if (ball_radius(body, r)) return false;
  return polytope_form(body).vertices().size() == static_cast<std::size_t>(body.dim() + 1);
}

bool radial_function(const LogConcaveFn& f) {
  double r = 0.0;
  switch (f.kind()) {
    case LogConcaveFn::Kind::Radial: return true;
    case LogConcaveFn::Kind::Gaussian: {
      const Mat& c = f.as<Gaussian>().covariance;
      const double s = c.trace() / c.rows();
      return (c - s * Mat::Identity(c.rows(), c.cols())).norm() <= 1e-12 * s;
    }
    case LogConcaveFn::Kind::Indicator: return ball_radius(f.as<Indicator>().body, r);
    case LogConcaveFn::Kind::ExpGauge: return ball_radius(f.as<ExpGauge>().body, r);
    default: return false;
  }
}

std::string subject_or(const std::string& subject, const char* fallback) {
  return subject.empty() ? std::string(fallback) : subject;
}

SphereRule rule_for(int n, const IntegrationSpec& spec) { return SphereRule::make(n, spec.sphere_nodes, spec.seed); }

// Body-only integrands are cheap, so they get a denser rule by default.
SphereRule fine_rule_for(int n, const IntegrationSpec& spec) {
  if (spec.sphere_nodes > 0 || n < 2 || n > 3) return rule_for(n, spec);
  return SphereRule::make(n, 8 * SphereRule::default_nodes(n), spec.seed);
}

// Σ_{i,j} min(v_i, v_j) in O(N log N).
double all_pairs_min(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = v[k] * static_cast<double>(2 * (n - k) - 1);
  return pairwise_sum(t);
}

double vertex_max_norm(const ConvexBody& body) {
  double r = 0.0;
  if (ball_radius(body, r)) return r;
  double m = 0.0;
  const ConvexBody p = polytope_form(body);
  for (const Vec& v : p.vertices()) m = std::max(m, v.norm());
  return m;
}

struct Comparison {
  double worst_left = 0.0;
  double worst_right = 1.0;
  double worst = -1.0;
};

void compare(Comparison& c, double left, double right) {
  const double dev = std::abs(left - right) / std::max(std::abs(right), 1e-300);
  if (dev > c.worst) c.worst = dev, c.worst_left = left, c.worst_right = right;
}

VerificationReport pointwise_report(const std::string& name, const std::string& subject, const Comparison& c,
                                    double tol, std::size_t points) {
  VerificationReport r = make_report(name, subject, c.worst_left, c.worst_right, Direction::Equal, tol);
  r.detail = "worst of " + std::to_string(points) + " points, relative deviation " + std::to_string(c.worst);
  return r;
}

int conjugate_grid_points(int n) {
  switch (n) {
    case 1: return 4097;
    case 2: return 257;
    case 3: return 65;
    default: return 17;
  }
}

// Fraction of sampled dual nodes where {φ* <= 0} agrees with `inside`, skipping
// nodes whose `gauge` lies in the uncertain band around 1.
template <class Gauge>
VerificationReport classification_report(const std::string& name, const std::string& subject, const GridFn& primal,
                                         double dual_half, Gauge gauge, std::uint64_t seed, std::uint64_t stream) {
  const int n = primal.dim();
  const int m = conjugate_grid_points(n);
  const Box dual(Vec::Constant(n, -dual_half), Vec::Constant(n, dual_half));
  const Conjugate conj = conjugate_nd(primal, dual, std::vector<int>(n, m));
  CounterRng rng(seed, stream);
  int agree = 0, tested = 0;
  for (int attempt = 0; attempt < 20000 && tested < 200; ++attempt) {
    const std::size_t k = std::min(conj.fn.size() - 1, static_cast<std::size_t>(rng.next_uniform() * conj.fn.size()));
    const Vec y = conj.fn.point(k);
    const double g = gauge(y);
    if (g > 0.9 && g < 1.25) continue;
    ++tested;
    const bool inside = g <= 1.0;
    const bool zero = conj.fn.values[k] <= 1e-9;
    agree += inside == zero;
  }
  VerificationReport r = make_report(name, subject, tested ? static_cast<double>(agree) / tested : 0.0, 1.0,
                                     Direction::Equal, 0.0);
  r.detail = std::to_string(agree) + "/" + std::to_string(tested) + " dual nodes classified consistently";
  return r;
}

}  // namespace

double shadow_volume(const ConvexBody& body, const Vec& u) {
  const int n = body.dim();
  double r = 0.0;
  if (ball_radius(body, r)) return unit_ball_volume(n - 1) * std::pow(r, n - 1);
  if (n == 1) return 1.0;
  Mat q = Eigen::HouseholderQR<Mat>(Mat(u)).householderQ();
  const Mat basis = q.rightCols(n - 1);
  const ConvexBody p = polytope_form(body);
  const auto& verts = p.vertices();
  if (n == 2) {
    double lo = kInf, hi = -kInf;
    for (const Vec& v : verts) {
      const double t = basis.col(0).dot(v);
      lo = std::min(lo, t), hi = std::max(hi, t);
    }
    return hi - lo;
  }
  std::vector<Vec> pts;
  pts.reserve(verts.size());
  for (const Vec& v : verts) pts.push_back(basis.transpose() * v);
  return hull_volume(pts);
}

Estimate min_double_integral(const LogConcaveFn& f, const IntegrationSpec& spec) {
  const int n = f.dim();
  const Box box = effective_box(f);
  const double vol = box.volume();
  auto evaluate = [&](int cells, int replicate) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(std::pow(cells, n)));
    if (replicate < 0) {
      for_each_cell_center(box, cells, [&](const Vec& x) { v.push_back(eval(f, x)); });
    } else {
      CounterRng rng(spec.seed, 1000 + replicate);
      const Vec h = (box.hi - box.lo) / cells;
      for_each_cell_center(box, cells, [&](const Vec& x) {
        Vec y = x;
        for (int d = 0; d < n; ++d) y[d] += (rng.next_uniform() - 0.5) * h[d];
        v.push_back(eval(f, y));
      });
    }
    const double count = static_cast<double>(v.size());
    return vol * vol / (count * count) * all_pairs_min(v);
  };

  Estimate e;
  if (spec.method == Method::Tensor) {
    int cells = spec.resolution_for(n);
    cells += cells % 2;
    e.value = evaluate(cells, -1);
    e.error = std::abs(e.value - evaluate(cells / 2, -1));
    return e;
  }
  const int cells = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(spec.samples), 1.0 / n))));
  constexpr int kReplicates = 8;
  std::vector<double> reps(kReplicates);
  for (int r = 0; r < kReplicates; ++r) reps[r] = evaluate(cells, r);
  const double mean = pairwise_sum(reps) / kReplicates;
  double var = 0.0;
  for (double x : reps) var += (x - mean) * (x - mean);
  e.value = mean;
  e.error = std::sqrt(var / (kReplicates - 1) / kReplicates);
  return e;
}

double entropy_integral(const LogConcaveFn& f, double a, const IntegrationSpec& spec) {
  require(a > 0.0, ErrorCode::InvalidArgument, "a must be positive");
  const int n = f.dim();
  const double shift = std::log(f.amplitude() / a);
  switch (f.kind()) {
    case LogConcaveFn::Kind::Indicator: return l1_norm(f) * shift;
    case LogConcaveFn::Kind::ExpGauge: return l1_norm(f) * (shift - n);
    case LogConcaveFn::Kind::Gaussian: return l1_norm(f) * (shift - 0.5 * n);
    case LogConcaveFn::Kind::Radial: return l1_norm(f) * (shift - n / f.as<Radial>().p);
    case LogConcaveFn::Kind::HalfGaussian:
      require(!f.as<HalfGaussian>().polar, ErrorCode::NonFiniteIntegrand, "the polar half-Gaussian is not integrable");
      return std::sqrt(kPi / 2) * (shift - 0.5);
    case LogConcaveFn::Kind::Zero: return 0.0;
    case LogConcaveFn::Kind::GridPotential: break;
  }
  return box_integrate(
             [&](const Vec& x) {
               const double v = eval(f, x);
               return v > 0.0 ? v * std::log(v / a) : 0.0;
             },
             effective_box(f), spec)
      .value;
}

VerificationReport check_theorem_polar(const LogConcaveFn& f, const IntegrationSpec& spec, const std::string& subject) {
  const int n = f.dim();
  const PettySupport h(f, spec);
  const double lhs = std::pow(h.grad_l1(), n) * polar_projection_integral(h);
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  const double rhs = wn * int_factorial(n) * std::pow(n * wn / wn1, n);
  return make_report("polar-projection-inequality", subject_or(subject, to_string(f.kind())), lhs, rhs,
                     Direction::GreaterEqual, 1e-3, 0.0, radial_function(f), 1e-2);
}

VerificationReport check_corollary_surface(const ConvexBody& body, const IntegrationSpec& spec,
                                           const std::string& subject) {
  const int n = body.dim();
  double r = 0.0;
  const ConvexBody k = ball_radius(body, r) ? body : polytope_form(body);
  const double lhs = std::pow(total_surface_area(k), n) * polar_volume(projection_body(k), fine_rule_for(n, spec));
  const double wn = unit_ball_volume(n), wn1 = unit_ball_volume(n - 1);
  const double rhs = wn * std::pow(n * wn / wn1, n);
  return make_report("surface-polar-projection", subject_or(subject, to_string(body.kind())), lhs, rhs,
                     Direction::GreaterEqual, 1e-3, 0.0, is_ball(body), 1e-3);
}

double petty_zhang_middle(const ConvexBody& body, const IntegrationSpec& spec) {
  const int n = body.dim();
  double r = 0.0;
  const ConvexBody k = ball_radius(body, r) ? body : polytope_form(body);
  return std::pow(volume(k), n - 1) * polar_volume(projection_body(k), fine_rule_for(n, spec));
}

std::vector<VerificationReport> check_petty_zhang(const ConvexBody& body, const IntegrationSpec& spec,
                                                  const std::string& subject) {
  const int n = body.dim();
  const std::string s = subject_or(subject, to_string(body.kind()));
  const double middle = petty_zhang_middle(body, spec);
  const double lower = binomial(2 * n, n) / std::pow(n, n);
  const double upper = std::pow(unit_ball_volume(n) / unit_ball_volume(n - 1), n);
  return {make_report("petty-zhang-lower", s, middle, lower, Direction::GreaterEqual, 1e-3, 0.0, is_simplex(body),
                      1e-3),
          make_report("petty-zhang-upper", s, middle, upper, Direction::LessEqual, 1e-3, 0.0, is_ball(body), 1e-3)};
}

std::vector<VerificationReport> check_functional_petty_zhang(const LogConcaveFn& f, const IntegrationSpec& spec,
                                                             const std::string& subject) {
  const int n = f.dim();
  const std::string s = subject_or(subject, to_string(f.kind()));
  const double middle = petty_body_polar_volume(PettySupport(f, spec));

  const Estimate pairs = min_double_integral(f, spec);
  const double l1 = l1_norm(f, spec);
  const double lower = std::pow(2.0, -n) / int_factorial(n) * std::pow(l1, -n - 1) * pairs.value;
  const double norm = n == 1 ? sup_norm(f) : lp_norm(f, n / (n - 1.0), spec);
  const double upper = std::pow(unit_ball_volume(n) / (2 * unit_ball_volume(n - 1)), n) * std::pow(norm, -n);

  double r = 0.0;
  const bool ball = f.kind() == LogConcaveFn::Kind::Indicator && ball_radius(f.as<Indicator>().body, r);
  const bool simplex_gauge = f.kind() == LogConcaveFn::Kind::ExpGauge && is_simplex(f.as<ExpGauge>().body);
  const double rel_error = pairs.error / pairs.value;
  VerificationReport lo = make_report("functional-petty-zhang-lower", s, middle, lower, Direction::GreaterEqual,
                                      std::max(1e-3, 3 * rel_error), rel_error, simplex_gauge, 2e-2);
  lo.detail = "double integral " + std::to_string(pairs.value) + " ± " + std::to_string(pairs.error) + " (" +
              to_string(spec.method) + ")";
  return {lo, make_report("functional-petty-zhang-upper", s, middle, upper, Direction::LessEqual, 1e-3, 0.0, ball,
                          1e-3)};
}

VerificationReport check_integral_volume(const LogConcaveFn& f, const IntegrationSpec& spec,
                                              const std::string& subject) {
  const int n = f.dim();
  const PettySupport h(f, spec);
  const double lhs = polar_projection_integral(h);
  const double rhs = std::pow(2.0, n) * int_factorial(n) * petty_body_polar_volume(h);
  return make_report("petty-body-integral-identity", subject_or(subject, to_string(f.kind())), lhs, rhs,
                     Direction::Equal, 1e-6);
}

std::vector<VerificationReport> check_body_identities(const ConvexBody& body, const IntegrationSpec& spec,
                                                        const std::string& subject) {
  const int n = body.dim();
  const std::string s = subject_or(subject, to_string(body.kind()));
  constexpr int kPoints = 200;
  const bool centred = origin_inradius(body) > 1e-12;
  double radius = 0.0;
  const bool ball = ball_radius(body, radius);
  const ConvexBody k = ball ? body : polytope_form(body);
  std::vector<VerificationReport> out;

  {
    const LogConcaveFn chi = LogConcaveFn::indicator(k);
    CounterRng rng(spec.seed, 1);
    Comparison c;
    for (int i = 0; i < kPoints; ++i) {
      const Vec y = rng.normal_vector(n);
      double right = -kInf;
      if (ball) {
        right = radius * y.norm();
      } else {
        for (const Vec& v : k.vertices()) right = std::max(right, v.dot(y));
      }
      compare(c, support_function(chi, y), right);
    }
    out.push_back(pointwise_report("indicator-support", s, c, 1e-12, kPoints));
  }

  if (centred) {
    const double reach = 8.0 * vertex_max_norm(k);
    const Box box(Vec::Constant(n, -reach), Vec::Constant(n, reach));
    const GridFn phi = GridFn::sample(box, std::vector<int>(n, conjugate_grid_points(n)),
                                      [&](const Vec& x) { return gauge(k, x); });
    out.push_back(classification_report("gauge-conjugate", s, phi, 2.0 / origin_inradius(k),
                                        [&](const Vec& y) { return support(k, y); }, spec.seed, 2));
  } else {
    out.push_back(skipped_report("gauge-conjugate", s, "0 is not an interior point of K"));
  }

  const PettySupport chi_support(LogConcaveFn::indicator(k), spec);
  {
    CounterRng rng(spec.seed, 3);
    Comparison c;
    for (int i = 0; i < kPoints; ++i) {
      const Vec u = rng.unit_vector(n);
      compare(c, chi_support(u), shadow_volume(k, u));
    }
    out.push_back(pointwise_report("indicator-petty-support", s, c, 1e-9, kPoints));
  }

  {
    double reach = 0.0;
    for (int d = 0; d < n; ++d) reach = std::max(reach, chi_support(Vec::Unit(n, d)));
    const ConvexBody pk = projection_body(k);
    const ConvexBody pk_poly = is_ball(pk) ? pk : polytope_form(pk);
    const double inner = origin_inradius(pk_poly);
    const Box box(Vec::Constant(n, -4.0 / inner), Vec::Constant(n, 4.0 / inner));
    const GridFn h = GridFn::sample(box, std::vector<int>(n, conjugate_grid_points(n)),
                                    [&](const Vec& u) { return chi_support(u); });
    out.push_back(classification_report("indicator-petty-function", s, h, 2.0 * reach * std::sqrt(n),
                                        [&](const Vec& x) { return gauge(pk_poly, x); }, spec.seed, 4));
  }

  if (centred) {
    CounterRng rng(spec.seed, 5);
    Comparison c;
    for (int i = 0; i < kPoints; ++i) {
      const Vec z = rng.normal_vector(n);
      compare(c, polar_projection_eval(chi_support, z), std::exp(-z.norm() * shadow_volume(k, z / z.norm())));
    }
    out.push_back(pointwise_report("indicator-petty-polar", s, c, 1e-9, kPoints));
  } else {
    out.push_back(skipped_report("indicator-petty-polar", s, "0 is not an interior point of K"));
  }

  if (!centred) {
    for (const char* name : {"gauge-petty-support", "gauge-integral", "gauge-petty-integral-ratio"})
      out.push_back(skipped_report(name, s, "0 is not an interior point of K"));
    return out;
  }

  const LogConcaveFn eg = LogConcaveFn::exp_gauge(k);
  const PettySupport eg_direct(eg, spec, PettyRoute::Direct);
  const double gn = int_factorial(n - 1);
  {
    const ConvexBody pk = projection_body(k);
    CounterRng rng(spec.seed, 6);
    Comparison c;
    for (int i = 0; i < kPoints; ++i) {
      const Vec u = rng.unit_vector(n);
      compare(c, eg_direct(u), gn * support(pk, u));
    }
    out.push_back(pointwise_report("gauge-petty-support", s, c, 1e-3, kPoints));
  }

  {
    const SphereRule rule = fine_rule_for(n, spec);
    const Estimate g = sphere_integrate_estimate([&](const Vec& u) { return std::pow(gauge(k, u), -n); }, rule);
    VerificationReport r = make_report("gauge-integral", s, gn * g.value, int_factorial(n) * volume(k),
                                       Direction::Equal, 1e-3, gn * g.error / (int_factorial(n) * volume(k)));
    out.push_back(r);
  }

  {
    const double left = polar_projection_integral(eg_direct) / polar_projection_integral(chi_support);
    out.push_back(make_report("gauge-petty-integral-ratio", s, left, std::pow(gn, -n), Direction::Equal, 1e-3));
  }
  return out;
}

VerificationReport check_entropic_bound(const LogConcaveFn& f, double a, const IntegrationSpec& spec,
                                        const std::string& subject) {
  const std::string name = "entropic-gradient-bound";
  const std::string s = subject_or(subject, to_string(f.kind()));
  const int n = f.dim();
  require(a > 0.0, ErrorCode::InvalidArgument, "a must be positive");
  CounterRng rng(spec.seed, 7);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = rng.unit_vector(n) * std::pow(rng.next_uniform(), 1.0 / n);
    if (eval(f, x) < a * (1 - 1e-12)) return skipped_report(name, s, "a·χ_B <= f fails at a sampled point of B");
  }
  const double lhs = grad_l1(f, spec);
  const double rhs = n * l1_norm(f, spec) + entropy_integral(f, a, spec);
  double r = 0.0;
  const bool equality = f.kind() == LogConcaveFn::Kind::Indicator && ball_radius(f.as<Indicator>().body, r) &&
                        std::abs(r - 1.0) <= 1e-12 && std::abs(f.amplitude() - a) <= 1e-12 * a;
  return make_report(name, s, lhs, rhs, Direction::LessEqual, 1e-3, 0.0, equality, 1e-3);
}

std::vector<VerificationReport> check_integrability(const LogConcaveFn& f, const IntegrationSpec& spec,
                                                    const std::string& subject) {
  const std::string s = subject_or(subject, to_string(f.kind()));
  const bool interior = origin_interior_to_support(f);
  std::vector<VerificationReport> out;
  std::optional<LogConcaveFn> g;
  try {
    g = polar(f);
  } catch (const Error& e) {
    out.push_back(skipped_report("polar-integrability", s, std::string("polar not representable: ") + e.what()));
    return out;
  }
  const IntegrabilityVerdict v = is_integrable(*g);
  const Integrability expected = interior ? Integrability::Integrable : Integrability::NotIntegrable;
  VerificationReport r = make_report("polar-integrability", s, v.status == expected ? 1.0 : 0.0, 1.0,
                                     Direction::Equal, 0.0);
  r.detail = std::string("verdict ") + to_string(v.status) + ", expected " + to_string(expected);
  if (v.witness) {
    r.detail += ", witness direction (";
    for (int d = 0; d < v.witness->direction.size(); ++d)
      r.detail += (d ? ", " : "") + std::to_string(v.witness->direction[d]);
    r.detail += ")";
  }
  if (!v.reason.empty()) r.detail += "; " + v.reason;
  out.push_back(r);

  if (v.status == Integrability::Integrable) {
    const DoublingCheck d = box_doubling(*g, spec);
    VerificationReport dr =
        make_report("polar-box-doubling", s, d.doubled, d.value, Direction::Equal, 1e-6, d.relative_change);
    dr.detail = "relative change " + std::to_string(d.relative_change);
    out.push_back(dr);
  }
  out.push_back(polar_integrability_theorem_check(f, s));
  return out;
}

FalsifyTable falsify_log_bound(std::span<const double> log_t, int n, double threshold) {
  require(n >= 2, ErrorCode::InvalidArgument, "the falsification needs n >= 2");
  require(!log_t.empty(), ErrorCode::InvalidArgument, "need at least one t");
  FalsifyTable table;
  table.dim = n;
  table.threshold = threshold;
  for (double lt : log_t) {
    require(std::isfinite(lt), ErrorCode::InvalidArgument, "t must be positive and finite");
    FalsifyRow row;
    row.log_t = lt;
    row.t = std::exp(lt);
    row.quantity = std::pow(1.0 - lt, n - 1);
    row.exceeds = row.quantity > threshold;
    table.exceeded = table.exceeded || row.exceeds;
    table.rows.push_back(row);
  }
  std::vector<FalsifyRow> sorted = table.rows;
  std::sort(sorted.begin(), sorted.end(), [](const FalsifyRow& a, const FalsifyRow& b) { return a.log_t > b.log_t; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    table.monotone = table.monotone && sorted[i].log_t < sorted[i - 1].log_t && sorted[i].quantity > sorted[i - 1].quantity;
  return table;
}

VerificationReport falsification_report(const FalsifyTable& table) {
  double worst = 0.0;
  for (const FalsifyRow& r : table.rows) worst = std::max(worst, r.quantity);
  const std::string s = "χ_{tB}, n=" + std::to_string(table.dim);
  VerificationReport r = make_report("falsification-unbounded", s, worst, table.threshold, Direction::GreaterEqual, 0.0);
  r.detail = table.monotone ? "monotone as t decreases" : "not monotone as t decreases";
  if (!r.pass || !table.monotone || !(worst > table.threshold)) {
    r.pass = false;
    r.status = Status::Failed;
  }
  return r;
}

}  // namespace pettyfn
