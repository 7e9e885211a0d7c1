#include "pettyfn/logconcave.hpp"

#include <algorithm>

namespace pettyfn {
namespace {

const double kDecay = std::log(1e12);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_amplitude(double a) {
  require(std::isfinite(a) && a > 0.0, ErrorCode::InvalidArgument, "amplitude must be positive and finite");
}

ConvexBody gauge_friendly(const ConvexBody& body) {
  // Zonotope gauges would rebuild the vertex form on every call.
  if (body.kind() == ConvexBody::Kind::Zonotope) return to_polytope(body);
  if (body.kind() == ConvexBody::Kind::Scaled && body.inner().kind() == ConvexBody::Kind::Zonotope)
    return to_polytope(body);
  return body;
}

std::vector<Vec> probe_directions(int n) {
  if (n == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  const SphereRule rule = n == 2 ? SphereRule::make(2, 64) : SphereRule::make(n, n == 3 ? 128 : 256);
  return rule.nodes;
}

}  // namespace

const char* to_string(LogConcaveFn::Kind kind) {
  switch (kind) {
    case LogConcaveFn::Kind::Indicator: return "indicator";
    case LogConcaveFn::Kind::ExpGauge: return "exp_gauge";
    case LogConcaveFn::Kind::Gaussian: return "gaussian";
    case LogConcaveFn::Kind::Radial: return "radial";
    case LogConcaveFn::Kind::GridPotential: return "grid_potential";
    case LogConcaveFn::Kind::HalfGaussian: return "half_gaussian";
    case LogConcaveFn::Kind::Zero: return "zero";
  }
  return "?";
}

const char* to_string(RayBehavior b) {
  switch (b) {
    case RayBehavior::ConstantPositive: return "constant-positive";
    case RayBehavior::NotConstant: return "not-constant";
    case RayBehavior::Zero: return "zero";
  }
  return "?";
}

const char* to_string(Integrability v) {
  switch (v) {
    case Integrability::Integrable: return "integrable";
    case Integrability::NotIntegrable: return "not-integrable";
    case Integrability::ZeroFunction: return "zero-function";
    case Integrability::Inconclusive: return "inconclusive";
  }
  return "?";
}

LogConcaveFn::LogConcaveFn(int dim, Rep rep, double amplitude)
    : dim_(dim), rep_(std::move(rep)), amplitude_(amplitude) {
  require_amplitude(amplitude);
}

LogConcaveFn LogConcaveFn::indicator(ConvexBody body, double amplitude) {
  const int n = body.dim();
  return LogConcaveFn(n, Indicator{std::move(body)}, amplitude);
}

LogConcaveFn LogConcaveFn::exp_gauge(ConvexBody body, double amplitude) {
  require(origin_inradius(body) > 0.0, ErrorCode::OriginNotInterior, "exponential gauge needs 0 in int K");
  const int n = body.dim();
  return LogConcaveFn(n, ExpGauge{gauge_friendly(body)}, amplitude);
}

LogConcaveFn LogConcaveFn::gaussian(int dim, double sigma, double amplitude) {
  require(dim >= 1 && sigma > 0.0, ErrorCode::InvalidArgument, "gaussian needs dim >= 1 and sigma > 0");
  return gaussian(Mat::Identity(dim, dim) * (sigma * sigma), amplitude);
}

LogConcaveFn LogConcaveFn::gaussian(Mat covariance, double amplitude) {
  const int n = static_cast<int>(covariance.rows());
  require(n >= 1 && covariance.cols() == n, ErrorCode::InvalidArgument, "covariance must be square");
  require((covariance - covariance.transpose()).norm() <= 1e-12 * std::max(1.0, covariance.norm()),
          ErrorCode::InvalidArgument, "covariance must be symmetric");
  Eigen::LLT<Mat> llt(covariance);
  require(llt.info() == Eigen::Success, ErrorCode::InvalidArgument, "covariance must be positive definite");
  Mat precision = llt.solve(Mat::Identity(n, n));
  precision = 0.5 * (precision + precision.transpose());
  return LogConcaveFn(n, Gaussian{std::move(covariance), std::move(precision)}, amplitude);
}

LogConcaveFn LogConcaveFn::radial(int dim, double p, double scale, double amplitude) {
  require(dim >= 1 && p >= 1.0 && scale > 0.0, ErrorCode::InvalidArgument, "radial profile needs p >= 1, s > 0");
  return LogConcaveFn(dim, Radial{dim, p, scale}, amplitude);
}

LogConcaveFn LogConcaveFn::grid(GridFn phi, double amplitude) {
  phi.validate();
  require_convex(phi);
  const int n = phi.dim();
  return LogConcaveFn(n, GridPotential{std::move(phi)}, amplitude);
}

LogConcaveFn LogConcaveFn::half_gaussian(bool polar) { return LogConcaveFn(1, HalfGaussian{polar}, 1.0); }

LogConcaveFn LogConcaveFn::zero(int dim) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  return LogConcaveFn(dim, Zero{dim}, 1.0);
}

LogConcaveFn LogConcaveFn::with_amplitude(double a) const {
  LogConcaveFn g = *this;
  require_amplitude(a);
  g.amplitude_ = a;
  return g;
}

double potential(const LogConcaveFn& f, const Vec& x) {
  return std::visit(overloaded{
                        [&](const Indicator& r) { return contains(r.body, x) ? 0.0 : kInf; },
                        [&](const ExpGauge& r) { return gauge(r.body, x); },
                        [&](const Gaussian& r) { return 0.5 * x.dot(r.precision * x); },
                        [&](const Radial& r) { return std::pow(x.norm() / r.scale, r.p) / r.p; },
                        [&](const GridPotential& r) { return interpolate(r.phi, x); },
                        [&](const HalfGaussian& r) {
                          if (x[0] >= 0.0) return 0.5 * x[0] * x[0];
                          return r.polar ? 0.0 : kInf;
                        },
                        [&](const Zero&) { return kInf; },
                    },
                    f.rep());
}

double eval(const LogConcaveFn& f, const Vec& x) { return f.amplitude() * std::exp(-potential(f, x)); }

Vec gradient(const LogConcaveFn& f, const Vec& x) {
  const int n = f.dim();
  const double fx = eval(f, x);
  return std::visit(overloaded{
                        [&](const Indicator&) -> Vec { return Vec::Zero(n); },
                        [&](const ExpGauge& r) -> Vec { return -fx * gauge_gradient(r.body, x); },
                        [&](const Gaussian& r) -> Vec { return -fx * (r.precision * x); },
                        [&](const Radial& r) -> Vec {
                          const double t = x.norm();
                          require(t > 0.0, ErrorCode::NonDifferentiablePoint, "radial profile at the origin");
                          return -fx * std::pow(t / r.scale, r.p - 1.0) / r.scale * (x / t);
                        },
                        [&](const GridPotential& r) -> Vec {
                          Vec g(n);
                          for (int d = 0; d < n; ++d) {
                            const double h = r.phi.step(d);
                            Vec a = x, b = x;
                            a[d] += h;
                            b[d] -= h;
                            const double pa = interpolate(r.phi, a), pb = interpolate(r.phi, b);
                            require(std::isfinite(pa) && std::isfinite(pb), ErrorCode::NonDifferentiablePoint,
                                    "finite difference leaves the effective domain");
                            g[d] = (pa - pb) / (2 * h);
                          }
                          return -fx * g;
                        },
                        [&](const HalfGaussian& r) -> Vec {
                          require(x[0] != 0.0 || r.polar, ErrorCode::NonDifferentiablePoint,
                                  "half-Gaussian jumps at 0");
                          return Vec::Constant(1, x[0] > 0.0 ? -x[0] * fx : 0.0);
                        },
                        [&](const Zero&) -> Vec { return Vec::Zero(n); },
                    },
                    f.rep());
}

double support_function(const LogConcaveFn& f, const Vec& y) {
  const double shift = std::log(f.amplitude());
  const double h = std::visit(
      overloaded{
          [&](const Indicator& r) { return support(r.body, y); },
          [&](const ExpGauge& r) { return support(r.body, y) <= 1.0 + 1e-12 ? 0.0 : kInf; },
          [&](const Gaussian& r) { return 0.5 * y.dot(r.covariance * y); },
          [&](const Radial& r) {
            const double t = r.scale * y.norm();
            if (r.p == 1.0) return t <= 1.0 + 1e-12 ? 0.0 : kInf;
            const double q = r.p / (r.p - 1.0);
            return std::pow(t, q) / q;
          },
          [&](const GridPotential& r) {
            double best = -kInf;
            for (std::size_t k = 0; k < r.phi.size(); ++k)
              if (std::isfinite(r.phi.values[k])) best = std::max(best, r.phi.point(k).dot(y) - r.phi.values[k]);
            return best;
          },
          [&](const HalfGaussian& r) {
            if (y[0] >= 0.0) return 0.5 * y[0] * y[0];
            return r.polar ? kInf : 0.0;
          },
          [&](const Zero&) { return -kInf; },
      },
      f.rep());
  return h + shift;
}

LogConcaveFn polar(const LogConcaveFn& f) {
  const double inv = 1.0 / f.amplitude();
  return std::visit(
      overloaded{
          [&](const Indicator& r) {
            if (origin_inradius(r.body) <= 1e-12)
              fail(ErrorCode::PolarNotRepresentable, "0 is not interior to K: e^{-h_K} is not an exponential gauge");
            return LogConcaveFn::exp_gauge(polar_body(r.body), inv);
          },
          [&](const ExpGauge& r) { return LogConcaveFn::indicator(polar_body(r.body), inv); },
          [&](const Gaussian& r) { return LogConcaveFn::gaussian(r.precision, inv); },
          [&](const Radial& r) {
            if (r.p == 1.0) return LogConcaveFn::indicator(ConvexBody::ball(r.dim, 1.0 / r.scale), inv);
            return LogConcaveFn::radial(r.dim, r.p / (r.p - 1.0), 1.0 / r.scale, inv);
          },
          [&](const GridPotential& r) {
            std::vector<int> shape = r.phi.shape;
            Conjugate c = conjugate_nd(r.phi, slope_box(r.phi), shape);
            return LogConcaveFn::grid(std::move(c.fn), inv);
          },
          [&](const HalfGaussian& r) { return LogConcaveFn::half_gaussian(!r.polar); },
          [&](const Zero&) -> LogConcaveFn {
            fail(ErrorCode::PolarNotRepresentable, "the polar of the zero function is +inf");
          },
      },
      f.rep());
}

LogConcaveFn polar_on_grid(const LogConcaveFn& f, const Box& box, const std::vector<int>& shape) {
  GridFn g = GridFn::sample(box, shape, [&](const Vec& y) { return support_function(f, y); });
  for (double v : g.values)
    require(v != -kInf, ErrorCode::PolarNotRepresentable, "support function is -inf");
  return LogConcaveFn::grid(std::move(g));
}

double sup_norm(const LogConcaveFn& f) {
  switch (f.kind()) {
    case LogConcaveFn::Kind::GridPotential: {
      const auto& v = f.as<GridPotential>().phi.values;
      return f.amplitude() * std::exp(-*std::min_element(v.begin(), v.end()));
    }
    case LogConcaveFn::Kind::Zero: return 0.0;
    default: return f.amplitude();
  }
}

Box effective_box(const LogConcaveFn& f) {
  const int n = f.dim();
  return std::visit(overloaded{
                        [&](const Indicator& r) { return bounding_box(r.body); },
                        [&](const ExpGauge& r) {
                          const Box b = bounding_box(r.body);
                          return Box{b.lo * kDecay, b.hi * kDecay};
                        },
                        [&](const Gaussian& r) {
                          const Vec w = (2.0 * kDecay * r.covariance.diagonal().array()).sqrt();
                          return Box{-w, w};
                        },
                        [&](const Radial& r) {
                          const double w = r.scale * std::pow(r.p * kDecay, 1.0 / r.p);
                          return Box{Vec::Constant(n, -w), Vec::Constant(n, w)};
                        },
                        [&](const GridPotential& r) { return r.phi.box; },
                        [&](const HalfGaussian& r) {
                          require(!r.polar, ErrorCode::InvalidArgument, "the polar half-Gaussian is not integrable");
                          return Box{Vec::Zero(1), Vec::Constant(1, std::sqrt(2.0 * kDecay))};
                        },
                        [&](const Zero&) -> Box {
                          fail(ErrorCode::InvalidArgument, "the zero function has empty support");
                        },
                    },
                    f.rep());
}

double power_integral(const LogConcaveFn& f, double q, const IntegrationSpec& spec) {
  require(q > 0.0, ErrorCode::InvalidArgument, "exponent must be positive");
  const int n = f.dim();
  const double aq = std::pow(f.amplitude(), q);
  return std::visit(
      overloaded{
          [&](const Indicator& r) { return aq * volume(r.body); },
          [&](const ExpGauge& r) { return aq * int_factorial(n) * volume(r.body) * std::pow(q, -n); },
          [&](const Gaussian& r) {
            return aq * std::pow(2.0 * kPi / q, 0.5 * n) * std::sqrt(r.covariance.determinant());
          },
          [&](const Radial& r) {
            const double s = r.scale * std::pow(q, -1.0 / r.p);
            return aq * unit_sphere_area(n) * std::pow(s, n) * std::pow(r.p, n / r.p - 1.0) *
                   std::exp(std::lgamma(n / r.p));
          },
          [&](const GridPotential& r) {
            return box_integrate([&](const Vec& x) { return std::pow(eval(f, x), q); }, r.phi.box, spec).value;
          },
          [&](const HalfGaussian& r) { return r.polar ? kInf : 0.5 * std::sqrt(2.0 * kPi / q); },
          [&](const Zero&) { return 0.0; },
      },
      f.rep());
}

double lp_norm(const LogConcaveFn& f, double q, const IntegrationSpec& spec) {
  return std::pow(power_integral(f, q, spec), 1.0 / q);
}

bool origin_interior_to_support(const LogConcaveFn& f) {
  const int n = f.dim();
  switch (f.kind()) {
    case LogConcaveFn::Kind::Indicator: return origin_inradius(f.as<Indicator>().body) > 1e-12;
    case LogConcaveFn::Kind::HalfGaussian: return f.as<HalfGaussian>().polar;
    case LogConcaveFn::Kind::Zero: return false;
    case LogConcaveFn::Kind::GridPotential: {
      const GridFn& phi = f.as<GridPotential>().phi;
      for (int d = 0; d < n; ++d)
        for (double s : {-1.0, 1.0}) {
          Vec x = Vec::Zero(n);
          x[d] = s * phi.step(d);
          if (!std::isfinite(interpolate(phi, x))) return false;
        }
      return std::isfinite(interpolate(phi, Vec::Zero(n)));
    }
    default: return true;
  }
}

RayResult constant_on_ray(const LogConcaveFn& f, const RaySpec& ray, int probes) {
  require(probes >= 2, ErrorCode::InvalidArgument, "need at least two probes");
  require(std::abs(ray.direction.norm() - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "ray direction must be unit");
  RayResult result;
  double t_lo = std::ldexp(1.0, -10), t_hi = std::ldexp(1.0, 40);
  if (f.kind() == LogConcaveFn::Kind::GridPotential) {
    result.inconclusive_beyond_box = true;
    const Box& box = f.as<GridPotential>().phi.box;
    double exit = kInf;
    for (int d = 0; d < f.dim(); ++d) {
      const double u = ray.direction[d];
      if (u > 0) exit = std::min(exit, (box.hi[d] - ray.origin[d]) / u);
      if (u < 0) exit = std::min(exit, (box.lo[d] - ray.origin[d]) / u);
    }
    if (!(exit > 0.0)) {
      result.behavior = eval(f, ray.origin) > 0.0 ? RayBehavior::NotConstant : RayBehavior::Zero;
      return result;
    }
    t_hi = exit * (1.0 - 1e-12);
    t_lo = t_hi * 1e-3;
  }
  std::vector<double> values{eval(f, ray.origin)};
  for (int k = 0; k < probes - 1; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (probes - 2));
    values.push_back(eval(f, ray.origin + t * ray.direction));
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi == 0.0) {
    result.behavior = RayBehavior::Zero;
  } else if (*hi - *lo <= 1e-12 * *hi) {
    result.behavior = RayBehavior::ConstantPositive;
    result.value = values.front();
  }
  return result;
}

IntegrabilityVerdict is_integrable(const LogConcaveFn& f) {
  const int n = f.dim();
  IntegrabilityVerdict v;
  switch (f.kind()) {
    case LogConcaveFn::Kind::Zero:
      v.status = Integrability::ZeroFunction;
      v.reason = "f vanishes identically";
      return v;
    case LogConcaveFn::Kind::Indicator:
      v.status = Integrability::Integrable;
      v.reason = "bounded support: every ray leaves K";
      return v;
    case LogConcaveFn::Kind::ExpGauge:
      v.status = Integrability::Integrable;
      v.reason = "the gauge grows linearly along every ray";
      return v;
    case LogConcaveFn::Kind::Gaussian:
    case LogConcaveFn::Kind::Radial:
      v.status = Integrability::Integrable;
      v.reason = "the potential is coercive along every ray";
      return v;
    case LogConcaveFn::Kind::HalfGaussian: {
      if (!f.as<HalfGaussian>().polar) {
        v.status = Integrability::Integrable;
        v.reason = "Gaussian decay on x >= 0, zero on x < 0";
        return v;
      }
      const RaySpec ray{Vec::Constant(1, -1.0), Vec::Constant(1, -1.0)};
      const RayResult r = constant_on_ray(f, ray);
      if (r.behavior == RayBehavior::ConstantPositive) {
        v.status = Integrability::NotIntegrable;
        v.witness = ray;
        v.reason = "f = " + std::to_string(r.value) + " on the ray";
      } else {
        v.status = Integrability::Inconclusive;
        v.reason = "expected witness ray was not constant";
      }
      return v;
    }
    case LogConcaveFn::Kind::GridPotential: break;
  }

  const GridFn& phi = f.as<GridPotential>().phi;
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(phi.values.begin(), phi.values.end()) - phi.values.begin());
  const Vec x0 = phi.point(best);
  // Grid recession directions are typically axis or diagonal aligned.
  std::vector<Vec> dirs = probe_directions(n);
  for (int a = 0; a < n; ++a) {
    for (double s : {-1.0, 1.0}) {
      Vec e = Vec::Zero(n);
      e[a] = s;
      dirs.push_back(e);
      for (int b = a + 1; b < n; ++b)
        for (double t : {-1.0, 1.0}) {
          Vec d = e;
          d[b] = t;
          dirs.push_back(d.normalized());
        }
    }
  }
  bool all_rising = true;
  for (const Vec& u : dirs) {
    const RaySpec ray{x0, u};
    const RayResult r = constant_on_ray(f, ray);
    if (r.behavior == RayBehavior::ConstantPositive) {
      v.status = Integrability::Inconclusive;
      v.witness = ray;
      v.reason = "f is constant along a ray inside the box; behaviour beyond the box is unknown";
      return v;
    }
    double exit = kInf;
    for (int d = 0; d < n; ++d) {
      if (u[d] > 0) exit = std::min(exit, (phi.box.hi[d] - x0[d]) / u[d]);
      if (u[d] < 0) exit = std::min(exit, (phi.box.lo[d] - x0[d]) / u[d]);
    }
    if (!(exit > 0.0)) continue;
    const double last = interpolate(phi, x0 + exit * (1.0 - 1e-12) * u);
    const double prev = interpolate(phi, x0 + exit * 0.9 * u);
    if (!(last > prev + 1e-12) && std::isfinite(last)) all_rising = false;
  }
  if (all_rising) {
    v.status = Integrability::Integrable;
    v.reason = "φ rises at the box boundary along every probed ray, so its convex continuation grows linearly";
  } else {
    v.status = Integrability::Inconclusive;
    v.reason = "φ is flat at the box boundary along some ray; behaviour beyond the box is unknown";
  }
  return v;
}

DoublingCheck box_doubling(const LogConcaveFn& f, const IntegrationSpec& spec) {
  const Box box = effective_box(f);
  int cells = spec.resolution_for(f.dim());
  cells += cells % 2;
  auto fn = [&](const Vec& x) { return eval(f, x); };
  DoublingCheck c;
  c.value = midpoint_rule(fn, box, cells);
  c.doubled = midpoint_rule(fn, box.scaled(2.0), 2 * cells);
  c.relative_change = relative_error(c.doubled, c.value);
  return c;
}

VerificationReport polar_integrability_theorem_check(const LogConcaveFn& f, const std::string& subject) {
  const std::string name = "polar-integrable";
  const int n = f.dim();
  if (!origin_interior_to_support(f)) return skipped_report(name, subject, "0 is not an interior point of supp f");

  LogConcaveFn g = f;
  try {
    g = polar(f);
  } catch (const Error& e) {
    return skipped_report(name, subject, std::string("polar not representable: ") + e.what());
  }
  const IntegrabilityVerdict verdict = is_integrable(g);

  // A ball B(0, δ) inside supp f on which φ - log a <= C.
  double delta = 1.0;
  if (f.kind() == LogConcaveFn::Kind::Indicator) delta = 0.5 * origin_inradius(f.as<Indicator>().body);
  if (f.kind() == LogConcaveFn::Kind::GridPotential) {
    const Box& b = f.as<GridPotential>().phi.box;
    delta = 0.5 * std::min((-b.lo).minCoeff(), b.hi.minCoeff());
  }
  const std::vector<Vec> dirs = probe_directions(n);
  const double shift = std::log(f.amplitude());
  double c = -kInf;
  for (int attempt = 0; attempt < 20; ++attempt) {
    c = -kInf;
    for (const Vec& u : dirs) c = std::max(c, potential(f, delta * u) - shift);
    if (std::isfinite(c)) break;
    delta *= 0.5;
  }
  if (!std::isfinite(c)) return skipped_report(name, subject, "no ball around 0 with a bounded potential found");
  double delta_eff = delta;
  if (f.kind() == LogConcaveFn::Kind::GridPotential) {
    // The discrete sup only sees nodes: every point of the δ-sphere has a node
    // within one cell diagonal.
    const GridFn& phi = f.as<GridPotential>().phi;
    double diag = 0.0;
    for (int a = 0; a < n; ++a) diag += phi.step(a) * phi.step(a);
    diag = std::sqrt(diag);
    for (std::size_t i = 0; i < phi.size(); ++i)
      if (phi.point(i).norm() <= delta + diag) c = std::max(c, phi.values[i] - shift);
    delta_eff = delta - diag;
    if (!(delta_eff > 0.0) || !std::isfinite(c))
      return skipped_report(name, subject, "grid too coarse around 0");
  }

  double worst = kInf;
  std::size_t finite = 0;
  const std::vector<Vec> bases{Vec::Zero(n), 0.5 * dirs[dirs.size() / 3]};
  for (const Vec& y0 : bases)
    for (const Vec& u : dirs)
      for (int k = -4; k <= 20; ++k) {
        const Vec y = y0 + std::ldexp(1.0, k) * u;
        const double h = support_function(f, y);
        if (!std::isfinite(h) || y.norm() == 0.0) continue;
        ++finite;
        worst = std::min(worst, (h + c) / (delta_eff * y.norm()));
      }
  if (finite == 0) worst = kInf;

  VerificationReport r = make_report(name, subject, std::isfinite(worst) ? worst : 1.0, 1.0,
                                     Direction::GreaterEqual, 1e-9);
  r.detail = std::string("polar verdict ") + to_string(verdict.status) + "; delta " + std::to_string(delta) +
             ", C " + std::to_string(c) + ", " + std::to_string(finite) + " finite ray samples";
  if (verdict.status != Integrability::Integrable) {
    r.pass = false;
    r.status = Status::Failed;
  }
  return r;
}

}  // namespace pettyfn
