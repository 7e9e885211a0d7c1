#include "pettyfn/petty.hpp"

#include <algorithm>

namespace pettyfn {
namespace {

SphereRule evaluation_rule(int n, const IntegrationSpec& spec) { return SphereRule::make(n, spec.sphere_nodes, spec.seed); }

// Rule for closed-form direction integrals; the atom count drives the O(N·M)
// evaluation cost, so high dimensions get a smaller rule.
SphereRule atom_rule(int n, const IntegrationSpec& spec) {
  if (n <= 3) return evaluation_rule(n, spec);
  return SphereRule::make(n, 20000, spec.seed + 1);
}

// Dense rule for per-cone masses of polytope gauges.
SphereRule cone_rule(int n, const IntegrationSpec& spec) {
  switch (n) {
    case 1: return SphereRule::points();
    case 2: return SphereRule::make(2, 1 << 17, spec.seed);
    case 3: return SphereRule::make(3, 1 << 19, spec.seed);
    default: return SphereRule::make(n, 400000, spec.seed);
  }
}

bool ball_like(const ConvexBody& body, double& radius) {
  if (body.kind() == ConvexBody::Kind::Ball) {
    radius = body.radius();
    return true;
  }
  if (body.kind() == ConvexBody::Kind::Scaled && ball_like(body.inner(), radius)) {
    radius *= body.factor();
    return true;
  }
  return false;
}

ConvexBody polytope_form(const ConvexBody& body) {
  return body.kind() == ConvexBody::Kind::Polytope ? body : to_polytope(body);
}

GradientAtoms indicator_atoms(const ConvexBody& body, double a, const IntegrationSpec& spec) {
  const int n = body.dim();
  GradientAtoms g{n, {}};
  double r = 0.0;
  if (ball_like(body, r)) {
    const SphereRule rule = atom_rule(n, spec);
    for (std::size_t j = 0; j < rule.size(); ++j)
      g.atoms.push_back(a * std::pow(r, n - 1) * rule.weights[j] * rule.nodes[j]);
    return g;
  }
  for (const auto& atom : surface_area_measure(polytope_form(body)).atoms) g.atoms.push_back(a * atom.weight * atom.normal);
  return g;
}

GradientAtoms exp_gauge_atoms(const ConvexBody& body, double a, const IntegrationSpec& spec) {
  const int n = body.dim();
  const double gamma_n = int_factorial(n - 1);
  GradientAtoms g{n, {}};
  double r = 0.0;
  if (ball_like(body, r)) {
    // ∫_0^∞ e^{-t/r} t^{n-1} dt · ∇‖v‖ = Γ(n) r^n · v / r.
    const SphereRule rule = atom_rule(n, spec);
    for (std::size_t j = 0; j < rule.size(); ++j)
      g.atoms.push_back(a * gamma_n * std::pow(r, n - 1) * rule.weights[j] * rule.nodes[j]);
    return g;
  }
  // ∇‖·‖_K is constant on each facet cone, so node contributions aggregate
  // exactly per cone: mass_i = Γ(n) Σ_{v ∈ C_i} w_v ‖v‖_K^{-n}.
  const ConvexBody p = polytope_form(body);
  const auto& facets = p.facets().facets;
  const SphereRule rule = cone_rule(n, spec);
  std::vector<std::vector<double>> mass(facets.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const Vec& v = rule.nodes[j];
    int best = 0;
    double gv = -kInf;
    for (int i = 0; i < static_cast<int>(facets.size()); ++i) {
      const double t = facets[i].normal.dot(v) / facets[i].offset;
      if (t > gv) gv = t, best = i;
    }
    mass[best].push_back(rule.weights[j] * std::pow(gv, -n));
  }
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const double m = gamma_n * pairwise_sum(mass[i]);
    if (m > 0.0) g.atoms.push_back(a * m / facets[i].offset * facets[i].normal);
  }
  return g;
}

GradientAtoms grid_atoms(const LogConcaveFn& f) {
  const GridFn& phi = f.as<GridPotential>().phi;
  const int n = phi.dim();
  // Values padded by one ring of zeros so the drop to 0 outside the box counts.
  std::vector<int> shape(n);
  for (int d = 0; d < n; ++d) shape[d] = phi.shape[d] + 2;
  std::vector<std::size_t> stride(n, 1);
  for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * shape[d + 1];
  std::size_t total = stride[0] * shape[0];
  std::vector<double> vals(total, 0.0);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const std::vector<int> idx = phi.unravel(k);
    std::size_t at = 0;
    for (int d = 0; d < n; ++d) at += (idx[d] + 1) * stride[d];
    vals[at] = f.amplitude() * std::exp(-phi.values[k]);
  }

  double cell = 1.0;
  Vec h(n);
  for (int d = 0; d < n; ++d) cell *= (h[d] = phi.step(d));

  GradientAtoms g{n, {}};
  double boundary = 0.0, interior = 0.0;
  std::vector<int> c(n, 0);
  const int corners = 1 << n;
  for (;;) {
    Vec grad = Vec::Zero(n);
    bool touches_pad = false;
    for (int d = 0; d < n; ++d) touches_pad = touches_pad || c[d] == 0 || c[d] == shape[d] - 2;
    for (int m = 0; m < corners; ++m) {
      std::size_t at = 0;
      for (int d = 0; d < n; ++d) at += (c[d] + ((m >> d) & 1)) * stride[d];
      const double v = vals[at];
      if (v == 0.0) continue;
      for (int d = 0; d < n; ++d) grad[d] += ((m >> d) & 1 ? v : -v) / (h[d] * (corners / 2));
    }
    if (grad.squaredNorm() > 0.0) {
      g.atoms.push_back(cell * grad);
      (touches_pad ? boundary : interior) += cell * grad.norm();
    }
    int d = n - 1;
    while (d >= 0 && ++c[d] == shape[d] - 1) c[d--] = 0;
    if (d < 0) break;
  }
  require(boundary <= 1e-3 * (boundary + interior), ErrorCode::NotIntegrableGradient,
          "f does not decay inside the grid box: the gradient integral is dominated by truncation");
  return g;
}

}  // namespace

double GradientAtoms::support(const Vec& u) const {
  std::vector<double> t(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) t[j] = std::abs(atoms[j].dot(u));
  return 0.5 * pairwise_sum(t);
}

double GradientAtoms::l1() const {
  std::vector<double> t(atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) t[j] = atoms[j].norm();
  return pairwise_sum(t);
}

GradientAtoms gradient_atoms(const LogConcaveFn& f, const IntegrationSpec& spec) {
  const int n = f.dim();
  const double a = f.amplitude();
  switch (f.kind()) {
    case LogConcaveFn::Kind::Indicator: return indicator_atoms(f.as<Indicator>().body, a, spec);
    case LogConcaveFn::Kind::ExpGauge: return exp_gauge_atoms(f.as<ExpGauge>().body, a, spec);
    case LogConcaveFn::Kind::Gaussian: {
      // ∫_0^∞ t^n e^{-q t²/2} dt = ½ (2/q)^{(n+1)/2} Γ((n+1)/2), q = vᵀ A⁻¹ v.
      const Mat& b = f.as<Gaussian>().precision;
      const SphereRule rule = atom_rule(n, spec);
      const double lg = std::lgamma(0.5 * (n + 1));
      GradientAtoms g{n, {}};
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const Vec bv = b * rule.nodes[j];
        const double q = rule.nodes[j].dot(bv);
        const double m = 0.5 * std::exp(0.5 * (n + 1) * std::log(2.0 / q) + lg);
        g.atoms.push_back(a * rule.weights[j] * m * bv);
      }
      return g;
    }
    case LogConcaveFn::Kind::Radial: {
      // ∫_0^∞ e^{-(t/s)^p/p} (t/s)^{p-1}/s t^{n-1} dt = s^{n-1} p^{(n-1)/p} Γ(1 + (n-1)/p).
      const Radial& r = f.as<Radial>();
      const double m = std::pow(r.scale, n - 1) * std::pow(r.p, (n - 1) / r.p) * std::exp(std::lgamma(1.0 + (n - 1) / r.p));
      const SphereRule rule = atom_rule(n, spec);
      GradientAtoms g{n, {}};
      for (std::size_t j = 0; j < rule.size(); ++j) g.atoms.push_back(a * rule.weights[j] * m * rule.nodes[j]);
      return g;
    }
    case LogConcaveFn::Kind::GridPotential: return grid_atoms(f);
    case LogConcaveFn::Kind::HalfGaussian:
      // Jump of +1 at 0 (base only) and ∫_0^∞ -x e^{-x²/2} dx = -1.
      if (f.as<HalfGaussian>().polar) return GradientAtoms{1, {Vec::Constant(1, -1.0)}};
      return GradientAtoms{1, {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)}};
    case LogConcaveFn::Kind::Zero: return GradientAtoms{n, {}};
  }
  return GradientAtoms{n, {}};
}

PettySupport::PettySupport(const LogConcaveFn& f, const IntegrationSpec& spec, PettyRoute route)
    : f_(f), rule_(evaluation_rule(f.dim(), spec)), route_(route) {
  const int n = f.dim();
  const double a = f.amplitude();
  const bool shortcut = route == PettyRoute::ShortCircuit && (f.kind() == LogConcaveFn::Kind::Indicator ||
                                                              f.kind() == LogConcaveFn::Kind::ExpGauge);
  if (shortcut) {
    const ConvexBody& k = f.kind() == LogConcaveFn::Kind::Indicator ? f.as<Indicator>().body : f.as<ExpGauge>().body;
    double r = 0.0;
    const ConvexBody surface = ball_like(k, r) ? k : polytope_form(k);
    body_ = projection_body(surface);
    const double c = f.kind() == LogConcaveFn::Kind::Indicator ? 1.0 : int_factorial(n - 1);
    factor_ = a * c;
    grad_l1_ = a * c * total_surface_area(surface);
  } else {
    atoms_ = gradient_atoms(f, spec);
    grad_l1_ = atoms_.l1();
  }
  values_.resize(rule_.size());
  for (std::size_t j = 0; j < rule_.size(); ++j) values_[j] = (*this)(rule_.nodes[j]);
}

double PettySupport::operator()(const Vec& u) const {
  if (body_) return factor_ * support(*body_, u);
  return atoms_.support(u);
}

double petty_support(const LogConcaveFn& f, const Vec& u, const IntegrationSpec& spec) {
  if (f.kind() == LogConcaveFn::Kind::Indicator || f.kind() == LogConcaveFn::Kind::ExpGauge) {
    IntegrationSpec small = spec;
    small.sphere_nodes = f.dim() == 1 ? 2 : f.dim() == 3 ? 8 : 4;
    return PettySupport(f, small)(u);
  }
  return gradient_atoms(f, spec).support(u);
}

double polar_projection_eval(const PettySupport& h, const Vec& z) {
  if (z.norm() == 0.0) return 1.0;
  return std::exp(-h(z));
}

double polar_projection_eval(const LogConcaveFn& f, const Vec& z, const IntegrationSpec& spec) {
  if (z.norm() == 0.0) return 1.0;
  return std::exp(-petty_support(f, z, spec));
}

namespace {

void require_positive(const PettySupport& h) {
  for (double v : h.values())
    require(v > 0.0 && std::isfinite(v), ErrorCode::DegeneratePettyBody,
            "h_{Πf} vanishes on a node: f is constant in some direction");
}

}  // namespace

double polar_projection_integral(const PettySupport& h) {
  require_positive(h);
  return exp_homogeneous_integral_values(h.values(), h.rule());
}

double polar_projection_integral(const LogConcaveFn& f, const IntegrationSpec& spec) {
  return polar_projection_integral(PettySupport(f, spec));
}

double petty_body_polar_volume(const PettySupport& h) {
  require_positive(h);
  const int n = h.rule().dim;
  std::vector<double> t(h.values().size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = std::pow(2.0 * h.values()[j], -n);
  return sphere_sum(t, h.rule()) / n;
}

double petty_body_polar_volume(const LogConcaveFn& f, const IntegrationSpec& spec) {
  return petty_body_polar_volume(PettySupport(f, spec));
}

double petty_body_support(const PettySupport& h, const Vec& u) { return 2.0 * h(u); }

double grad_l1(const LogConcaveFn& f, const IntegrationSpec& spec) {
  const int n = f.dim();
  if (f.kind() == LogConcaveFn::Kind::Indicator || f.kind() == LogConcaveFn::Kind::ExpGauge) {
    IntegrationSpec small = spec;
    small.sphere_nodes = n == 1 ? 2 : n == 3 ? 8 : 4;
    return PettySupport(f, small).grad_l1();
  }
  return gradient_atoms(f, spec).l1();
}

std::vector<double> mollified_indicator_support(const ConvexBody& polygon, const std::vector<Vec>& directions,
                                                double eps, int cells) {
  require(polygon.dim() == 2, ErrorCode::Unsupported, "the mollified ramp is implemented for polygons only");
  require(eps > 0.0 && cells >= 2, ErrorCode::InvalidArgument, "need eps > 0 and at least 2 cells");
  const ConvexBody p = polytope_form(polygon);
  const auto& facets = p.facets().facets;
  const auto& verts = p.vertices();
  std::vector<std::pair<Vec, Vec>> edges;
  for (const auto& f : facets) {
    // Facet vertex lists may include collinear points; keep the extreme pair.
    Vec dir(2);
    dir << -f.normal[1], f.normal[0];
    auto [lo, hi] = std::minmax_element(f.vertices.begin(), f.vertices.end(),
                                        [&](int a, int b) { return verts[a].dot(dir) < verts[b].dot(dir); });
    edges.emplace_back(verts[*lo], verts[*hi]);
  }

  Box box = bounding_box(p);
  box.lo.array() -= 1.5 * eps;
  box.hi.array() += 1.5 * eps;
  const double hx = (box.hi[0] - box.lo[0]) / cells, hy = (box.hi[1] - box.lo[1]) / cells;
  auto ramp = [&](const Vec& x) {
    bool inside = true;
    for (const auto& f : facets) inside = inside && f.normal.dot(x) <= f.offset;
    if (inside) return 1.0;
    double best = kInf;
    for (const auto& [a, b] : edges) {
      const Vec ab = b - a;
      const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (x - a - t * ab).norm());
    }
    return std::max(0.0, 1.0 - best / eps);
  };
  auto column = [&](int i) {
    std::vector<double> c(cells + 1);
    Vec x(2);
    for (int j = 0; j <= cells; ++j) {
      x << box.lo[0] + i * hx, box.lo[1] + j * hy;
      c[j] = ramp(x);
    }
    return c;
  };

  // Cell gradients of the bilinear interpolant of the node values.
  const std::size_t m = directions.size();
  std::vector<std::vector<double>> rows(m, std::vector<double>(cells, 0.0));
  std::vector<double> left = column(0);
  for (int i = 0; i < cells; ++i) {
    const std::vector<double> right = column(i + 1);
    std::vector<double> acc(m, 0.0);
    for (int j = 0; j < cells; ++j) {
      const double gx = (right[j] - left[j] + right[j + 1] - left[j + 1]) / (2 * hx);
      const double gy = (left[j + 1] - left[j] + right[j + 1] - right[j]) / (2 * hy);
      if (gx == 0.0 && gy == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) acc[k] += std::abs(gx * directions[k][0] + gy * directions[k][1]);
    }
    for (std::size_t k = 0; k < m; ++k) rows[k][i] = acc[k];
    left = right;
  }
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = 0.5 * hx * hy * pairwise_sum(rows[k]);
  return out;
}

}  // namespace pettyfn
