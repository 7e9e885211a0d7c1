#include "pettyfn/geometry.hpp"

#include <algorithm>

namespace pettyfn {

const char* to_string(ConvexBody::Kind kind) {
  switch (kind) {
    case ConvexBody::Kind::Polytope: return "polytope";
    case ConvexBody::Kind::Ball: return "ball";
    case ConvexBody::Kind::Zonotope: return "zonotope";
    case ConvexBody::Kind::Scaled: return "scaled";
  }
  return "unknown";
}

ConvexBody ConvexBody::polytope(std::vector<Vec> vertices) {
  require(!vertices.empty(), ErrorCode::DegenerateBody, "polytope needs vertices");
  const int n = static_cast<int>(vertices.front().size());
  for (const auto& v : vertices) {
    require(v.size() == n, ErrorCode::InvalidArgument, "vertex dimensions differ");
    require(v.allFinite(), ErrorCode::InvalidArgument, "vertex coordinates must be finite");
  }
  auto facets = std::make_shared<const FacetDecomposition>(enumerate_facets(vertices));
  return ConvexBody(n, PolytopeRep{std::move(vertices), std::move(facets)});
}

ConvexBody ConvexBody::ball(int dim, double radius) {
  require(dim >= 1, ErrorCode::InvalidArgument, "ball dimension must be positive");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::DegenerateBody, "ball radius must be positive");
  return ConvexBody(dim, BallRep{radius});
}

ConvexBody ConvexBody::zonotope(std::vector<Vec> generators) {
  require(!generators.empty(), ErrorCode::DegenerateBody, "zonotope needs generators");
  const int n = static_cast<int>(generators.front().size());
  Mat g(n, static_cast<int>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    require(generators[j].size() == n, ErrorCode::InvalidArgument, "generator dimensions differ");
    require(generators[j].allFinite(), ErrorCode::InvalidArgument, "generator coordinates must be finite");
    g.col(static_cast<int>(j)) = generators[j];
  }
  Eigen::FullPivLU<Mat> lu(g);
  lu.setThreshold(1e-12);
  require(lu.rank() == n, ErrorCode::DegenerateBody, "zonotope generators do not span R^n");
  return ConvexBody(n, ZonotopeRep{std::move(generators)});
}

ConvexBody ConvexBody::scaled(ConvexBody inner, double factor) {
  require(factor > 0.0 && std::isfinite(factor), ErrorCode::DegenerateBody, "scale factor must be positive");
  const int n = inner.dim();
  return ConvexBody(n, ScaledRep{std::make_shared<const ConvexBody>(std::move(inner)), factor});
}

const std::vector<Vec>& ConvexBody::vertices() const { return std::get<PolytopeRep>(rep_).vertices; }
const FacetDecomposition& ConvexBody::facets() const { return *std::get<PolytopeRep>(rep_).facets; }
double ConvexBody::radius() const { return std::get<BallRep>(rep_).radius; }
const std::vector<Vec>& ConvexBody::generators() const { return std::get<ZonotopeRep>(rep_).generators; }
const ConvexBody& ConvexBody::inner() const { return *std::get<ScaledRep>(rep_).inner; }
double ConvexBody::factor() const { return std::get<ScaledRep>(rep_).factor; }

double SurfaceAreaMeasure::total_mass() const {
  if (ball_radius) return unit_sphere_area(dim) * std::pow(*ball_radius, dim - 1);
  std::vector<double> w;
  w.reserve(atoms.size());
  for (const auto& a : atoms) w.push_back(a.weight);
  return pairwise_sum(w);
}

Vec SurfaceAreaMeasure::balance() const {
  Vec s = Vec::Zero(dim);
  for (const auto& a : atoms) s += a.weight * a.normal;
  return s;
}

bool is_ball(const ConvexBody& body) {
  if (body.kind() == ConvexBody::Kind::Ball) return true;
  if (body.kind() == ConvexBody::Kind::Scaled) return is_ball(body.inner());
  return false;
}

double support(const ConvexBody& body, const Vec& x) {
  switch (body.kind()) {
    case ConvexBody::Kind::Polytope: {
      double best = -kInf;
      for (const auto& v : body.vertices()) best = std::max(best, v.dot(x));
      return best;
    }
    case ConvexBody::Kind::Ball: return body.radius() * x.norm();
    case ConvexBody::Kind::Zonotope: {
      double s = 0.0;
      for (const auto& g : body.generators()) s += std::abs(g.dot(x));
      return s;
    }
    case ConvexBody::Kind::Scaled: return body.factor() * support(body.inner(), x);
  }
  return 0.0;
}

double volume(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::Polytope: {
      Vec c = Vec::Zero(n);
      for (const auto& v : body.vertices()) c += v;
      c /= static_cast<double>(body.vertices().size());
      double s = 0.0;
      for (const auto& f : body.facets().facets) s += (f.offset - f.normal.dot(c)) * f.area;
      return s / n;
    }
    case ConvexBody::Kind::Ball: return unit_ball_volume(n) * std::pow(body.radius(), n);
    case ConvexBody::Kind::Zonotope: {
      // vol(Σ[-g_i, g_i]) = 2^n Σ_{|S|=n} |det(g_S)|.
      const auto& g = body.generators();
      const int m = static_cast<int>(g.size());
      std::vector<int> idx(n);
      for (int i = 0; i < n; ++i) idx[i] = i;
      std::vector<double> dets;
      Mat block(n, n);
      for (;;) {
        for (int i = 0; i < n; ++i) block.col(i) = g[idx[i]];
        dets.push_back(std::abs(block.determinant()));
        int i = n - 1;
        while (i >= 0 && idx[i] == m - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
      }
      return std::ldexp(pairwise_sum(dets), n);
    }
    case ConvexBody::Kind::Scaled: return std::pow(body.factor(), n) * volume(body.inner());
  }
  return 0.0;
}

SurfaceAreaMeasure surface_area_measure(const ConvexBody& body) {
  SurfaceAreaMeasure m;
  m.dim = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::Polytope:
      for (const auto& f : body.facets().facets) m.atoms.push_back({f.normal, f.area});
      return m;
    case ConvexBody::Kind::Ball: m.ball_radius = body.radius(); return m;
    case ConvexBody::Kind::Zonotope:
      fail(ErrorCode::Unsupported, "surface area measure of a zonotope is not supported");
    case ConvexBody::Kind::Scaled: {
      m = surface_area_measure(body.inner());
      const double s = std::pow(body.factor(), body.dim() - 1);
      for (auto& a : m.atoms) a.weight *= s;
      if (m.ball_radius) *m.ball_radius *= body.factor();
      return m;
    }
  }
  return m;
}

double total_surface_area(const ConvexBody& body) { return surface_area_measure(body).total_mass(); }

ConvexBody projection_body(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::Ball:
      return ConvexBody::ball(n, unit_ball_volume(n - 1) * std::pow(body.radius(), n - 1));
    case ConvexBody::Kind::Scaled:
      return ConvexBody::scaled(projection_body(body.inner()), std::pow(body.factor(), n - 1));
    default: {
      const SurfaceAreaMeasure m = surface_area_measure(body);
      std::vector<Vec> gens;
      gens.reserve(m.atoms.size());
      for (const auto& a : m.atoms) gens.push_back(0.5 * a.weight * a.normal);
      return ConvexBody::zonotope(std::move(gens));
    }
  }
}

double polar_volume(const ConvexBody& body, const SphereRule& rule) {
  const int n = body.dim();
  if (body.kind() == ConvexBody::Kind::Ball) return unit_ball_volume(n) * std::pow(body.radius(), -n);
  if (body.kind() == ConvexBody::Kind::Scaled) return std::pow(body.factor(), -n) * polar_volume(body.inner(), rule);
  require(rule.dim == n, ErrorCode::InvalidArgument, "sphere rule dimension mismatch");
  std::vector<double> terms(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double h = support(body, rule.nodes[j]);
    require(h > 0.0, ErrorCode::OriginNotInterior, "support is not positive: origin not interior");
    terms[j] = std::pow(h, -n);
  }
  return sphere_sum(terms, rule) / n;
}

double polar_volume(const ConvexBody& body) { return polar_volume(body, SphereRule::make(body.dim())); }

ConvexBody to_polytope(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::Polytope: return body;
    case ConvexBody::Kind::Ball: fail(ErrorCode::Unsupported, "a ball has no vertex representation");
    case ConvexBody::Kind::Scaled: {
      ConvexBody inner = to_polytope(body.inner());
      std::vector<Vec> v = inner.vertices();
      for (auto& p : v) p *= body.factor();
      return ConvexBody::polytope(std::move(v));
    }
    case ConvexBody::Kind::Zonotope: {
      std::vector<Vec> merged;
      for (Vec g : body.generators()) {
        const double len = g.norm();
        if (len == 0.0) continue;
        int lead = 0;
        g.cwiseAbs().maxCoeff(&lead);
        if (g[lead] < 0) g = -g;
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const Vec& h) { return h.normalized().dot(g / len) > 1.0 - 1e-12; });
        if (it != merged.end())
          *it += g;
        else
          merged.push_back(g);
      }
      const int m = static_cast<int>(merged.size());
      require(m <= 16, ErrorCode::Unsupported, "zonotope has too many distinct generators for vertex enumeration");
      std::vector<Vec> pts;
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        Vec p = Vec::Zero(body.dim());
        for (int i = 0; i < m; ++i) p += ((mask >> i) & 1u) ? merged[i] : Vec(-merged[i]);
        pts.push_back(p);
      }
      return ConvexBody::polytope(std::move(pts));
    }
  }
  return body;
}

ConvexBody polar_body(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return ConvexBody::ball(body.dim(), 1.0 / body.radius());
    case ConvexBody::Kind::Scaled: return ConvexBody::scaled(polar_body(body.inner()), 1.0 / body.factor());
    case ConvexBody::Kind::Zonotope: return polar_body(to_polytope(body));
    case ConvexBody::Kind::Polytope: {
      std::vector<Vec> v;
      for (const auto& f : body.facets().facets) {
        require(f.offset > 1e-12, ErrorCode::OriginNotInterior, "origin is not interior: polar is unbounded");
        v.push_back(f.normal / f.offset);
      }
      return ConvexBody::polytope(std::move(v));
    }
  }
  return body;
}

double origin_inradius(const ConvexBody& body) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return body.radius();
    case ConvexBody::Kind::Scaled: return body.factor() * origin_inradius(body.inner());
    case ConvexBody::Kind::Zonotope: return origin_inradius(to_polytope(body));
    case ConvexBody::Kind::Polytope: {
      double r = kInf;
      for (const auto& f : body.facets().facets) r = std::min(r, f.offset);
      return r;
    }
  }
  return 0.0;
}

bool contains(const ConvexBody& body, const Vec& x, double tol) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return x.norm() <= body.radius() + tol;
    case ConvexBody::Kind::Scaled: return contains(body.inner(), x / body.factor(), tol / body.factor());
    case ConvexBody::Kind::Zonotope: return contains(to_polytope(body), x, tol);
    case ConvexBody::Kind::Polytope:
      for (const auto& f : body.facets().facets)
        if (f.normal.dot(x) > f.offset + tol) return false;
      return true;
  }
  return false;
}

double gauge(const ConvexBody& body, const Vec& x) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return x.norm() / body.radius();
    case ConvexBody::Kind::Scaled: return gauge(body.inner(), x) / body.factor();
    case ConvexBody::Kind::Zonotope: return gauge(to_polytope(body), x);
    case ConvexBody::Kind::Polytope: {
      double g = -kInf;
      for (const auto& f : body.facets().facets) {
        require(f.offset > 0.0, ErrorCode::OriginNotInterior, "gauge requires the origin in the interior");
        g = std::max(g, f.normal.dot(x) / f.offset);
      }
      return g;
    }
  }
  return 0.0;
}

int gauge_cone(const ConvexBody& body, const Vec& x) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return -1;
    case ConvexBody::Kind::Scaled: return gauge_cone(body.inner(), x);
    case ConvexBody::Kind::Zonotope: return gauge_cone(to_polytope(body), x);
    case ConvexBody::Kind::Polytope: {
      const auto& fs = body.facets().facets;
      int best = 0;
      double g = -kInf;
      for (int i = 0; i < static_cast<int>(fs.size()); ++i) {
        const double r = fs[i].normal.dot(x) / fs[i].offset;
        if (r > g) g = r, best = i;
      }
      return best;
    }
  }
  return -1;
}

Vec gauge_gradient(const ConvexBody& body, const Vec& x) {
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: {
      const double r = x.norm();
      require(r > 0.0, ErrorCode::NonDifferentiablePoint, "gauge is not differentiable at the origin");
      return x / (r * body.radius());
    }
    case ConvexBody::Kind::Scaled: return gauge_gradient(body.inner(), x) / body.factor();
    case ConvexBody::Kind::Zonotope: return gauge_gradient(to_polytope(body), x);
    case ConvexBody::Kind::Polytope: {
      const auto& fs = body.facets().facets;
      double first = -kInf, second = -kInf;
      int best = -1;
      for (int i = 0; i < static_cast<int>(fs.size()); ++i) {
        require(fs[i].offset > 0.0, ErrorCode::OriginNotInterior, "gauge requires the origin in the interior");
        const double r = fs[i].normal.dot(x) / fs[i].offset;
        if (r > first) {
          second = first;
          first = r;
          best = i;
        } else if (r > second) {
          second = r;
        }
      }
      require(x.norm() > 0.0, ErrorCode::NonDifferentiablePoint, "gauge is not differentiable at the origin");
      require(first - second > 1e-12 * std::max(1.0, std::abs(first)), ErrorCode::NonDifferentiablePoint,
              "point lies on a gauge-cone boundary");
      return fs[best].normal / fs[best].offset;
    }
  }
  return x;
}

Box bounding_box(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.kind()) {
    case ConvexBody::Kind::Ball: return Box{Vec::Constant(n, -body.radius()), Vec::Constant(n, body.radius())};
    case ConvexBody::Kind::Scaled: {
      Box b = bounding_box(body.inner());
      return Box{b.lo * body.factor(), b.hi * body.factor()};
    }
    case ConvexBody::Kind::Zonotope: {
      Vec h = Vec::Zero(n);
      for (const auto& g : body.generators()) h += g.cwiseAbs();
      return Box{-h, h};
    }
    case ConvexBody::Kind::Polytope: {
      Vec lo = body.vertices().front(), hi = lo;
      for (const auto& v : body.vertices()) lo = lo.cwiseMin(v), hi = hi.cwiseMax(v);
      return Box{lo, hi};
    }
  }
  return Box{};
}

ConvexBody linear_image(const ConvexBody& body, const Mat& a) {
  std::vector<Vec> v = to_polytope(body).vertices();
  for (auto& p : v) p = a * p;
  return ConvexBody::polytope(std::move(v));
}

}  // namespace pettyfn
