#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "pettyfn/common.hpp"
#include "pettyfn/quadrature.hpp"

namespace pettyfn {

struct Facet {
  Vec normal;           // outer unit normal
  double offset = 0.0;  // <normal, x> = offset on the facet
  double area = 0.0;    // (n-1)-volume; 1 for the point facets of a segment
  std::vector<int> vertices;
};

struct FacetDecomposition {
  std::vector<Facet> facets;
};

/// Facets of conv(points) for a full-dimensional point set in R^n, n <= 4.
/// Brute force over affinely independent n-subsets; interior and repeated
/// points are allowed.
FacetDecomposition enumerate_facets(const std::vector<Vec>& points);

/// Volume of conv(points), cone decomposition from the vertex centroid.
double hull_volume(const std::vector<Vec>& points);

/// Compact convex set with non-empty interior. Immutable value type.
class ConvexBody {
 public:
  enum class Kind { Polytope, Ball, Zonotope, Scaled };

  static ConvexBody polytope(std::vector<Vec> vertices);
  static ConvexBody ball(int dim, double radius);
  /// Zonotope Σ_i [-g_i, g_i]; support Σ_i |<g_i, x>|.
  static ConvexBody zonotope(std::vector<Vec> generators);
  static ConvexBody scaled(ConvexBody inner, double factor);

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  int dim() const { return dim_; }

  const std::vector<Vec>& vertices() const;
  const FacetDecomposition& facets() const;
  double radius() const;
  const std::vector<Vec>& generators() const;
  const ConvexBody& inner() const;
  double factor() const;

 private:
  struct PolytopeRep {
    std::vector<Vec> vertices;
    std::shared_ptr<const FacetDecomposition> facets;
  };
  struct BallRep {
    double radius;
  };
  struct ZonotopeRep {
    std::vector<Vec> generators;
  };
  struct ScaledRep {
    std::shared_ptr<const ConvexBody> inner;
    double factor;
  };

  ConvexBody(int dim, std::variant<PolytopeRep, BallRep, ZonotopeRep, ScaledRep> rep)
      : dim_(dim), rep_(std::move(rep)) {}

  int dim_;
  std::variant<PolytopeRep, BallRep, ZonotopeRep, ScaledRep> rep_;
};

const char* to_string(ConvexBody::Kind kind);

/// Discrete atoms (u_i, w_i) for polytopes, or density r^{n-1} dσ for balls.
struct SurfaceAreaMeasure {
  struct Atom {
    Vec normal;
    double weight;
  };
  int dim = 0;
  std::vector<Atom> atoms;
  std::optional<double> ball_radius;

  double total_mass() const;
  /// Σ w_i u_i; zero for a closed surface.
  Vec balance() const;
};

double support(const ConvexBody& body, const Vec& x);
double volume(const ConvexBody& body);
SurfaceAreaMeasure surface_area_measure(const ConvexBody& body);
double total_surface_area(const ConvexBody& body);
/// Zonotope with generators (w_i / 2) u_i for polytopes, Ball(ω_{n-1} r^{n-1}) for balls.
ConvexBody projection_body(const ConvexBody& body);
/// vol(K°) = (1/n) ∫ h_K^{-n} dσ on the given rule; closed form for balls.
double polar_volume(const ConvexBody& body, const SphereRule& rule);
double polar_volume(const ConvexBody& body);

/// Vertex representation of a zonotope (parallel generators merged first).
ConvexBody to_polytope(const ConvexBody& body);
/// Polar body; requires the origin in the interior.
ConvexBody polar_body(const ConvexBody& body);
/// Largest r with B(0, r) ⊂ K; non-positive when 0 is not interior.
double origin_inradius(const ConvexBody& body);
bool contains(const ConvexBody& body, const Vec& x, double tol = 1e-12);
/// Minkowski functional ‖x‖_K; requires 0 ∈ int K.
double gauge(const ConvexBody& body, const Vec& x);
/// ∇‖x‖_K; throws NonDifferentiablePoint on gauge-cone boundaries and at 0.
Vec gauge_gradient(const ConvexBody& body, const Vec& x);
/// Index of the facet whose cone contains x (-1 for balls).
int gauge_cone(const ConvexBody& body, const Vec& x);
Box bounding_box(const ConvexBody& body);
/// Apply x -> A x to a polytope's vertices.
ConvexBody linear_image(const ConvexBody& body, const Mat& a);

/// True for Ball and Scaled(Ball, t).
bool is_ball(const ConvexBody& body);

}  // namespace pettyfn
