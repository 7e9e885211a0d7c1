#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "pettyfn/common.hpp"

namespace pettyfn {

/// Point rule for dσ on S^{n-1}; weights sum to the sphere area n·ω_n.
/// Nodes come in antipodal pairs (node k and node k + size/2 for the circle
/// and Monte-Carlo rules, mirrored latitude for the product rule).
struct SphereRule {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  bool monte_carlo = false;

  std::size_t size() const { return nodes.size(); }

  /// Equispaced trapezoid rule on the circle, offset by `phase` node spacings.
  static SphereRule circle(int count, double phase);
  /// Gauss-Legendre in z times equispaced azimuth, for S^2.
  static SphereRule product(int polar_count, int azimuth_count, double phase);
  /// Antithetic seeded Monte-Carlo rule, any dimension >= 1.
  static SphereRule random(int dim, int count, std::uint64_t seed);
  /// S^0 = {-1, +1}.
  static SphereRule points();
  /// Dispatch on dimension: n=1 points, n=2 circle, n=3 product, n>=4 random.
  /// `nodes == 0` selects the default resolution.
  static SphereRule make(int dim, int nodes = 0, std::uint64_t seed = 0);

  static int default_nodes(int dim);
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Σ_j w_j g(node_j).
double sphere_integrate(const std::function<double(const Vec&)>& g, const SphereRule& rule);
/// Same as above with a standard-error estimate (zero for deterministic rules).
Estimate sphere_integrate_estimate(const std::function<double(const Vec&)>& g, const SphereRule& rule);
/// Weighted sum of precomputed node values.
double sphere_sum(std::span<const double> values, const SphereRule& rule);

/// ∫_{R^n} e^{-H(z)} dz for the 1-homogeneous H with H(u) = h(u) on the sphere,
/// integrated radially in closed form: Γ(n) Σ_j w_j h(node_j)^{-n}.
double exp_homogeneous_integral(const std::function<double(const Vec&)>& h, const SphereRule& rule);
double exp_homogeneous_integral_values(std::span<const double> h_values, const SphereRule& rule);

enum class Method { Tensor, MonteCarlo };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegrationSpec {
  Method method = Method::Tensor;
  /// Cells per axis for tensor rules; 0 selects a per-dimension default.
  int resolution = 0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Flags BudgetExceeded when the error estimate is above this (0 disables).
  double target_rel_error = 0.0;
  /// Sphere rule size; 0 selects SphereRule::default_nodes.
  int sphere_nodes = 0;

  int resolution_for(int dim) const;
};

struct BoxIntegral {
  double value = 0.0;
  double error = 0.0;
  bool budget_exceeded = false;
};

/// Tensor midpoint rule (error from the half-resolution rule) or seeded
/// Monte-Carlo (standard error). Deterministic for a fixed spec.
BoxIntegral box_integrate(const std::function<double(const Vec&)>& f, const Box& box,
                          const IntegrationSpec& spec);

/// Midpoint rule with the given number of cells per axis.
double midpoint_rule(const std::function<double(const Vec&)>& f, const Box& box, int cells);

/// Visit every cell centre of a uniform `cells`^n grid over `box`.
void for_each_cell_center(const Box& box, int cells, const std::function<void(const Vec&)>& visit);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count);

}  // namespace pettyfn
