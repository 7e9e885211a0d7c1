#pragma once

#include <optional>
#include <variant>

#include "pettyfn/geometry.hpp"
#include "pettyfn/quadrature.hpp"
#include "pettyfn/report.hpp"
#include "pettyfn/transform.hpp"

namespace pettyfn {

/// χ_K.
struct Indicator {
  ConvexBody body;
};
/// e^{-‖x‖_K}; requires 0 ∈ int K.
struct ExpGauge {
  ConvexBody body;
};
/// e^{-½ xᵀ A⁻¹ x}, A symmetric positive definite.
struct Gaussian {
  Mat covariance;
  Mat precision;
};
/// e^{-(|x|/s)^p / p}, p >= 1. p = 2, s = σ is the isotropic Gaussian.
struct Radial {
  int dim;
  double p;
  double scale;
};
/// e^{-φ} with φ a convex grid potential; zero outside the grid box.
struct GridPotential {
  GridFn phi;
};
/// n = 1: e^{-x²/2} on x >= 0 and 0 otherwise. Its polar is e^{-x²/2} on
/// x >= 0 and 1 otherwise.
struct HalfGaussian {
  bool polar = false;
};
/// f ≡ 0 (φ ≡ +inf).
struct Zero {
  int dim;
};

/// a·e^{-φ}. Immutable value type.
class LogConcaveFn {
 public:
  using Rep = std::variant<Indicator, ExpGauge, Gaussian, Radial, GridPotential, HalfGaussian, Zero>;
  enum class Kind { Indicator, ExpGauge, Gaussian, Radial, GridPotential, HalfGaussian, Zero };

  static LogConcaveFn indicator(ConvexBody body, double amplitude = 1.0);
  static LogConcaveFn exp_gauge(ConvexBody body, double amplitude = 1.0);
  static LogConcaveFn gaussian(int dim, double sigma, double amplitude = 1.0);
  static LogConcaveFn gaussian(Mat covariance, double amplitude = 1.0);
  static LogConcaveFn radial(int dim, double p, double scale, double amplitude = 1.0);
  /// Checks midpoint convexity of φ.
  static LogConcaveFn grid(GridFn phi, double amplitude = 1.0);
  static LogConcaveFn half_gaussian(bool polar = false);
  static LogConcaveFn zero(int dim);

  Kind kind() const { return static_cast<Kind>(rep_.index()); }
  const Rep& rep() const { return rep_; }
  template <class T>
  const T& as() const { return std::get<T>(rep_); }
  int dim() const { return dim_; }
  double amplitude() const { return amplitude_; }
  LogConcaveFn with_amplitude(double a) const;

 private:
  LogConcaveFn(int dim, Rep rep, double amplitude);

  int dim_;
  Rep rep_;
  double amplitude_;
};

const char* to_string(LogConcaveFn::Kind kind);

/// φ with f = a·e^{-φ} (amplitude excluded).
double potential(const LogConcaveFn& f, const Vec& x);
double eval(const LogConcaveFn& f, const Vec& x);
/// ∇f = -f∇φ; zero on the interior of an indicator's support.
Vec gradient(const LogConcaveFn& f, const Vec& x);
/// h_f = (φ - log a)*; -inf for the zero function.
double support_function(const LogConcaveFn& f, const Vec& y);
/// f° = e^{-h_f}. Throws PolarNotRepresentable for χ_K with 0 ∉ int K and for f ≡ 0.
LogConcaveFn polar(const LogConcaveFn& f);
/// Polar through a grid conjugate of h_f on the given dual grid; works for every
/// variant with a finite support function somewhere on the grid.
LogConcaveFn polar_on_grid(const LogConcaveFn& f, const Box& box, const std::vector<int>& shape);

/// ‖f‖_∞.
double sup_norm(const LogConcaveFn& f);
/// Box outside which f < 1e-12‖f‖_∞ (the support box for compactly supported f).
/// Throws InvalidArgument for the polar half-Gaussian and the zero function.
Box effective_box(const LogConcaveFn& f);
/// ∫ f^q, closed form when available, else box quadrature over effective_box.
double power_integral(const LogConcaveFn& f, double q, const IntegrationSpec& spec = {});
inline double l1_norm(const LogConcaveFn& f, const IntegrationSpec& spec = {}) { return power_integral(f, 1.0, spec); }
/// ‖f‖_q = (∫ f^q)^{1/q}.
double lp_norm(const LogConcaveFn& f, double q, const IntegrationSpec& spec = {});
/// Whether 0 ∈ int supp f.
bool origin_interior_to_support(const LogConcaveFn& f);

struct RaySpec {
  Vec origin;
  Vec direction;  // unit
};

enum class RayBehavior { ConstantPositive, NotConstant, Zero };
const char* to_string(RayBehavior b);

struct RayResult {
  RayBehavior behavior = RayBehavior::NotConstant;
  double value = 0.0;
  /// Grid variants only see the ray inside their box.
  bool inconclusive_beyond_box = false;
};

/// Probes f at geometrically spaced points of the ray (up to 2^40 for closed
/// forms, up to the box exit for grids).
RayResult constant_on_ray(const LogConcaveFn& f, const RaySpec& ray, int probes = 64);

enum class Integrability { Integrable, NotIntegrable, ZeroFunction, Inconclusive };
const char* to_string(Integrability v);

struct IntegrabilityVerdict {
  Integrability status = Integrability::Inconclusive;
  std::optional<RaySpec> witness;
  std::string reason;
};

IntegrabilityVerdict is_integrable(const LogConcaveFn& f);

/// Midpoint-rule integral over `box` and over the doubled box with the same cell
/// size; returns the relative change.
struct DoublingCheck {
  double value = 0.0;
  double doubled = 0.0;
  double relative_change = 0.0;
};
DoublingCheck box_doubling(const LogConcaveFn& f, const IntegrationSpec& spec = {});

/// f° integrable when 0 ∈ int supp f, plus the linear lower bound
/// h_f(y) >= δ|y| - C sampled along rays.
VerificationReport polar_integrability_theorem_check(const LogConcaveFn& f, const std::string& subject = "");

}  // namespace pettyfn
