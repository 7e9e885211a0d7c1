#pragma once

#include "pettyfn/logconcave.hpp"

namespace pettyfn {

/// Discrete gradient measure ν_j of f: h_{Πf}(u) = ½ Σ_j |<ν_j, u>| and
/// ∫|∇f| = Σ_j |ν_j|.
struct GradientAtoms {
  int dim = 0;
  std::vector<Vec> atoms;

  double support(const Vec& u) const;
  double l1() const;
};

/// Direct route: integrates ∇f per variant (radially in closed form, by sphere
/// quadrature over directions). Indicators use their surface-area atoms.
GradientAtoms gradient_atoms(const LogConcaveFn& f, const IntegrationSpec& spec = {});

enum class PettyRoute {
  /// Indicator and exponential gauge go through the projection body.
  ShortCircuit,
  Direct,
};

/// h_{Πf} tabulated on the sphere rule selected by `spec`. The table is the
/// cache: build it once and reuse it for every integral over the same rule.
class PettySupport {
 public:
  PettySupport(const LogConcaveFn& f, const IntegrationSpec& spec = {}, PettyRoute route = PettyRoute::ShortCircuit);

  const LogConcaveFn& function() const { return f_; }
  const SphereRule& rule() const { return rule_; }
  PettyRoute route() const { return route_; }
  std::span<const double> values() const { return values_; }
  double grad_l1() const { return grad_l1_; }
  /// 1-homogeneous evaluation at any point.
  double operator()(const Vec& u) const;

 private:
  LogConcaveFn f_;
  SphereRule rule_;
  PettyRoute route_;
  double factor_ = 0.0;
  std::optional<ConvexBody> body_;
  GradientAtoms atoms_;
  std::vector<double> values_;
  double grad_l1_ = 0.0;
};

double petty_support(const LogConcaveFn& f, const Vec& u, const IntegrationSpec& spec = {});
/// Π°f(z) = e^{-h_{Πf}(z)}.
double polar_projection_eval(const PettySupport& h, const Vec& z);
double polar_projection_eval(const LogConcaveFn& f, const Vec& z, const IntegrationSpec& spec = {});
/// ∫ Π°f = Γ(n) ∫_S h_{Πf}^{-n} dσ.
double polar_projection_integral(const PettySupport& h);
double polar_projection_integral(const LogConcaveFn& f, const IntegrationSpec& spec = {});
/// vol(Π°_b f) = (1/n) ∫_S (2 h_{Πf})^{-n} dσ.
double petty_body_polar_volume(const PettySupport& h);
double petty_body_polar_volume(const LogConcaveFn& f, const IntegrationSpec& spec = {});
/// h_{Π_b f} = 2 h_{Πf}.
double petty_body_support(const PettySupport& h, const Vec& u);
/// ∫ |∇f|.
double grad_l1(const LogConcaveFn& f, const IntegrationSpec& spec = {});

/// ½ ∫ |<∇f_ε, u>| for the ramp f_ε = max(0, 1 - d(x, K)/ε) around a polygon,
/// by a midpoint rule with `cells` per axis. Returns one value per direction.
std::vector<double> mollified_indicator_support(const ConvexBody& polygon, const std::vector<Vec>& directions,
                                                double eps, int cells);

}  // namespace pettyfn
