#pragma once

#include <span>

#include "pettyfn/petty.hpp"

namespace pettyfn {

/// vol_{n-1}(K | u^⊥) for unit u.
double shadow_volume(const ConvexBody& body, const Vec& u);

/// ∬ min{f(x), f(y)} dx dy = ∫_0^∞ |{f > s}|² ds, from one point cloud over
/// effective_box(f): cell centres (Tensor) or jittered cell points (MonteCarlo,
/// 8 replicates for the standard error). All pairs are summed after a sort.
Estimate min_double_integral(const LogConcaveFn& f, const IntegrationSpec& spec = {});

/// ∫ f log(f / a), with the integrand 0 where f = 0.
double entropy_integral(const LogConcaveFn& f, double a, const IntegrationSpec& spec = {});

/// (∫|∇f|)^n ∫Π°f >= ω_n n! (nω_n / ω_{n-1})^n; equality case for radial f.
VerificationReport check_theorem_polar(const LogConcaveFn& f, const IntegrationSpec& spec = {},
                                       const std::string& subject = "");

/// S(K)^n vol(Π°K) >= ω_n (nω_n / ω_{n-1})^n; equality case for balls.
VerificationReport check_corollary_surface(const ConvexBody& body, const IntegrationSpec& spec = {},
                                           const std::string& subject = "");

/// vol(K)^{n-1} vol(Π°K).
double petty_zhang_middle(const ConvexBody& body, const IntegrationSpec& spec = {});

/// Lower (Zhang) and upper (Petty) bound on vol(K)^{n-1} vol(Π°K), in that order.
std::vector<VerificationReport> check_petty_zhang(const ConvexBody& body, const IntegrationSpec& spec = {},
                                                  const std::string& subject = "");

/// Lower and upper bound on vol(Π°_b f), in that order.
std::vector<VerificationReport> check_functional_petty_zhang(const LogConcaveFn& f, const IntegrationSpec& spec = {},
                                                             const std::string& subject = "");

/// ∫Π°f = 2^n n! vol(Π°_b f) on one sphere rule.
VerificationReport check_integral_volume(const LogConcaveFn& f, const IntegrationSpec& spec = {},
                                              const std::string& subject = "");

/// The eight identities linking K, χ_K and e^{-‖·‖_K}, in order:
/// h_{χ_K} = h_K, (‖·‖_K)* = I_{K°}, h_{Πχ_K} = h_{ΠK}, Πχ_K = χ_{ΠK},
/// Π°χ_K = e^{-h_{ΠK}}, h_{Πe^{-‖·‖_K}} = (n-1)! h_{ΠK}, ∫e^{-‖x‖_K} = n! vol(K),
/// ∫Π°e^{-‖·‖_K} = Γ(n)^{-n} ∫Π°χ_K.
std::vector<VerificationReport> check_body_identities(const ConvexBody& body, const IntegrationSpec& spec = {},
                                                        const std::string& subject = "");

/// ∫|∇f| <= n ∫f + ∫ f log(f / a) for a χ_B <= f; the entropy term equals
/// ∫ f log(f / (a'‖f‖_∞)) with a' = a / ‖f‖_∞. Skipped when a χ_B <= f fails on
/// 1000 sampled points of B.
VerificationReport check_entropic_bound(const LogConcaveFn& f, double a, const IntegrationSpec& spec = {},
                                        const std::string& subject = "");

/// Is polar(f) integrable, and is its box integral stable under doubling?
/// Expected verdict: Integrable iff 0 ∈ int supp f.
std::vector<VerificationReport> check_integrability(const LogConcaveFn& f, const IntegrationSpec& spec = {},
                                                    const std::string& subject = "");

struct FalsifyRow {
  double t = 1.0;
  double log_t = 0.0;
  /// (1 - log t)^{n-1}.
  double quantity = 1.0;
  bool exceeds = false;
};

struct FalsifyTable {
  int dim = 2;
  double threshold = 0.0;
  std::vector<FalsifyRow> rows;
  /// Rows sorted by decreasing t have strictly increasing quantity.
  bool monotone = true;
  bool exceeded = false;
};

/// For f = χ_{tB} the claimed bound reduces to (1 - log t)^{n-1} <= C(n). Takes
/// log t so that t = e^{-9} is exact.
FalsifyTable falsify_log_bound(std::span<const double> log_t, int n, double threshold);
/// Passes when the table is monotone and exceeds the threshold.
VerificationReport falsification_report(const FalsifyTable& table);

}  // namespace pettyfn
