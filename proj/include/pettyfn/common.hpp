#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pettyfn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class ErrorCode {
  DegenerateBody,
  Unsupported,
  OriginNotInterior,
  EmptyEffectiveDomain,
  NotConvexInput,
  NonFiniteIntegrand,
  NonPositiveSupport,
  NonDifferentiablePoint,
  PolarNotRepresentable,
  NotIntegrableGradient,
  DegeneratePettyBody,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

/// Volume of the Euclidean unit ball in R^n, via log-gamma.
inline double unit_ball_volume(int n) {
  if (n == 0) return 1.0;
  const double half = 0.5 * n;
  return std::exp(half * std::log(kPi) - std::lgamma(half + 1.0));
}

/// Surface area of S^{n-1}, i.e. n * omega_n.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

inline double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

/// Exact for small n; used where integer factorials appear in the identities.
inline double int_factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Pairwise (cascade) summation; order-independent up to reassociation.
double pairwise_sum(std::span<const double> xs);

inline double relative_error(double value, double reference) {
  if (reference == 0.0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  Vec center() const { return 0.5 * (lo + hi); }
  /// Box scaled about its centre.
  Box scaled(double factor) const;
};

}  // namespace pettyfn
