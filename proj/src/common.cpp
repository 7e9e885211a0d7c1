#include "pettyfn/common.hpp"

namespace pettyfn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::EmptyEffectiveDomain: return "EmptyEffectiveDomain";
    case ErrorCode::NotConvexInput: return "NotConvexInput";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorCode::NonDifferentiablePoint: return "NonDifferentiablePoint";
    case ErrorCode::PolarNotRepresentable: return "PolarNotRepresentable";
    case ErrorCode::NotIntegrableGradient: return "NotIntegrableGradient";
    case ErrorCode::DegeneratePettyBody: return "DegeneratePettyBody";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 32;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

Box Box::scaled(double factor) const {
  const Vec c = center();
  return Box{c + factor * (lo - c), c + factor * (hi - c)};
}

}  // namespace pettyfn
