#pragma once

#include <cstdint>

#include "pettyfn/common.hpp"

namespace pettyfn {

/// Counter-based generator: the k-th draw of a stream is a pure function of
/// (seed, stream, k), so results never depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * (counter + 1));
  }

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Sequential convenience interface.
  double next_uniform() noexcept { return uniform(counter_++); }
  double next_normal() noexcept;
  Vec normal_vector(int dim);
  Vec unit_vector(int dim);

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline double CounterRng::next_normal() noexcept {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline Vec CounterRng::normal_vector(int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = next_normal();
  return v;
}

inline Vec CounterRng::unit_vector(int dim) {
  for (;;) {
    Vec v = normal_vector(dim);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

}  // namespace pettyfn
