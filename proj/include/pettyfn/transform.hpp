#pragma once

#include <functional>

#include "pettyfn/common.hpp"

namespace pettyfn {

/// Extended-real function sampled on a uniform grid over a box, vertices
/// included. Values are row-major with the last axis fastest; +inf is a
/// legitimate value.
struct GridFn {
  Box box;
  std::vector<int> shape;
  std::vector<double> values;

  static GridFn sample(const Box& box, std::vector<int> shape, const std::function<double(const Vec&)>& phi);

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const { return values.size(); }
  double step(int axis) const { return (box.hi[axis] - box.lo[axis]) / (shape[axis] - 1); }
  double coordinate(int axis, int i) const { return box.lo[axis] + i * step(axis); }
  std::vector<int> unravel(std::size_t flat) const;
  std::size_t ravel(const std::vector<int>& index) const;
  Vec point(std::size_t flat) const;
  /// Largest step over the axes.
  double max_step() const;

  /// Throws InvalidArgument / EmptyEffectiveDomain on malformed grids.
  void validate() const;
};

/// Multilinear interpolation; +inf if any contributing corner is +inf and
/// outside the box.
double interpolate(const GridFn& f, const Vec& x);

/// Discrete conjugate max_i (y x_i - phi_i) in O(N + M log M) via the lower hull
/// of the finite samples. `xs` strictly increasing.
std::vector<double> conjugate_1d(std::span<const double> xs, std::span<const double> phi,
                                 std::span<const double> ys);
/// O(NM) reference path.
std::vector<double> conjugate_1d_brute(std::span<const double> xs, std::span<const double> phi,
                                       std::span<const double> ys);

struct Conjugate {
  GridFn fn;
  /// 1 where the maximiser sits on the boundary of the primal box, so the
  /// value may underestimate the conjugate of the untruncated function.
  std::vector<unsigned char> truncated;
};

/// φ*(y) = max over grid points of <x, y> - φ(x), one axis at a time.
Conjugate conjugate_nd(const GridFn& f, const Box& dual_box, const std::vector<int>& dual_shape);

/// Midpoint convexity along axis-parallel and diagonal triples of finite samples.
/// Returns the largest violation (<= 0 when convex).
double convexity_violation(const GridFn& f);
/// Throws NotConvexInput when the violation exceeds `tol`.
void require_convex(const GridFn& f, double tol = 1e-9);

/// Dual box spanning the finite-difference slopes of f, padded symmetrically.
Box slope_box(const GridFn& f, double pad_fraction = 0.05);

struct BiconjugateReport {
  double max_deviation = 0.0;
  double step = 0.0;
  std::size_t points = 0;
};

/// max |φ** - φ| over finite points whose distance to the box boundary is at
/// least `margin` times the box half-width on every axis (0 excludes only the
/// boundary nodes).
BiconjugateReport double_conjugate_check(const GridFn& f, double margin = 0.0);

}  // namespace pettyfn
