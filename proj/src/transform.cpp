#include "pettyfn/transform.hpp"

#include <algorithm>
#include <numeric>

namespace pettyfn {
namespace {

std::vector<std::size_t> strides_of(const std::vector<int>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d) s[d] = s[d + 1] * shape[d + 1];
  return s;
}

std::size_t product(const std::vector<int>& shape) {
  std::size_t p = 1;
  for (int s : shape) p *= static_cast<std::size_t>(s);
  return p;
}

std::vector<double> axis_coordinates(double lo, double hi, int count) {
  std::vector<double> c(count);
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) c[i] = lo + i * h;
  c.back() = hi;
  return c;
}

// Conjugate of one fibre. Returns false when every sample is +inf; the output
// is then left at -inf. `arg` receives the maximising sample index.
bool conjugate_fibre(std::span<const double> xs, std::span<const double> phi, std::span<const double> ys,
                     std::span<double> out, std::span<int> arg) {
  std::vector<int> hull;
  hull.reserve(xs.size());
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    if (!std::isfinite(phi[i])) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      if ((phi[b] - phi[a]) * (xs[i] - xs[b]) >= (phi[i] - phi[b]) * (xs[b] - xs[a]))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  if (hull.empty()) {
    std::fill(out.begin(), out.end(), -kInf);
    std::fill(arg.begin(), arg.end(), -1);
    return false;
  }

  std::vector<int> order(ys.size());
  std::iota(order.begin(), order.end(), 0);
  if (!std::is_sorted(ys.begin(), ys.end()))
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ys[a] < ys[b]; });

  std::size_t j = 0;
  for (int k : order) {
    const double y = ys[k];
    auto value = [&](std::size_t h) { return y * xs[hull[h]] - phi[hull[h]]; };
    while (j + 1 < hull.size() && value(j + 1) >= value(j)) ++j;
    out[k] = value(j);
    arg[k] = hull[j];
  }
  return true;
}

}  // namespace

GridFn GridFn::sample(const Box& box, std::vector<int> shape, const std::function<double(const Vec&)>& phi) {
  GridFn g{box, std::move(shape), {}};
  require(static_cast<int>(g.shape.size()) == box.dim(), ErrorCode::InvalidArgument, "shape rank differs from box");
  g.values.resize(product(g.shape));
  for (std::size_t k = 0; k < g.values.size(); ++k) g.values[k] = phi(g.point(k));
  g.validate();
  return g;
}

std::vector<int> GridFn::unravel(std::size_t flat) const {
  std::vector<int> idx(shape.size());
  for (int d = dim() - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % shape[d]);
    flat /= shape[d];
  }
  return idx;
}

std::size_t GridFn::ravel(const std::vector<int>& index) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim(); ++d) flat = flat * shape[d] + index[d];
  return flat;
}

Vec GridFn::point(std::size_t flat) const {
  const std::vector<int> idx = unravel(flat);
  Vec x(dim());
  for (int d = 0; d < dim(); ++d) x[d] = idx[d] == shape[d] - 1 ? box.hi[d] : coordinate(d, idx[d]);
  return x;
}

double GridFn::max_step() const {
  double h = 0.0;
  for (int d = 0; d < dim(); ++d) h = std::max(h, step(d));
  return h;
}

void GridFn::validate() const {
  require(dim() >= 1 && box.dim() == dim(), ErrorCode::InvalidArgument, "grid rank differs from box");
  for (int d = 0; d < dim(); ++d) {
    require(shape[d] >= 2, ErrorCode::InvalidArgument, "grid needs at least 2 samples per axis");
    require(box.lo[d] < box.hi[d], ErrorCode::InvalidArgument, "grid box must satisfy lo < hi");
  }
  require(values.size() == product(shape), ErrorCode::InvalidArgument, "value count differs from shape");
  bool any_finite = false;
  for (double v : values) {
    require(!std::isnan(v) && v != -kInf, ErrorCode::InvalidArgument, "grid values must be finite or +inf");
    any_finite = any_finite || std::isfinite(v);
  }
  require(any_finite, ErrorCode::EmptyEffectiveDomain, "grid function is +inf everywhere");
}

double interpolate(const GridFn& f, const Vec& x) {
  const int n = f.dim();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int d = 0; d < n; ++d) {
    if (x[d] < f.box.lo[d] || x[d] > f.box.hi[d]) return kInf;
    const double t = (x[d] - f.box.lo[d]) / f.step(d);
    int i = std::min(static_cast<int>(std::floor(t)), f.shape[d] - 2);
    i = std::max(i, 0);
    base[d] = i;
    frac[d] = std::clamp(t - i, 0.0, 1.0);
  }
  double value = 0.0;
  std::vector<int> corner(n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const bool up = (mask >> d) & 1;
      corner[d] = base[d] + (up ? 1 : 0);
      w *= up ? frac[d] : 1.0 - frac[d];
    }
    if (w == 0.0) continue;
    const double v = f.values[f.ravel(corner)];
    if (!std::isfinite(v)) return kInf;
    value += w * v;
  }
  return value;
}

std::vector<double> conjugate_1d(std::span<const double> xs, std::span<const double> phi,
                                 std::span<const double> ys) {
  require(xs.size() == phi.size() && !xs.empty(), ErrorCode::InvalidArgument, "sample arrays differ in length");
  for (std::size_t i = 1; i < xs.size(); ++i)
    require(xs[i] > xs[i - 1], ErrorCode::InvalidArgument, "abscissae must be strictly increasing");
  std::vector<double> out(ys.size());
  std::vector<int> arg(ys.size());
  if (!conjugate_fibre(xs, phi, ys, out, arg)) fail(ErrorCode::EmptyEffectiveDomain, "all samples are +inf");
  return out;
}

std::vector<double> conjugate_1d_brute(std::span<const double> xs, std::span<const double> phi,
                                       std::span<const double> ys) {
  std::vector<double> out(ys.size(), -kInf);
  bool any = false;
  for (std::size_t k = 0; k < ys.size(); ++k)
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(phi[i])) continue;
      any = true;
      out[k] = std::max(out[k], ys[k] * xs[i] - phi[i]);
    }
  if (!any) fail(ErrorCode::EmptyEffectiveDomain, "all samples are +inf");
  return out;
}

Conjugate conjugate_nd(const GridFn& f, const Box& dual_box, const std::vector<int>& dual_shape) {
  f.validate();
  const int n = f.dim();
  require(dual_box.dim() == n && static_cast<int>(dual_shape.size()) == n, ErrorCode::InvalidArgument,
          "dual grid rank differs from the primal grid");
  GridFn shape_check{dual_box, dual_shape, {}};
  shape_check.values.assign(product(dual_shape), 0.0);
  shape_check.validate();

  // `cur` holds ψ on a mixed grid (primal axes < d, dual axes >= d); each sweep
  // replaces axis d by its dual via ψ'(.., y_d, ..) = -max_x (y_d x - ψ(.., x, ..)).
  std::vector<int> shape = f.shape;
  std::vector<double> cur = f.values;
  std::vector<unsigned char> flag(cur.size(), 0);

  std::vector<double> phi_line, out_line;
  std::vector<int> arg_line;
  for (int d = n - 1; d >= 0; --d) {
    const std::vector<double> xs = axis_coordinates(f.box.lo[d], f.box.hi[d], f.shape[d]);
    const std::vector<double> ys = axis_coordinates(dual_box.lo[d], dual_box.hi[d], dual_shape[d]);
    std::vector<int> next_shape = shape;
    next_shape[d] = dual_shape[d];
    const auto in_stride = strides_of(shape);
    const auto out_stride = strides_of(next_shape);
    std::vector<double> next(product(next_shape));
    std::vector<unsigned char> next_flag(next.size(), 0);

    // Fibres are indexed by all coordinates except d.
    std::size_t outer = 1, inner = in_stride[d];
    for (int a = 0; a < d; ++a) outer *= shape[a];
    phi_line.resize(shape[d]);
    out_line.resize(ys.size());
    arg_line.resize(ys.size());
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t in_base = o * shape[d] * inner + i;
        const std::size_t out_base = o * next_shape[d] * inner + i;
        for (int k = 0; k < shape[d]; ++k) phi_line[k] = cur[in_base + k * in_stride[d]];
        conjugate_fibre(xs, phi_line, ys, out_line, arg_line);
        for (std::size_t m = 0; m < ys.size(); ++m) {
          const std::size_t at = out_base + m * out_stride[d];
          next[at] = -out_line[m];
          const int a = arg_line[m];
          if (a >= 0) next_flag[at] = flag[in_base + a * in_stride[d]] || a == 0 || a == shape[d] - 1;
        }
      }
    shape = std::move(next_shape);
    cur = std::move(next);
    flag = std::move(next_flag);
  }
  for (double& v : cur) v = -v;

  Conjugate result{GridFn{dual_box, dual_shape, std::move(cur)}, std::move(flag)};
  return result;
}

double convexity_violation(const GridFn& f) {
  const int n = f.dim();
  // Axis directions plus the main diagonals of each coordinate plane.
  std::vector<std::vector<int>> dirs;
  for (int a = 0; a < n; ++a) {
    std::vector<int> e(n, 0);
    e[a] = 1;
    dirs.push_back(e);
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> p(n, 0), m(n, 0);
      p[a] = p[b] = 1;
      m[a] = 1;
      m[b] = -1;
      dirs.push_back(p);
      dirs.push_back(m);
    }
  }
  double worst = -kInf;
  std::vector<int> lo(n), hi(n);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::vector<int> mid = f.unravel(k);
    const double vm = f.values[k];
    for (const auto& e : dirs) {
      bool inside = true;
      for (int d = 0; d < n && inside; ++d) {
        lo[d] = mid[d] - e[d];
        hi[d] = mid[d] + e[d];
        inside = lo[d] >= 0 && hi[d] < f.shape[d] && hi[d] >= 0 && lo[d] < f.shape[d];
      }
      if (!inside) continue;
      const double va = f.values[f.ravel(lo)], vb = f.values[f.ravel(hi)];
      if (!std::isfinite(va) || !std::isfinite(vb)) continue;
      if (!std::isfinite(vm)) return kInf;
      const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
      worst = std::max(worst, (vm - 0.5 * (va + vb)) / scale);
    }
  }
  return worst;
}

void require_convex(const GridFn& f, double tol) {
  const double v = convexity_violation(f);
  require(v <= tol, ErrorCode::NotConvexInput, "midpoint convexity violated by " + std::to_string(v));
}

Box slope_box(const GridFn& f, double pad_fraction) {
  const int n = f.dim();
  const auto stride = strides_of(f.shape);
  Box b{Vec::Constant(n, kInf), Vec::Constant(n, -kInf)};
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::vector<int> idx = f.unravel(k);
    for (int d = 0; d < n; ++d) {
      if (idx[d] + 1 >= f.shape[d]) continue;
      const double a = f.values[k], c = f.values[k + stride[d]];
      if (!std::isfinite(a) || !std::isfinite(c)) continue;
      const double s = (c - a) / f.step(d);
      b.lo[d] = std::min(b.lo[d], s);
      b.hi[d] = std::max(b.hi[d], s);
    }
  }
  for (int d = 0; d < n; ++d) {
    if (!std::isfinite(b.lo[d])) b.lo[d] = b.hi[d] = 0.0;
    const double width = b.hi[d] - b.lo[d];
    const double pad = width > 0.0 ? pad_fraction * width : 1.0;
    b.lo[d] -= pad;
    b.hi[d] += pad;
  }
  return b;
}

BiconjugateReport double_conjugate_check(const GridFn& f, double margin) {
  f.validate();
  require_convex(f);
  const Box dual = slope_box(f);
  std::vector<int> dual_shape(f.shape.size());
  for (std::size_t d = 0; d < f.shape.size(); ++d) dual_shape[d] = 2 * f.shape[d] + 1;
  const Conjugate once = conjugate_nd(f, dual, dual_shape);
  const Conjugate twice = conjugate_nd(once.fn, f.box, f.shape);

  BiconjugateReport r;
  r.step = f.max_step();
  const Vec centre = f.box.center();
  const Vec half = 0.5 * (f.box.hi - f.box.lo);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f.values[k])) continue;
    const std::vector<int> idx = f.unravel(k);
    bool keep = true;
    for (int d = 0; d < f.dim() && keep; ++d) {
      if (idx[d] == 0 || idx[d] == f.shape[d] - 1) keep = false;
      const double x = f.coordinate(d, idx[d]);
      if (std::abs(x - centre[d]) > (1.0 - margin) * half[d] + 1e-12) keep = false;
    }
    if (!keep) continue;
    r.max_deviation = std::max(r.max_deviation, std::abs(twice.fn.values[k] - f.values[k]));
    ++r.points;
  }
  return r;
}

}  // namespace pettyfn
