#include <algorithm>

#include "pettyfn/geometry.hpp"

namespace pettyfn {
namespace {

double coordinate_scale(const std::vector<Vec>& points) {
  double s = 0.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s > 0.0 ? s : 1.0;
}

int affine_rank(const std::vector<Vec>& points, double tol) {
  const int n = static_cast<int>(points.front().size());
  Mat d(n, static_cast<int>(points.size()) - 1);
  for (std::size_t j = 1; j < points.size(); ++j) d.col(static_cast<int>(j) - 1) = points[j] - points[0];
  if (d.cols() == 0) return 0;
  Eigen::FullPivLU<Mat> lu(d);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

/// Orthonormal basis of the complement of a unit vector, as columns.
Mat complement_basis(const Vec& a) {
  const int n = static_cast<int>(a.size());
  const Mat column = a;
  Eigen::HouseholderQR<Mat> qr(column);
  Mat q = qr.householderQ();
  return q.rightCols(n - 1);
}

bool next_combination(std::vector<int>& idx, int total) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == total - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

FacetDecomposition enumerate_facets(const std::vector<Vec>& points) {
  require(!points.empty(), ErrorCode::DegenerateBody, "empty point set");
  const int n = static_cast<int>(points.front().size());
  const int count = static_cast<int>(points.size());
  require(n >= 1, ErrorCode::DegenerateBody, "zero-dimensional points");
  const double scale = coordinate_scale(points);
  const double tol = 1e-9 * scale;
  require(count >= n + 1 && affine_rank(points, 1e-10) == n, ErrorCode::DegenerateBody,
          "points do not span an n-dimensional affine hull");

  FacetDecomposition out;
  if (n == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const auto& p : points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    Facet left{Vec::Constant(1, -1.0), -lo, 1.0, {}};
    Facet right{Vec::Constant(1, 1.0), hi, 1.0, {}};
    for (int j = 0; j < count; ++j) {
      if (std::abs(points[j][0] - lo) <= tol) left.vertices.push_back(j);
      if (std::abs(points[j][0] - hi) <= tol) right.vertices.push_back(j);
    }
    out.facets = {left, right};
    return out;
  }

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Mat diffs(n - 1, n);
  do {
    for (int k = 1; k < n; ++k) diffs.row(k - 1) = (points[idx[k]] - points[idx[0]]).transpose();
    Eigen::FullPivLU<Mat> lu(diffs);
    lu.setThreshold(1e-10);
    if (lu.rank() < n - 1) continue;
    Vec a = lu.kernel().col(0).normalized();
    double b = a.dot(points[idx[0]]);
    double smax = -kInf, smin = kInf;
    for (const auto& p : points) {
      const double s = a.dot(p) - b;
      smax = std::max(smax, s);
      smin = std::min(smin, s);
    }
    if (smax > tol) {
      if (smin < -tol) continue;
      a = -a;
      b = -b;
    }
    const bool seen = std::any_of(out.facets.begin(), out.facets.end(),
                                  [&](const Facet& f) { return f.normal.dot(a) > 1.0 - 1e-9; });
    if (seen) continue;

    Facet facet{a, b, 0.0, {}};
    std::vector<Vec> on_plane;
    for (int j = 0; j < count; ++j) {
      if (std::abs(a.dot(points[j]) - b) <= tol) {
        facet.vertices.push_back(j);
        on_plane.push_back(points[j]);
      }
    }
    const Mat basis = complement_basis(a);
    std::vector<Vec> local;
    local.reserve(on_plane.size());
    for (const auto& p : on_plane) local.push_back(basis.transpose() * (p - on_plane.front()));
    facet.area = hull_volume(local);
    out.facets.push_back(std::move(facet));
  } while (next_combination(idx, count));
  return out;
}

double hull_volume(const std::vector<Vec>& points) {
  require(!points.empty(), ErrorCode::DegenerateBody, "empty point set");
  const int n = static_cast<int>(points.front().size());
  if (n == 1) {
    double lo = kInf, hi = -kInf;
    for (const auto& p : points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    require(hi > lo, ErrorCode::DegenerateBody, "segment has zero length");
    return hi - lo;
  }
  const FacetDecomposition fd = enumerate_facets(points);
  Vec c = Vec::Zero(n);
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());
  double v = 0.0;
  for (const auto& f : fd.facets) v += (f.offset - f.normal.dot(c)) * f.area;
  return v / n;
}

}  // namespace pettyfn
