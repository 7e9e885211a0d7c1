#include "pettyfn/quadrature.hpp"

#include <algorithm>

#include "pettyfn/random.hpp"

namespace pettyfn {

SphereRule SphereRule::circle(int count, double phase) {
  require(count >= 2 && count % 2 == 0, ErrorCode::InvalidArgument, "circle rule needs an even node count");
  SphereRule rule;
  rule.dim = 2;
  rule.nodes.reserve(count);
  const double w = 2.0 * kPi / count;
  for (int k = 0; k < count; ++k) {
    const double t = w * (k + phase);
    Vec u(2);
    u << std::cos(t), std::sin(t);
    rule.nodes.push_back(u);
    rule.weights.push_back(w);
  }
  return rule;
}

SphereRule SphereRule::product(int polar_count, int azimuth_count, double phase) {
  require(polar_count >= 2 && azimuth_count >= 2 && azimuth_count % 2 == 0, ErrorCode::InvalidArgument,
          "product rule needs polar >= 2 and an even azimuth count");
  auto [zs, wz] = gauss_legendre(polar_count);
  SphereRule rule;
  rule.dim = 3;
  const double dphi = 2.0 * kPi / azimuth_count;
  for (int i = 0; i < polar_count; ++i) {
    const double z = zs[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < azimuth_count; ++j) {
      const double phi = dphi * (j + phase);
      Vec u(3);
      u << rho * std::cos(phi), rho * std::sin(phi), z;
      rule.nodes.push_back(u);
      rule.weights.push_back(wz[i] * dphi);
    }
  }
  return rule;
}

SphereRule SphereRule::random(int dim, int count, std::uint64_t seed) {
  require(dim >= 1 && count >= 2 && count % 2 == 0, ErrorCode::InvalidArgument,
          "random sphere rule needs an even node count");
  SphereRule rule;
  rule.dim = dim;
  rule.monte_carlo = true;
  CounterRng rng(seed, 0x5bd1e995);
  const int half = count / 2;
  rule.nodes.resize(count);
  for (int k = 0; k < half; ++k) {
    rule.nodes[k] = rng.unit_vector(dim);
    rule.nodes[k + half] = -rule.nodes[k];
  }
  rule.weights.assign(count, unit_sphere_area(dim) / count);
  return rule;
}

SphereRule SphereRule::points() {
  SphereRule rule;
  rule.dim = 1;
  rule.nodes = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  rule.weights = {1.0, 1.0};
  return rule;
}

int SphereRule::default_nodes(int dim) {
  switch (dim) {
    case 1: return 2;
    case 2: return 4096;
    case 3: return 8192;
    default: return 200000;
  }
}

SphereRule SphereRule::make(int dim, int nodes, std::uint64_t seed) {
  require(dim >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  if (nodes <= 0) nodes = default_nodes(dim);
  const double phase = 0.25 + 0.5 * CounterRng(seed, 0x1234).uniform(0);
  switch (dim) {
    case 1: return points();
    case 2: return circle(nodes + (nodes % 2), phase);
    case 3: {
      const int polar = std::max(2, static_cast<int>(std::lround(std::sqrt(nodes / 2.0))));
      return product(polar, 2 * polar, phase);
    }
    default: return random(dim, nodes + (nodes % 2), seed);
  }
}

double sphere_sum(std::span<const double> values, const SphereRule& rule) {
  require(values.size() == rule.size(), ErrorCode::InvalidArgument, "node value count mismatch");
  std::vector<double> terms(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    require(std::isfinite(values[j]), ErrorCode::NonFiniteIntegrand, "integrand not finite at a sphere node");
    terms[j] = rule.weights[j] * values[j];
  }
  return pairwise_sum(terms);
}

double sphere_integrate(const std::function<double(const Vec&)>& g, const SphereRule& rule) {
  std::vector<double> values(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) values[j] = g(rule.nodes[j]);
  return sphere_sum(values, rule);
}

Estimate sphere_integrate_estimate(const std::function<double(const Vec&)>& g, const SphereRule& rule) {
  std::vector<double> values(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) values[j] = g(rule.nodes[j]);
  Estimate est{sphere_sum(values, rule), 0.0};
  if (rule.monte_carlo) {
    // Antithetic pairs are the independent units.
    const std::size_t half = rule.size() / 2;
    double mean = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
      const double m = 0.5 * (values[k] + values[k + half]);
      mean += m;
      sq += m * m;
    }
    mean /= half;
    const double var = std::max(0.0, sq / half - mean * mean);
    est.error = unit_sphere_area(rule.dim) * std::sqrt(var / half);
  }
  return est;
}

double exp_homogeneous_integral_values(std::span<const double> h_values, const SphereRule& rule) {
  const int n = rule.dim;
  std::vector<double> terms(h_values.size());
  for (std::size_t j = 0; j < h_values.size(); ++j) {
    const double h = h_values[j];
    require(h > 0.0, ErrorCode::NonPositiveSupport, "support must be positive at every sphere node");
    require(std::isfinite(h), ErrorCode::NonFiniteIntegrand, "support not finite at a sphere node");
    terms[j] = std::pow(h, -n);
  }
  return std::tgamma(static_cast<double>(n)) * sphere_sum(terms, rule);
}

double exp_homogeneous_integral(const std::function<double(const Vec&)>& h, const SphereRule& rule) {
  std::vector<double> values(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) values[j] = h(rule.nodes[j]);
  return exp_homogeneous_integral_values(values, rule);
}

const char* to_string(Method m) { return m == Method::Tensor ? "tensor" : "monte-carlo"; }

Method method_from_string(const std::string& s) {
  if (s == "tensor" || s == "tensor-grid") return Method::Tensor;
  if (s == "monte-carlo" || s == "mc") return Method::MonteCarlo;
  fail(ErrorCode::InvalidArgument, "unknown integration method '" + s + "'");
}

int IntegrationSpec::resolution_for(int dim) const {
  if (resolution > 0) return resolution;
  switch (dim) {
    case 1: return 1 << 16;
    case 2: return 1024;
    case 3: return 128;
    default: return 24;
  }
}

void for_each_cell_center(const Box& box, int cells, const std::function<void(const Vec&)>& visit) {
  const int n = box.dim();
  Vec h = (box.hi - box.lo) / cells;
  std::vector<int> idx(n, 0);
  Vec x(n);
  for (int d = 0; d < n; ++d) x[d] = box.lo[d] + 0.5 * h[d];
  for (;;) {
    visit(x);
    int d = n - 1;
    while (d >= 0) {
      if (++idx[d] < cells) {
        x[d] = box.lo[d] + (idx[d] + 0.5) * h[d];
        break;
      }
      idx[d] = 0;
      x[d] = box.lo[d] + 0.5 * h[d];
      --d;
    }
    if (d < 0) return;
  }
}

double midpoint_rule(const std::function<double(const Vec&)>& f, const Box& box, int cells) {
  require(cells >= 1, ErrorCode::InvalidArgument, "cells must be positive");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(std::pow(cells, box.dim())));
  for_each_cell_center(box, cells, [&](const Vec& x) {
    const double v = f(x);
    require(!std::isnan(v), ErrorCode::NonFiniteIntegrand, "integrand is NaN");
    values.push_back(v);
  });
  return pairwise_sum(values) * box.volume() / static_cast<double>(values.size());
}

BoxIntegral box_integrate(const std::function<double(const Vec&)>& f, const Box& box,
                          const IntegrationSpec& spec) {
  const int n = box.dim();
  require(n >= 1, ErrorCode::InvalidArgument, "box dimension must be positive");
  for (int d = 0; d < n; ++d)
    require(box.lo[d] < box.hi[d], ErrorCode::InvalidArgument, "box must satisfy lo < hi");
  BoxIntegral out;
  if (spec.method == Method::Tensor) {
    const int cells = spec.resolution_for(n);
    out.value = midpoint_rule(f, box, cells);
    if (cells >= 4 && cells % 2 == 0) {
      // Midpoint error is O(h^2): Richardson gap to the half-resolution rule.
      out.error = std::abs(out.value - midpoint_rule(f, box, cells / 2)) / 3.0;
    }
  } else {
    require(spec.samples >= 1, ErrorCode::InvalidArgument, "sample count must be positive");
    CounterRng rng(spec.seed, 0xb0c5);
    std::vector<double> values(spec.samples);
    Vec x(n);
    for (std::uint64_t k = 0; k < spec.samples; ++k) {
      for (int d = 0; d < n; ++d) x[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * rng.uniform(k * n + d);
      values[k] = f(x);
      require(!std::isnan(values[k]), ErrorCode::NonFiniteIntegrand, "integrand is NaN");
    }
    const double mean = pairwise_sum(values) / spec.samples;
    std::vector<double> sq(spec.samples);
    for (std::uint64_t k = 0; k < spec.samples; ++k) sq[k] = (values[k] - mean) * (values[k] - mean);
    const double var = spec.samples > 1 ? pairwise_sum(sq) / (spec.samples - 1) : 0.0;
    out.value = box.volume() * mean;
    out.error = box.volume() * std::sqrt(var / spec.samples);
  }
  if (spec.target_rel_error > 0.0 && out.error > spec.target_rel_error * std::abs(out.value))
    out.budget_exceeded = true;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  require(count >= 1, ErrorCode::InvalidArgument, "Gauss-Legendre needs at least one node");
  std::vector<double> x(count), w(count);
  const int m = (count + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0, p1 = z;
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[count - 1 - i] = z;
    w[i] = w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace pettyfn
