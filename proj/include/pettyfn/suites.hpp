#pragma once

#include "pettyfn/io.hpp"

namespace pettyfn {

struct NamedBody {
  std::string name;
  ConvexBody body;
};

struct NamedFunction {
  std::string name;
  LogConcaveFn f;
};

/// Ball, cube ("square" at n = 2), centroid simplex and cross-polytope.
std::vector<NamedBody> body_zoo(int n);
/// Gaussians, indicators and exponential gauges of the body zoo, a radial
/// profile and (n = 2) a grid potential.
std::vector<NamedFunction> function_zoo(int n);

const std::vector<std::string>& suite_names();

struct SuiteConfig {
  std::string suite = "all";
  std::vector<std::string> inputs;
  int dim = 2;
  IntegrationSpec spec;
  /// Unset: tensor double integrals at n = 2, Monte-Carlo otherwise.
  std::optional<Method> method;
  std::string format = "table";
  std::string out;
  double tolerance_scale = 1.0;
  std::vector<double> log_t;
  double threshold = 50.0;
};

struct SuiteResult {
  std::vector<VerificationReport> reports;
  std::vector<FalsifyTable> tables;
  std::vector<std::string> descriptions;

  /// 0 when every non-skipped report passed, else 1.
  int exit_code() const;
  std::string render(const std::string& format) const;
};

/// Throws ParseError for unknown suites, bad dimensions and broken inputs.
SuiteResult run_suite(const SuiteConfig& config);

/// Dimension, variant, volume or ‖f‖_1, integrability of f and of its polar.
std::string describe(const Descriptor& d, const IntegrationSpec& spec = {});

}  // namespace pettyfn
