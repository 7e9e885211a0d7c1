#pragma once

#include <stdexcept>
#include <variant>

#include "json.hpp"
#include "pettyfn/inequality.hpp"

namespace pettyfn {

/// Descriptor or config problem, located in the source text (1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }
  /// "<line>:<column>: <what>", or "config: <what>" when there is no location.
  std::string diagnostic() const;

 private:
  int line_;
  int column_;
};

struct Descriptor {
  std::string name;
  std::variant<ConvexBody, LogConcaveFn> value;

  bool is_body() const { return value.index() == 0; }
  const ConvexBody& body() const { return std::get<ConvexBody>(value); }
  const LogConcaveFn& function() const { return std::get<LogConcaveFn>(value); }
  int dim() const;
};

/// Bodies:    {"type": "polytope", "vertices": [[x, y], ...]}
///            {"type": "ball", "radius": r}
///            {"type": "zonotope", "generators": [[...], ...]}
///            {"type": "scaled", "factor": t, "body": {...}}
///            {"type": "cube", "half_width": w}     (default w = 1)
///            {"type": "simplex"}                   (centroid at 0)
/// Functions: {"type": "indicator" | "exp_gauge", "body": {...}}
///            {"type": "gaussian", "sigma": s} or "covariance": [[...]]
///            {"type": "radial", "profile": {"p": p, "scale": s}}
///            {"type": "grid_potential", "phi": {"box": {"lo": [...], "hi": [...]},
///             "shape": [...], "values": [...]}}  (row-major, last axis fastest, "inf" allowed)
///            {"type": "half_gaussian", "polar": false}
///            {"type": "zero"}
/// Functions accept "amplitude"; every descriptor accepts "name". Bodies and
/// functions without an explicit "dim" get `default_dim`.
Descriptor parse_descriptor(const std::string& text, int default_dim = 2);
/// Inline JSON when the argument starts with '{', else a file path.
Descriptor load_descriptor(const std::string& path_or_inline, int default_dim = 2);

ConvexBody body_from_json(const nlohmann::json& j, int default_dim = 2);
LogConcaveFn function_from_json(const nlohmann::json& j, int default_dim = 2);
GridFn grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConvexBody& body);
nlohmann::json to_json(const GridFn& g);
nlohmann::json to_json(const LogConcaveFn& f);

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FalsifyTable& t);

std::string format_table(const std::vector<VerificationReport>& reports);
std::string format_table(const FalsifyTable& t);

/// Accepts plain numbers and "exp(x)" tokens; returns log t.
double parse_log_t(const std::string& token);

}  // namespace pettyfn
