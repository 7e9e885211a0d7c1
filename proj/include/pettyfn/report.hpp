#pragma once

#include <string>

namespace pettyfn {

enum class Direction { GreaterEqual, LessEqual, Equal };
enum class Status { Passed, Failed, Skipped };

const char* to_string(Direction d);
const char* to_string(Status s);
Direction direction_from_string(const std::string& s);
Status status_from_string(const std::string& s);

struct VerificationReport {
  std::string name;
  std::string subject;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  Direction direction = Direction::Equal;
  /// Relative slack on the ratio for the stated direction.
  double tolerance = 0.0;
  bool pass = false;
  double error_estimate = 0.0;
  /// The input is one of the stated equality cases; the ratio must then also
  /// sit within `equality_tolerance` of 1.
  bool equality_case = false;
  double equality_tolerance = 0.0;
  Status status = Status::Failed;
  std::string reason;
  std::string detail;

  bool operator==(const VerificationReport&) const = default;
};

/// Fills ratio, pass and status from the other fields.
VerificationReport make_report(std::string name, std::string subject, double lhs, double rhs, Direction direction,
                               double tolerance, double error_estimate = 0.0, bool equality_case = false,
                               double equality_tolerance = 0.0);

VerificationReport skipped_report(std::string name, std::string subject, std::string reason);

/// Re-evaluates pass/status after the tolerances were changed.
void grade(VerificationReport& r);

}  // namespace pettyfn
