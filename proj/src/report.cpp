#include "pettyfn/report.hpp"

#include <cmath>

#include "pettyfn/common.hpp"

namespace pettyfn {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::GreaterEqual: return ">=";
    case Direction::LessEqual: return "<=";
    case Direction::Equal: return "=";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Passed: return "passed";
    case Status::Failed: return "failed";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

Direction direction_from_string(const std::string& s) {
  if (s == ">=") return Direction::GreaterEqual;
  if (s == "<=") return Direction::LessEqual;
  if (s == "=") return Direction::Equal;
  fail(ErrorCode::InvalidArgument, "unknown direction '" + s + "'");
}

Status status_from_string(const std::string& s) {
  if (s == "passed") return Status::Passed;
  if (s == "failed") return Status::Failed;
  if (s == "skipped") return Status::Skipped;
  fail(ErrorCode::InvalidArgument, "unknown status '" + s + "'");
}

void grade(VerificationReport& r) {
  if (r.status == Status::Skipped) {
    r.pass = false;
    return;
  }
  bool ok = std::isfinite(r.ratio);
  if (ok) {
    switch (r.direction) {
      case Direction::GreaterEqual: ok = r.ratio >= 1.0 - r.tolerance; break;
      case Direction::LessEqual: ok = r.ratio <= 1.0 + r.tolerance; break;
      case Direction::Equal: ok = std::abs(r.ratio - 1.0) <= r.tolerance; break;
    }
    if (r.equality_case) ok = ok && std::abs(r.ratio - 1.0) <= r.equality_tolerance;
  }
  r.pass = ok;
  r.status = ok ? Status::Passed : Status::Failed;
}

VerificationReport make_report(std::string name, std::string subject, double lhs, double rhs, Direction direction,
                               double tolerance, double error_estimate, bool equality_case,
                               double equality_tolerance) {
  VerificationReport r;
  r.name = std::move(name);
  r.subject = std::move(subject);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.direction = direction;
  r.tolerance = tolerance;
  r.error_estimate = error_estimate;
  r.equality_case = equality_case;
  r.equality_tolerance = equality_tolerance;
  grade(r);
  return r;
}

VerificationReport skipped_report(std::string name, std::string subject, std::string reason) {
  VerificationReport r;
  r.name = std::move(name);
  r.subject = std::move(subject);
  r.status = Status::Skipped;
  r.reason = std::move(reason);
  r.ratio = 1.0;
  return r;
}

}  // namespace pettyfn
