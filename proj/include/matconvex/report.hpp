#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matconvex/convexity.hpp"
#include "matconvex/matrix_io.hpp"

namespace matconvex {

/// Record statuses. Verdict-style checks use certified / violated /
/// inconclusive; property checks use pass / fail.
namespace check_status {
inline constexpr const char* kCertified = "certified";
inline constexpr const char* kViolated = "violated";
inline constexpr const char* kInconclusive = "inconclusive";
inline constexpr const char* kPass = "pass";
inline constexpr const char* kFail = "fail";
}  // namespace check_status

/// One check. `margin` is the headline quantity: the worst test margin for a
/// verdict, or the slack against the acceptance threshold (>= 0 passes) for a
/// property check. NaN is written as null.
struct CheckRecord {
  std::string name;
  std::string status;
  double margin = 0.0;
  std::optional<Witness> witness;
  json details = json::object();
  std::optional<double> seconds;

  bool failed() const;
};

CheckRecord record_from_verdict(std::string name, const Verdict& v, const Tolerances& tol);
/// pass iff slack >= 0.
CheckRecord record_from_slack(std::string name, double slack, json details = json::object());

struct Report {
  static constexpr int kSchemaVersion = 1;

  std::string command;
  json config = json::object();
  std::vector<CheckRecord> checks;

  /// violated > fail > inconclusive > certified (all certified) > pass.
  std::string overall() const;
  /// 1 if some check is violated or failed, else 0.
  int exit_code() const;

  json to_json(bool include_timing = false) const;
  std::string to_text(bool include_timing = false) const;
  /// Rejects unknown fields and a foreign schema version with ParseError.
  static Report from_json(const json& doc);
};

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& doc);
TestKind test_kind_from_string(const std::string& s);

}  // namespace matconvex
