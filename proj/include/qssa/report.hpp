#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qssa {

/// Default tolerance coefficient: tol = kDefaultRelTol * max(1, |lhs|, |rhs|).
inline constexpr double kDefaultRelTol = 1e-8;

/// Direction of the claimed inequality.
enum class Relation { le, ge };

enum class Status { ok, skipped, expected_violation };

inline const char* to_string(Relation r) { return r == Relation::le ? "le" : "ge"; }

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::skipped: return "skipped";
    case Status::expected_violation: return "expected-violation";
  }
  return "ok";
}

using MetaValue = std::variant<double, std::int64_t, std::string>;

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs for `le` claims, lhs - rhs for `ge` claims.
  double slack = 0.0;
  double tol = 0.0;
  bool pass = false;
  Relation relation = Relation::le;
  Status status = Status::ok;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;
  std::map<std::string, MetaValue> meta;

  /// The verdict implied by lhs, rhs, relation, tol and status alone.
  bool recompute_pass() const {
    if (status == Status::skipped) return false;
    const double s = relation == Relation::le ? rhs - lhs : lhs - rhs;
    return s >= -tol;
  }
};

inline double default_tol(double lhs, double rhs, double rel_tol = kDefaultRelTol) {
  return rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

/// Report for the claim `lhs <= rhs` (or `lhs >= rhs`).
inline InequalityReport make_report(std::string name, double lhs, double rhs,
                                    Relation relation = Relation::le,
                                    double rel_tol = kDefaultRelTol) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.relation = relation;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    r.status = Status::skipped;
    r.slack = std::nan("");
    r.tol = rel_tol;
    r.meta["skip_reason"] = std::string("support");
    return r;
  }
  r.slack = relation == Relation::le ? rhs - lhs : lhs - rhs;
  r.tol = default_tol(lhs, rhs, rel_tol);
  r.pass = r.slack >= -r.tol;
  return r;
}

}  // namespace qssa
