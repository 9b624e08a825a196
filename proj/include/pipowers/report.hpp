#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pipowers/bigreal.hpp"

namespace pipowers {

enum class ToleranceKind { absolute, relative };

inline const char* to_string(ToleranceKind kind) {
  return kind == ToleranceKind::absolute ? "absolute" : "relative";
}

/// One identity check: both sides, their discrepancy, and the verdict.
struct VerificationReport {
  std::string identity_name;
  BigReal lhs;
  BigReal rhs;
  BigReal abs_diff;
  BigReal rel_diff;
  BigReal tolerance;
  ToleranceKind tolerance_kind = ToleranceKind::absolute;
  bool pass = false;
  /// Where the tolerance comes from (tail bound, rounding bound, exactness).
  std::string tolerance_provenance;
  /// Parameter point and extra diagnostics, in insertion order.
  std::vector<std::pair<std::string, std::string>> metadata;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : metadata)
      if (k == key) return &v;
    return nullptr;
  }

  /// "k=2 x=1/4 ..." built from metadata keys other than diagnostics.
  std::string parameters() const {
    std::string s;
    for (const auto& [k, v] : metadata) {
      if (k.rfind("diag.", 0) == 0 || k == "tolerance_kind") continue;
      if (!s.empty()) s += ' ';
      s += k + "=" + v;
    }
    return s;
  }
};

/// Fills diffs and the verdict: pass iff the diff of the chosen kind is within tolerance.
inline VerificationReport make_report(std::string name, BigReal lhs, BigReal rhs,
                                      BigReal tolerance, ToleranceKind kind,
                                      std::string provenance,
                                      std::vector<std::pair<std::string, std::string>> metadata) {
  VerificationReport r;
  r.identity_name = std::move(name);
  r.abs_diff = abs(lhs - rhs);
  BigReal scale = max(abs(lhs), abs(rhs));
  r.rel_diff = scale.is_zero() ? r.abs_diff : r.abs_diff / scale;
  const BigReal& measured = kind == ToleranceKind::absolute ? r.abs_diff : r.rel_diff;
  r.pass = measured.is_finite() && measured <= tolerance;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.tolerance = std::move(tolerance);
  r.tolerance_kind = kind;
  r.tolerance_provenance = std::move(provenance);
  r.metadata = std::move(metadata);
  r.metadata.emplace_back("tolerance_kind", to_string(kind));
  return r;
}

}  // namespace pipowers
