#pragma once

// JSON encodings of PiComputation and VerificationReport. Numbers travel as
// decimal strings that read back to the same binary value at the stated
// precision.

#include <json.hpp>

#include "pipowers/pi_engine.hpp"
#include "pipowers/report.hpp"

namespace pipowers {

inline nlohmann::ordered_json to_json(const PiComputation& c) {
  return {{"k", c.k},
          {"x", to_string(c.x)},
          {"N", c.N},
          {"precision_bits", c.precision_bits},
          {"value", c.value.to_string()},
          {"reference", c.reference.to_string()},
          {"abs_error", c.abs_error.to_string()},
          {"guaranteed_bound", c.guaranteed_bound.to_string()},
          {"correct_digits", c.correct_digits},
          {"pass", c.pass}};
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  return {{"identity", r.identity_name},
          {"lhs", r.lhs.to_string()},
          {"rhs", r.rhs.to_string()},
          {"abs_diff", r.abs_diff.to_string()},
          {"rel_diff", r.rel_diff.to_string()},
          {"tolerance", r.tolerance.to_string()},
          {"tolerance_kind", to_string(r.tolerance_kind)},
          {"tolerance_provenance", r.tolerance_provenance},
          {"pass", r.pass},
          {"metadata", std::move(meta)}};
}

}  // namespace pipowers
