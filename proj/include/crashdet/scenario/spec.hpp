#pragma once

#include <map>
#include <optional>
#include <string>

#include "crashdet/core/errors.hpp"

namespace crashdet::scenario {

enum class SetId { A1, A2, B1, B2, B3 };

inline const char* set_name(SetId s) {
  switch (s) {
    case SetId::A1: return "A.1";
    case SetId::A2: return "A.2";
    case SetId::B1: return "B.1";
    case SetId::B2: return "B.2";
    case SetId::B3: return "B.3";
  }
  return "?";
}

inline std::optional<SetId> parse_set(const std::string& s) {
  if (s == "A.1") return SetId::A1;
  if (s == "A.2") return SetId::A2;
  if (s == "B.1") return SetId::B1;
  if (s == "B.2") return SetId::B2;
  if (s == "B.3") return SetId::B3;
  return std::nullopt;
}

inline bool is_crash_set(SetId s) { return s == SetId::B1 || s == SetId::B2 || s == SetId::B3; }

// One parametrized simulation case. Parameters are stored by name so the
// manifest is self-describing; the lowering into a SimEnv interprets them
// per set family.
struct ScenarioSpec {
  std::string id;
  SetId set = SetId::A1;
  std::map<std::string, double> params;
  std::string iso_code;  // set B.3 only
  std::uint64_t seed = 0;
  double horizon = 4.0;  // s

  bool crash_class() const { return is_crash_set(set); }

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) {
      throw ValidationError("scenario " + id + " missing parameter '" + name + "'");
    }
    return it->second;
  }

  double param_or(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }
};

}  // namespace crashdet::scenario
