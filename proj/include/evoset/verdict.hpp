#pragma once

#include <string_view>

namespace evoset {

enum class Verdict { Pass, Fail, Unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

// FAIL dominates UNKNOWN, which dominates PASS.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Pass;
}

}  // namespace evoset
