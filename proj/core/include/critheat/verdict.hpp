#pragma once

#include <string>
#include <vector>

namespace critheat {

// One checked inequality or identity.
struct Verdict {
  std::string check;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  std::string anchor;
};

inline bool all_pass(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (!v.pass) return false;
  return true;
}

}  // namespace critheat
