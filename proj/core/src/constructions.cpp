#include "qfast/constructions.hpp"

#include <algorithm>

namespace qfast {

bool ConstructionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

const CheckLine* ConstructionReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace qfast
