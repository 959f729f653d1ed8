#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace psdda {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Validation outcome container: failures are entries, not exceptions.
struct Report {
  std::vector<CheckResult> checks;

  void add(std::string name, bool pass, std::string detail = "") {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  }

  std::size_t failure_count() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return !c.pass; }));
  }

  void print(std::ostream& os) const {
    for (const auto& c : checks) {
      os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
      if (!c.detail.empty()) os << ": " << c.detail;
      os << '\n';
    }
  }
};

}  // namespace psdda
