#pragma once

// The self-contained verification battery: scaled-down quantitative checks of
// the dimension-equivalence results plus exact property suites, with pinned
// seeds and budgets. Quick mode shrinks sample sizes and solver budgets but
// exercises identical code paths.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dimlab {

struct VerifyCase {
  std::string name;
  double expected = 0.0;
  double estimated = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  bool overall = false;

  nlohmann::json to_json() const;
  std::string to_json_text() const;  // canonical bytes for determinism checks
  void write_csv(std::ostream& os) const;
};

// progress, when non-null, receives one line per completed case.
VerifyReport run_verify(std::uint64_t seed, bool quick, std::ostream* progress = nullptr,
                        bool include_self_check = true);

}  // namespace dimlab
