#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psauction/contracts.hpp"

namespace psauction {

enum class VerifyScope { fast, all };

struct VerifyLine {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  double wall_seconds = 0.0;
  bool all_pass() const {
    for (const VerifyLine& l : lines) {
      if (!l.pass) return false;
    }
    return true;
  }
};

struct VerifyOptions {
  VerifyScope scope = VerifyScope::fast;
  std::uint64_t seed = 20110214;
  // Additional sharing rules that must pass the admissibility check; lets a
  // caller inject a tampered contract and watch the suite flag it.
  std::vector<SharingContract> extra_admissibility_checks;
};

// Executes every module invariant at the scope's sample sizes and returns one
// line per invariant.
VerifyReport verify_suite(const VerifyOptions& options = {});

void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace psauction
