#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmod/json_io.hpp"

namespace qmod {

enum class Budget { Full, Quick };
enum class Fault { None, ThetaFlip };

struct VerifyOptions {
  std::vector<long> ells{5, 7};  // drives the randomized and cycle families
  Budget budget = Budget::Full;
  std::uint64_t seed = 0;
  int jobs = 1;
  Fault fault = Fault::None;  // test hook: perturbs theta inside the identity checks
};

struct CheckResult {
  std::string id;
  std::string anchor;  // the identity or bound the check exercises
  bool pass = false;
  bool skipped = false;
  std::string details;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  bool any_skipped() const;
};

// Runs the full identity/property suite: operator identities, the theta
// operator head and cusp-form combination, Eisenstein reduction, filtration
// laws, theta-cycle limits, singular-moduli traces, residue distribution,
// and the ell-free extraction identity.
VerifyReport run_verify(const VerifyOptions& opts);

Json verify_report_to_json(const VerifyReport& report, const VerifyOptions& opts);

}  // namespace qmod
