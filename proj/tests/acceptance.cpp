// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria are pinned here at their stated tolerances (exact equalities
// unless a bound is written out) and run with the default seed.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "qmod/verify.hpp"

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> check_ids;
};

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();

  qmod::VerifyOptions opts;  // defaults: ells {5,7}, full budget, seed 0
  opts.jobs = 4;

  qmod::VerifyReport first = qmod::run_verify(opts);
  qmod::VerifyReport second = qmod::run_verify(opts);
  std::string dump_a = qmod::verify_report_to_json(first, opts).dump(2);
  std::string dump_b = qmod::verify_report_to_json(second, opts).dump(2);

  std::map<std::string, const qmod::CheckResult*> by_id;
  for (const auto& c : first.checks) by_id[c.id] = &c;

  const std::vector<Criterion> criteria = {
      {1, "operator identities theta|U_l = theta^l and theta^l|U_l = theta (mod l), "
          "l in {5,7,11,13}, 200 coefficients, exact",
       {"u_theta_alternation"}},
      {2, "Theta(theta^3) head (6,24,24) exact; combination has zero constant term and "
          "reduces to its Theta(theta^3) multiple mod l on 50 coefficients, l in {5,7}",
       {"theta_op_head", "cuspform_combination"}},
      {3, "E_{l-1} = 1 (mod l) on 200 coefficients, l in {5,7,11,13}",
       {"eisenstein_unit"}},
      {4, "filtration laws, 100 randomized instances per law at l in {5,7}, zero "
          "failures; fixed points omega(theta E) = 1/2, omega(E) = 0",
       {"filtration_laws", "filtration_fixed"}},
      {5, "theta-cycle convergence with m_onset <= 3 and verified alternation on a "
          "20-coefficient window; lambda congruence on every converged case",
       {"theta_cycle_limits"}},
      {6, "t(3) = -248, t(4) = 492 exact; oracle/series agreement for all valid "
          "d <= 300 at tolerance 0; rounding margin < 1e-10",
       {"trace_fixed", "trace_zagier_agreement", "trace_rounding_margin"}},
      {7, "t(d) residue scans mod 5 and 7 to X = 20000: every class count >= 50, "
          "zero class >= 1.8x between X = 10000 and 20000, all verdicts consistent",
       {"trace_distribution_mod5", "trace_distribution_mod7"}},
      {8, "l-free extraction equals the U/V composite exactly on 50 random series and "
          "vanishes at multiples of l",
       {"treneer_identity"}},
      {9, "repeated verify runs produce byte-identical reports", {"determinism"}},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    bool pass = true;
    std::string note;
    if (cr.number == 9) {
      pass = (dump_a == dump_b);
      const auto* det = by_id.count("determinism") ? by_id.at("determinism") : nullptr;
      pass = pass && det && det->pass;
      note = pass ? "two full runs compared equal" : "report bytes differ between runs";
    } else {
      for (const auto& id : cr.check_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end() || it->second->skipped || !it->second->pass) {
          pass = false;
          note += id + (it == by_id.end()  ? " missing; "
                        : it->second->skipped ? " skipped; "
                                              : " failed: " + it->second->details + "; ");
        }
      }
    }
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", cr.number,
                cr.title.c_str(), note.empty() ? "" : " -- ", note.c_str());
  }

  double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failures,
              criteria.size(), elapsed);
  return failures == 0 ? 0 : 1;
}
