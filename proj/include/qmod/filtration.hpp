#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmod/qseries.hpp"

namespace qmod {

// One term of a membership witness: coeff * theta^theta_exp * F^f_exp.
struct WitnessTerm {
  long theta_exp = 0;
  long f_exp = 0;
  std::uint64_t coeff = 0;
};

struct FiltrationResult {
  long omega2 = 0;  // doubled filtration weight; 0 means congruent to a constant
  std::vector<WitnessTerm> witness;
  long checked_precision = 0;
  std::vector<long> candidate_chain;  // doubled weights tested, ascending
};

// Congruence-testing precision for doubled weights up to k2_max:
// floor(k2_max/4) + 16 (index-6 Sturm bound in doubled units plus margin).
long sturm_precision(long k2_max);

// All monomials theta^a F^b with a + 4b = k2, each expanded to prec;
// ordered by ascending F-exponent (= ascending valuation).
std::vector<QSeries> graded_basis(long k2, long prec,
                                  std::optional<mpz_class> modulus = std::nullopt);

// Expresses f (mod a prime ell >= 5) in graded_basis(k2) over F_ell if
// possible, by exact row reduction on the first `prec` coefficients
// (default sturm_precision(k2)). Requires valuation >= 0.
std::optional<std::vector<WitnessTerm>> is_congruent_to_weight(const QSeries& f, long k2,
                                                               long prec = -1);

// Least doubled weight k2' = k2 - 2t(ell-1) >= 0 admitting a witness.
// Throws ZeroInput for the zero series and BasisMismatch when even k2
// itself admits none.
FiltrationResult filtration(const QSeries& f, long k2, long extra_precision = 0);

// A doubled weight at which f|U_ell is again congruent to a form, given a
// construction weight k2 for f: the least weight in the forced congruence
// class that dominates both k2 and the U_ell filtration bound.
long u_image_weight_k2(long k2, long ell);

struct LawReport {
  std::string law;
  long samples = 0;
  long failures = 0;
  long vacuous = 0;  // instances where the law's hypothesis did not apply
  std::vector<std::string> counterexamples;
  bool pass() const { return failures == 0; }
};

struct FiltrationPropsReport {
  long ell = 0;
  long sample_count = 0;
  std::vector<LawReport> laws;
  bool all_pass() const;
};

// Property-checks the filtration laws on random F_ell-combinations of
// graded monomials: theta-shift additivity, power multiplicativity, the
// U_ell congruence and weight-class laws, the U_ell upper bound, and strict
// descent above weight ell+1.
FiltrationPropsReport verify_filtration_props(long ell, long sample_count,
                                              std::uint64_t seed = 0);

}  // namespace qmod
