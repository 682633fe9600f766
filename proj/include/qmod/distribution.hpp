#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmod/qseries.hpp"

namespace qmod {

// Residue-class counts at checkpoints with growth diagnostics. The verdict
// is finite-sample evidence against the expected growth shapes (sqrt(X)/log X
// per nonzero residue, X for the zero residue), never a proof; `surrogate`
// carries that caveat into serialized output.
struct DistributionReport {
  long modulus = 0;
  std::vector<long> checkpoints;
  // counts[r][i] = #{0 <= n <= checkpoints[i] : a(n) = r (mod modulus)}
  std::vector<std::vector<long>> counts;
  std::vector<std::vector<double>> normalized;  // r=0: count/X; else count/(sqrt X/log X)
  std::vector<bool> consistent;                 // per residue
  std::string surrogate =
      "finite-sample evidence only: growth thresholds are surrogates for an "
      "ineffective asymptotic bound";
};

// Exact counts over a residue stream indexed from 0. The stream must cover
// [0, max checkpoint] (StreamTooShort otherwise). Residues must already lie
// in [0, modulus).
DistributionReport residue_counts(const std::vector<long>& residues, long modulus,
                                  const std::vector<long>& checkpoints);

// The ell-free extraction sum_{n>=1, ell coprime to n} a(ell^m n) q^n
// (mod ell^j): zero at multiples of ell, zero constant term. Equals
// u_iterate(f, ell, m) - v_op(u_iterate(f, ell, m+1), ell) mod ell^j on the
// shared window for holomorphic f.
QSeries treneer_split(const QSeries& f, long ell, long m, long j);

// residue_counts over the holomorphic-part coefficient stream of f mod ell^j.
DistributionReport well_distribution_scan(const QSeries& f, long ell, long j,
                                          const std::vector<long>& checkpoints);

// Default geometric checkpoint ladder {2500, 5000, 10000, 20000, 50000}
// capped by the available stream length (max index max_x).
std::vector<long> default_checkpoints(long max_x);

}  // namespace qmod
