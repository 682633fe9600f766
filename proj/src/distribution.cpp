#include "qmod/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "qmod/numtheory.hpp"

namespace qmod {

std::vector<long> default_checkpoints(long max_x) {
  std::vector<long> cps;
  for (long x : {2500L, 5000L, 10000L, 20000L, 50000L})
    if (x <= max_x) cps.push_back(x);
  if (cps.empty() && max_x >= 1) cps.push_back(max_x);
  return cps;
}

DistributionReport residue_counts(const std::vector<long>& residues, long modulus,
                                  const std::vector<long>& checkpoints) {
  if (modulus < 2) throw BadModulus("residue_counts: modulus must be >= 2");
  if (checkpoints.empty()) throw UsageError("residue_counts: no checkpoints");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw UsageError("residue_counts: checkpoints must ascend");
  long max_x = checkpoints.back();
  if (static_cast<long>(residues.size()) <= max_x)
    throw StreamTooShort("residue_counts: stream of length " +
                         std::to_string(residues.size()) + " does not cover X = " +
                         std::to_string(max_x));

  DistributionReport rep;
  rep.modulus = modulus;
  rep.checkpoints = checkpoints;
  rep.counts.assign(modulus, std::vector<long>(checkpoints.size(), 0));
  std::vector<long> running(modulus, 0);
  std::size_t ci = 0;
  for (long n = 0; n <= max_x && ci < checkpoints.size(); ++n) {
    long r = residues[n];
    if (r < 0 || r >= modulus) throw UsageError("residue_counts: residue out of range");
    ++running[r];
    while (ci < checkpoints.size() && checkpoints[ci] == n) {
      for (long q = 0; q < modulus; ++q) rep.counts[q][ci] = running[q];
      ++ci;
    }
  }

  rep.normalized.assign(modulus, std::vector<double>(checkpoints.size(), 0.0));
  for (long r = 0; r < modulus; ++r)
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      double x = static_cast<double>(checkpoints[i]);
      double scale = (r == 0) ? x : std::sqrt(x) / std::log(x);
      rep.normalized[r][i] = rep.counts[r][i] / scale;
    }

  // Consistency rule: the class must be populated by X = 5000 (or by the
  // first checkpoint when all checkpoints sit above 5000), and each of the
  // last three normalized values must hold at least half the normalized
  // value at the first populated checkpoint.
  long deadline = std::max(5000L, checkpoints.front());
  rep.consistent.assign(modulus, false);
  for (long r = 0; r < modulus; ++r) {
    std::size_t first_nonzero = checkpoints.size();
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
      if (rep.counts[r][i] > 0) {
        first_nonzero = i;
        break;
      }
    if (first_nonzero == checkpoints.size() || checkpoints[first_nonzero] > deadline) continue;
    double base = rep.normalized[r][first_nonzero];
    bool ok = true;
    std::size_t tail = checkpoints.size() >= 3 ? checkpoints.size() - 3 : 0;
    for (std::size_t i = tail; i < checkpoints.size(); ++i)
      ok = ok && rep.normalized[r][i] >= 0.5 * base;
    rep.consistent[r] = ok;
  }
  return rep;
}

QSeries treneer_split(const QSeries& f, long ell, long m, long j) {
  if (ell < 5 || !is_prime_long(ell)) throw UsageError("treneer_split: need a prime ell >= 5");
  if (m < 0 || j < 1) throw UsageError("treneer_split: need m >= 0 and j >= 1");
  mpz_class elj;
  mpz_ui_pow_ui(elj.get_mpz_t(), static_cast<unsigned long>(ell),
                static_cast<unsigned long>(j));
  QSeries g = reduce_mod(f, elj);

  long pm = checked_pow_long(ell, m);
  long out_prec = ceil_div(g.precision(), pm);
  if (ceil_div(g.precision(), checked_pow_long(ell, m + 1)) < 2)
    throw PrecisionExhausted("treneer_split: precision " + std::to_string(f.precision()) +
                             " exhausted at ell^" + std::to_string(m + 1));

  QSeries::Coeffs out;
  for (const auto& [e, c] : g.coeffs()) {
    if (e % pm != 0) continue;
    long n = e / pm;
    if (n < 1) {
      if (n < 0)
        throw PrincipalPartNonzero("treneer_split: principal-part coefficient at q^" +
                                   std::to_string(e) + " survives mod ell^j");
      continue;  // the n = 0 term is dropped by construction
    }
    if (n % ell == 0) continue;
    out[n] = c;
  }
  return QSeries(std::move(out), 1, out_prec, elj);
}

DistributionReport well_distribution_scan(const QSeries& f, long ell, long j,
                                          const std::vector<long>& checkpoints) {
  if (ell < 2 || j < 1) throw UsageError("well_distribution_scan: need ell >= 2, j >= 1");
  mpz_class elj;
  mpz_ui_pow_ui(elj.get_mpz_t(), static_cast<unsigned long>(ell),
                static_cast<unsigned long>(j));
  QSeries g = reduce_mod(f, elj);
  long modulus = elj.get_si();
  if (checkpoints.empty()) throw UsageError("well_distribution_scan: no checkpoints");
  long max_x = checkpoints.back();
  if (g.precision() <= max_x)
    throw StreamTooShort("well_distribution_scan: precision " +
                         std::to_string(g.precision()) + " does not cover X = " +
                         std::to_string(max_x));
  std::vector<long> stream(max_x + 1, 0);
  for (const auto& [e, c] : g.coeffs())
    if (e >= 0 && e <= max_x) stream[e] = c.get_si();
  return residue_counts(stream, modulus, checkpoints);
}

}  // namespace qmod
