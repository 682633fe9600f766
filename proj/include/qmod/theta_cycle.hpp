#pragma once

#include <optional>
#include <set>
#include <vector>

#include "qmod/qseries.hpp"

namespace qmod {

struct SquareClassReport {
  std::set<long> classes;       // square-free parts of supported exponents
  mpz_class constant;           // a(0) mod ell
  long precision_window = 0;
  bool stable = false;          // classes unchanged at quarter precision
};

struct CycleReport {
  bool converged = false;
  long m_onset = -1;            // least m matching a(0)theta or a(0)theta^ell
  bool limit_pair_verified = false;  // next iterate matches the other member
  std::optional<bool> lambda_congruent;  // lambda = 0 mod (ell-1)/2, when weight known
  long coefficients_checked = 0;
  std::vector<long> windows;    // available comparison window per m
};

// Square-free support classes of f mod ell on (0, precision). The input's
// principal part must vanish mod ell. Stability is the finite-precision
// heuristic: the class set is recomputed on the first quarter of the window
// and compared.
SquareClassReport square_class_support(const QSeries& f, long ell);

// Runs u_iterate(f, ell, m) for m = 0..max_m (each extracted in one pass
// from the full source expansion) and compares against a(0)theta and
// a(0)theta^ell on the available window ceil(prec/ell^m). Convergence
// requires the alternation check at m_onset + 1, so m_onset < max_m.
// `k2`, when given, is the doubled weight of the construction behind f and
// feeds the lambda congruence field.
CycleReport detect_theta_limit(const QSeries& f, long ell, long max_m, long min_window,
                               std::optional<long> k2 = std::nullopt);

// lambda = 0 (mod (ell-1)/2)?
bool weight_congruence_check(long lambda, long ell);

struct WeightBoundVerdict {
  int case_id = 0;       // 1: some class prime to ell; 2/3: all divisible
  long lambda_bar = 0;   // lambda = lambda_bar + iota*(ell-1), 0 <= lambda_bar <= ell-2
  long iota = 0;
  long bound = 0;        // the case's upper bound for lambda_bar
  bool allowed = false;  // lambda_bar <= bound
};

// Evaluates the classification bounds for a square-class-supported form of
// weight lambda + 1/2: which case applies and whether the weight survives it.
WeightBoundVerdict check_weight_bounds(long lambda, long ell, bool all_classes_divisible);

// classes subset of {1, 2, ell, 2*ell}?
bool acr_class_check(const std::set<long>& classes, long ell);

}  // namespace qmod
