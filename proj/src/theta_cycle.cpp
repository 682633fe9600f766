#include "qmod/theta_cycle.hpp"

#include <algorithm>

#include "qmod/forms.hpp"
#include "qmod/numtheory.hpp"
#include "qmod/operators.hpp"

namespace qmod {

namespace {

QSeries to_mod_ell(const QSeries& f, long ell) {
  if (ell < 5 || !is_prime_long(ell)) throw UsageError("need a prime ell >= 5");
  return reduce_mod(f, ell);
}

std::set<long> classes_below(const QSeries& f, long window) {
  std::set<long> classes;
  for (const auto& [e, c] : f.coeffs())
    if (e > 0 && e < window) classes.insert(squarefree_part(e));
  return classes;
}

}  // namespace

SquareClassReport square_class_support(const QSeries& f, long ell) {
  QSeries g = to_mod_ell(f, ell);
  if (g.has_negative_terms())
    throw PrincipalPartNonzero("square_class_support: principal part nonzero mod " +
                               std::to_string(ell));
  SquareClassReport report;
  report.precision_window = g.precision();
  report.constant = g.precision() > 0 ? g.coeff(0) : 0;
  report.classes = classes_below(g, g.precision());
  report.stable = report.classes == classes_below(g, g.precision() / 4);
  return report;
}

CycleReport detect_theta_limit(const QSeries& f, long ell, long max_m, long min_window,
                               std::optional<long> k2) {
  QSeries g = to_mod_ell(f, ell);
  if (max_m < 0) throw UsageError("detect_theta_limit: max_m must be >= 0");
  long window_at_max = ceil_div(g.precision(), checked_pow_long(ell, max_m));
  if (window_at_max < min_window)
    throw PrecisionExhausted("detect_theta_limit: window " + std::to_string(window_at_max) +
                             " at m = " + std::to_string(max_m) + " is below the requested " +
                             std::to_string(min_window));

  CycleReport report;
  if (k2) {
    if (*k2 % 2 == 0)
      throw UsageError("detect_theta_limit: k2 must be odd (half-integral weight)");
    report.lambda_congruent = weight_congruence_check((*k2 - 1) / 2, ell);
  }

  mpz_class a0 = g.precision() > 0 && g.valuation() <= 0 ? g.coeff(0) : 0;
  long full = g.precision();
  QSeries member_theta = mul_scalar(theta(full, mpz_class(ell)).series, a0);
  QSeries member_theta_ell = mul_scalar(v_op(theta(ceil_div(full - 1, ell) + 1,
                                                   mpz_class(ell)).series, ell), a0);

  auto matches = [&](const QSeries& it, long window, const QSeries& member) {
    return equal_upto(it, truncate(member, window), window);
  };

  long onset_member = -1;  // 0: a(0)theta, 1: a(0)theta^ell
  for (long m = 0; m <= max_m; ++m) {
    QSeries it = u_iterate(g, ell, m);
    long window = it.precision();
    report.windows.push_back(window);
    report.coefficients_checked += window;
    if (report.converged || onset_member >= 0) continue;
    int hit = matches(it, window, member_theta)       ? 0
              : matches(it, window, member_theta_ell) ? 1
                                                      : -1;
    if (hit < 0) continue;
    report.m_onset = m;
    onset_member = hit;
    if (m + 1 <= max_m) {
      QSeries next = u_iterate(g, ell, m + 1);
      const QSeries& other = (hit == 0) ? member_theta_ell : member_theta;
      report.limit_pair_verified = matches(next, next.precision(), other);
      report.converged = report.limit_pair_verified;
    }
  }
  return report;
}

bool weight_congruence_check(long lambda, long ell) {
  if (ell < 5 || !is_prime_long(ell)) throw UsageError("weight_congruence_check: bad ell");
  long h = (ell - 1) / 2;
  return ((lambda % h) + h) % h == 0;
}

WeightBoundVerdict check_weight_bounds(long lambda, long ell, bool all_classes_divisible) {
  if (lambda < 2) throw UsageError("check_weight_bounds: lambda must be >= 2");
  if (ell < 5 || !is_prime_long(ell)) throw UsageError("check_weight_bounds: bad ell");
  WeightBoundVerdict v;
  v.iota = lambda / (ell - 1);
  v.lambda_bar = lambda % (ell - 1);
  if (!all_classes_divisible) {
    v.case_id = 1;
    v.bound = 2 * v.iota + 1;
  } else if (v.lambda_bar <= (ell - 3) / 2) {
    v.case_id = 2;
    v.bound = v.iota - (ell + 1) / 2;
  } else {
    v.case_id = 3;
    v.bound = v.iota + (ell - 1) / 2;
  }
  v.allowed = v.lambda_bar <= v.bound;
  return v;
}

bool acr_class_check(const std::set<long>& classes, long ell) {
  for (long d : classes)
    if (d != 1 && d != 2 && d != ell && d != 2 * ell) return false;
  return true;
}

}  // namespace qmod
