#include "qmod/operators.hpp"

#include "qmod/forms.hpp"
#include "qmod/numtheory.hpp"

namespace qmod {

QSeries u_op(const QSeries& f, long p) {
  if (p < 1) throw UsageError("u_op: p must be positive");
  QSeries::Coeffs out;
  for (const auto& [e, c] : f.coeffs())
    if (e % p == 0) out[e / p] = c;
  return QSeries(std::move(out), ceil_div(f.valuation(), p), ceil_div(f.precision(), p),
                 f.modulus());
}

QSeries v_op(const QSeries& f, long p) {
  if (p < 1) throw UsageError("v_op: p must be positive");
  QSeries::Coeffs out;
  for (const auto& [e, c] : f.coeffs()) out[e * p] = c;
  return QSeries(std::move(out), p * f.valuation(), p * (f.precision() - 1) + 1, f.modulus());
}

QSeries theta_op(const QSeries& f) {
  QSeries::Coeffs out;
  for (const auto& [e, c] : f.coeffs()) out[e] = e * c;
  return QSeries(std::move(out), f.valuation(), f.precision(), f.modulus());
}

QSeries u_iterate(const QSeries& f, long ell, long m) {
  if (m < 0) throw UsageError("u_iterate: m must be >= 0");
  if (m == 0) return f;
  long pm = checked_pow_long(ell, m);
  QSeries out = u_op(f, pm);
  if (out.precision() < 2)
    throw PrecisionExhausted("u_iterate: source precision " + std::to_string(f.precision()) +
                             " leaves fewer than 2 coefficients after U_" +
                             std::to_string(ell) + "^" + std::to_string(m));
  return out;
}

QSeries theta_cuspform_combination(long ell, long prec, std::optional<mpz_class> modulus) {
  if (ell < 5) throw UsageError("theta_cuspform_combination: need ell >= 5");
  QSeries th3 = pow(theta(prec, modulus).series, 3);
  QSeries e = eisenstein(ell - 1, prec, modulus).series;
  QSeries lhs = mul_scalar(mul(theta_op(th3), e), 2 * (ell - 1));
  QSeries rhs = mul_scalar(mul(theta_op(e), th3), 3);
  return sub(lhs, rhs);
}

}  // namespace qmod
