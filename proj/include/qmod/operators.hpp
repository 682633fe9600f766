#pragma once

#include <optional>

#include "qmod/qseries.hpp"

namespace qmod {

// U_p: picks every p-th coefficient, (sum a(n) q^n)|U_p = sum a(pn) q^n.
// Works on principal parts too; valuation ceil(v/p), precision ceil(prec/p).
QSeries u_op(const QSeries& f, long p);

// V_p: exponent dilation q -> q^p. valuation p*v, precision p*(prec-1)+1.
QSeries v_op(const QSeries& f, long p);

// Theta operator q d/dq: multiplies the coefficient of q^n by n.
QSeries theta_op(const QSeries& f);

// f|U_{ell^m} by single-pass index extraction from the source expansion
// (never m truncating passes). Throws PrecisionExhausted if the resulting
// precision ceil(prec/ell^m) drops below 2.
QSeries u_iterate(const QSeries& f, long ell, long m);

// Twice the cusp-form combination
//   (ell-1) Theta(theta^3) E_{ell-1} - (3/2) Theta(E_{ell-1}) theta^3,
// doubled so all coefficients are integers (callers account for the factor
// 2; the CLI reports it as scaled_by). Doubled weight 2(ell+1)+3. For ell
// with a non-integral E_{ell-1} normalization (ell = 13) a modulus is
// required.
QSeries theta_cuspform_combination(long ell, long prec,
                                   std::optional<mpz_class> modulus = std::nullopt);

}  // namespace qmod
