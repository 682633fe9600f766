#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmod/qseries.hpp"

namespace qmod {

struct NamedForm {
  QSeries series;
  HalfWeight weight;
  std::string label;
};

// Product of eta(delta*z)^{r_delta} factors. The q-power offset of the
// expansion is sum(delta*r)/24, which must be integral.
struct EtaQuotientSpec {
  std::vector<std::pair<long, long>> factors;  // (delta, r_delta)

  long weight_k2() const;  // sum of exponents = doubled weight
  long offset() const;     // sum(delta*r)/24; throws BadOffset if not integral
  std::string str() const;

  // Parses "1^8,4^16,2^-24".
  static EtaQuotientSpec parse(const std::string& text);
};

struct CuspOrders {
  mpq_class at_infinity;
  mpq_class at_zero;
  mpq_class at_half;
};

// theta = 1 + 2 sum q^{n^2}, doubled weight 1.
NamedForm theta(long prec, std::optional<mpz_class> modulus = std::nullopt);

// sum (-1)^n q^{n^2} = 1 - 2q + 2q^4 - 2q^9 + ...
QSeries theta_alt(long prec, std::optional<mpz_class> modulus = std::nullopt);

// F = sum_{n odd} sigma_1(n) q^n, the weight-2 generator paired with theta.
NamedForm weight2_F(long prec, std::optional<mpz_class> modulus = std::nullopt);

// Exact Bernoulli number B_k (B_1 = -1/2).
mpq_class bernoulli(long k);

// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n,
// k >= 4 even. Without a modulus the normalizing factor must be an integer
// (throws NonIntegralCoefficients otherwise, e.g. k = 12); with a modulus the
// factor is reduced, which requires the denominator to be a unit.
NamedForm eisenstein(long k, long prec, std::optional<mpz_class> modulus = std::nullopt);

NamedForm eta_quotient(const EtaQuotientSpec& spec, long prec,
                       std::optional<mpz_class> modulus = std::nullopt);

// Orders at the three cusps of Gamma_0(4), in local parameters. Requires
// every delta to divide 4. The normalization is self-checked once against
// the expansion of the weight-0 quotient eta(z)^8 eta(4z)^16 / eta(2z)^24
// (order +1 at infinity, degree zero across cusps).
CuspOrders ord_at_cusps_gamma04(const EtaQuotientSpec& spec);

// j = E_4^3 / Delta, valuation -1.
NamedForm jay(long prec, std::optional<mpz_class> modulus = std::nullopt);

// q^{-1} - 2 - sum_{d > 0} t(d) q^d where t(d) is the weighted class sum of
// J = j - 744 over CM points of discriminant -d; doubled weight 3. Built as
// theta_alt(z) E_4(4z) / eta(4z)^6 and cross-checked coefficient by
// coefficient against the quadratic-form trace oracle for d <= 300; on any
// mismatch the builder falls back to oracle-only tabulation.
NamedForm zagier_trace_form(long prec, std::optional<mpz_class> modulus = std::nullopt);

}  // namespace qmod
