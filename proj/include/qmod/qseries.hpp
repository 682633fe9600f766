#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>

#include "qmod/errors.hpp"

namespace qmod {

/// Weight stored as a doubled integer so half-integral weights stay exact:
/// weight lambda + 1/2 <-> k2 = 2*lambda + 1, integral weight k <-> k2 = 2k.
struct HalfWeight {
  long k2 = 0;

  bool half_integral() const { return (k2 % 2 + 2) % 2 == 1; }
  long lambda() const;  // the lambda of weight lambda + 1/2; requires half_integral()
  std::string str() const;
};

// Truncated Laurent series in q, immutable after construction.
//
// Coefficients are exact integers, or canonical residues in [0, m) when a
// modulus m is attached. The series is known on [valuation, precision):
// stored entries are the nonzero coefficients in that window, everything
// else in the window is zero, and there is no support below `valuation`.
// An all-zero known range is stored with valuation == precision.
class QSeries {
 public:
  using Coeffs = std::map<long, mpz_class>;

  QSeries() : val_(0), prec_(0) {}

  // `valuation_bound` is a support lower bound the caller can certify; the
  // constructor tightens it to the least stored exponent. Entries at or above
  // `precision` are dropped, residues are normalized into [0, m).
  QSeries(Coeffs coeffs, long valuation_bound, long precision,
          std::optional<mpz_class> modulus = std::nullopt);

  static QSeries zero(long precision, std::optional<mpz_class> modulus = std::nullopt);
  static QSeries constant(const mpz_class& c, long precision,
                          std::optional<mpz_class> modulus = std::nullopt);
  static QSeries monomial(const mpz_class& c, long exponent, long precision,
                          std::optional<mpz_class> modulus = std::nullopt);

  long valuation() const { return val_; }
  long precision() const { return prec_; }
  const std::optional<mpz_class>& modulus() const { return mod_; }
  const Coeffs& coeffs() const { return c_; }

  // Coefficient of q^n; throws InsufficientPrecision for n >= precision().
  const mpz_class& coeff(long n) const;

  bool is_zero() const { return c_.empty(); }
  std::size_t term_count() const { return c_.size(); }
  bool has_negative_terms() const { return !c_.empty() && c_.begin()->first < 0; }

  std::string str(long max_terms = 12) const;

 private:
  long val_;
  long prec_;
  Coeffs c_;
  std::optional<mpz_class> mod_;
};

bool same_modulus(const QSeries& a, const QSeries& b);

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);
QSeries negate(const QSeries& a);

// Cauchy product. valuation = v_a + v_b, precision = min(p_a+v_b, p_b+v_a).
QSeries mul(const QSeries& a, const QSeries& b);
QSeries mul_scalar(const QSeries& a, const mpz_class& c);

// Repeated-squaring power; m < 0 routes through invert(). pow(a, 0) is the
// constant 1 known to a's relative precision.
QSeries pow(const QSeries& a, long m);

// Multiplicative inverse on the known range: valuation -v_a, precision
// p_a - 2 v_a. The leading coefficient must be a unit (+-1 exactly, or
// invertible modulo the modulus).
QSeries invert(const QSeries& a);

// Coefficient-wise reduction into [0, m). The input must be exact or carry a
// modulus divisible by m.
QSeries reduce_mod(const QSeries& a, const mpz_class& m);

// True iff coefficients (principal parts included) agree for all exponents
// < n. Requires equal moduli and both precisions >= n.
bool equal_upto(const QSeries& a, const QSeries& b, long n);

QSeries shift(const QSeries& a, long k);         // multiply by q^k
QSeries truncate(const QSeries& a, long prec);   // lower the precision

inline QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b); }
inline QSeries operator-(const QSeries& a, const QSeries& b) { return sub(a, b); }
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }

}  // namespace qmod
