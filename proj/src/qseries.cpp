#include "qmod/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "qmod/numtheory.hpp"

namespace qmod {

namespace {

const mpz_class kZero = 0;

// Moduli below 2^30 run coefficient arithmetic in uint64 (products stay
// under 2^60, one headroom bit for accumulation).
bool small_modulus(const std::optional<mpz_class>& m) {
  return m && m->fits_ulong_p() && m->get_ui() < (1UL << 30);
}

// gcd of (exponent - valuation) over stored terms; 0 for <= 1 terms.
long key_stride(const QSeries& a) {
  long g = 0;
  for (const auto& [k, c] : a.coeffs()) g = std::gcd(g, k - a.valuation());
  return g;
}

struct FlatTerms {
  std::vector<long> off;  // exponent - valuation, divided by stride
  std::vector<std::uint64_t> cu;
  std::vector<const mpz_class*> cz;
};

FlatTerms flatten(const QSeries& a, long stride, bool as_u64) {
  FlatTerms f;
  f.off.reserve(a.term_count());
  for (const auto& [k, c] : a.coeffs()) {
    f.off.push_back((k - a.valuation()) / stride);
    if (as_u64)
      f.cu.push_back(c.get_ui());
    else
      f.cz.push_back(&c);
  }
  return f;
}

}  // namespace

long HalfWeight::lambda() const {
  if (!half_integral()) throw UsageError("HalfWeight::lambda: weight is integral");
  return (k2 - 1) / 2;
}

std::string HalfWeight::str() const {
  if (k2 % 2 == 0) return std::to_string(k2 / 2);
  return std::to_string(k2) + "/2";
}

QSeries::QSeries(Coeffs coeffs, long valuation_bound, long precision,
                 std::optional<mpz_class> modulus)
    : val_(valuation_bound), prec_(precision), c_(std::move(coeffs)), mod_(std::move(modulus)) {
  if (mod_) {
    if (*mod_ < 2) throw BadModulus("QSeries: modulus must be >= 2");
    for (auto& [k, c] : c_) {
      c %= *mod_;
      if (c < 0) c += *mod_;
    }
  }
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->second == 0 || it->first >= prec_)
      it = c_.erase(it);
    else
      ++it;
  }
  if (c_.empty())
    val_ = prec_;
  else
    val_ = c_.begin()->first;  // tighten: leading zeros are known zeros
}

QSeries QSeries::zero(long precision, std::optional<mpz_class> modulus) {
  return QSeries({}, precision, precision, std::move(modulus));
}

QSeries QSeries::constant(const mpz_class& c, long precision,
                          std::optional<mpz_class> modulus) {
  return monomial(c, 0, precision, std::move(modulus));
}

QSeries QSeries::monomial(const mpz_class& c, long exponent, long precision,
                          std::optional<mpz_class> modulus) {
  Coeffs m;
  m[exponent] = c;
  return QSeries(std::move(m), exponent, precision, std::move(modulus));
}

const mpz_class& QSeries::coeff(long n) const {
  if (n >= prec_)
    throw InsufficientPrecision("QSeries::coeff: exponent " + std::to_string(n) +
                                " is at or beyond precision " + std::to_string(prec_));
  auto it = c_.find(n);
  return it == c_.end() ? kZero : it->second;
}

std::string QSeries::str(long max_terms) const {
  std::ostringstream os;
  long shown = 0;
  for (const auto& [k, c] : c_) {
    if (shown++ == max_terms) {
      os << " + ...";
      break;
    }
    if (shown > 1) os << " + ";
    os << c << "*q^" << k;
  }
  if (c_.empty()) os << "0";
  os << " (prec " << prec_;
  if (mod_) os << ", mod " << *mod_;
  os << ")";
  return os.str();
}

bool same_modulus(const QSeries& a, const QSeries& b) {
  if (a.modulus().has_value() != b.modulus().has_value()) return false;
  return !a.modulus() || *a.modulus() == *b.modulus();
}

static void require_same_modulus(const QSeries& a, const QSeries& b, const char* who) {
  if (!same_modulus(a, b))
    throw ModulusMismatch(std::string(who) + ": operands carry different moduli");
}

QSeries add(const QSeries& a, const QSeries& b) {
  require_same_modulus(a, b, "add");
  long prec = std::min(a.precision(), b.precision());
  QSeries::Coeffs out = a.coeffs();
  for (const auto& [k, c] : b.coeffs()) out[k] += c;
  return QSeries(std::move(out), std::min(a.valuation(), b.valuation()), prec, a.modulus());
}

QSeries negate(const QSeries& a) {
  QSeries::Coeffs out;
  for (const auto& [k, c] : a.coeffs()) out[k] = -c;
  return QSeries(std::move(out), a.valuation(), a.precision(), a.modulus());
}

QSeries sub(const QSeries& a, const QSeries& b) { return add(a, negate(b)); }

QSeries mul(const QSeries& a, const QSeries& b) {
  require_same_modulus(a, b, "mul");
  long v = a.valuation() + b.valuation();
  long prec = std::min(a.precision() + b.valuation(), b.precision() + a.valuation());
  if (a.is_zero() || b.is_zero() || prec <= v) return QSeries::zero(prec, a.modulus());

  long g = std::gcd(key_stride(a), key_stride(b));
  if (g == 0) g = 1;
  long slots = ceil_div(prec - v, g);  // result exponents v + g*t, t < slots

  QSeries::Coeffs out;
  if (small_modulus(a.modulus())) {
    std::uint64_t m = a.modulus()->get_ui();
    FlatTerms fa = flatten(a, g, true), fb = flatten(b, g, true);
    std::vector<std::uint64_t> acc(slots, 0);
    for (std::size_t i = 0; i < fa.off.size(); ++i) {
      long oi = fa.off[i];
      std::uint64_t ci = fa.cu[i];
      for (std::size_t j = 0; j < fb.off.size(); ++j) {
        long t = oi + fb.off[j];
        if (t >= slots) break;  // offsets ascend within each operand
        acc[t] = (acc[t] + ci * fb.cu[j]) % m;
      }
    }
    for (long t = 0; t < slots; ++t)
      if (acc[t]) out[v + g * t] = mpz_class(static_cast<unsigned long>(acc[t]));
  } else {
    FlatTerms fa = flatten(a, g, false), fb = flatten(b, g, false);
    std::vector<mpz_class> acc(slots);
    for (std::size_t i = 0; i < fa.off.size(); ++i) {
      long oi = fa.off[i];
      const mpz_class& ci = *fa.cz[i];
      for (std::size_t j = 0; j < fb.off.size(); ++j) {
        long t = oi + fb.off[j];
        if (t >= slots) break;
        acc[t] += ci * *fb.cz[j];
      }
    }
    for (long t = 0; t < slots; ++t)
      if (acc[t] != 0) out[v + g * t] = std::move(acc[t]);
  }
  return QSeries(std::move(out), v, prec, a.modulus());
}

QSeries mul_scalar(const QSeries& a, const mpz_class& c) {
  QSeries::Coeffs out;
  for (const auto& [k, x] : a.coeffs()) out[k] = x * c;
  return QSeries(std::move(out), a.valuation(), a.precision(), a.modulus());
}

QSeries pow(const QSeries& a, long m) {
  if (m < 0) return pow(invert(a), -m);
  if (m == 0) return QSeries::constant(1, a.precision() - a.valuation(), a.modulus());
  QSeries result = QSeries::constant(1, a.precision() - a.valuation(), a.modulus());
  QSeries base = a;
  bool have = false;
  long e = m;
  while (e) {
    if (e & 1) {
      result = have ? mul(result, base) : base;
      have = true;
    }
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

QSeries invert(const QSeries& a) {
  if (a.is_zero()) throw NonUnitLeading("invert: series is zero on its known range");
  long v = a.valuation();
  long rel = a.precision() - v;  // relative precision, preserved by inversion
  const mpz_class& lead = a.coeffs().begin()->second;

  long g = key_stride(a);
  if (g == 0) {
    // single term c*q^v: inverse is c^{-1} q^{-v}
    mpz_class inv0;
    if (a.modulus()) {
      if (mpz_invert(inv0.get_mpz_t(), lead.get_mpz_t(), a.modulus()->get_mpz_t()) == 0)
        throw NonUnitLeading("invert: leading coefficient not a unit modulo " +
                             a.modulus()->get_str());
    } else {
      if (lead != 1 && lead != -1)
        throw NonUnitLeading("invert: exact leading coefficient must be +-1");
      inv0 = lead;
    }
    return QSeries::monomial(inv0, -v, -v + rel, a.modulus());
  }

  long slots = ceil_div(rel, g);
  QSeries::Coeffs out;
  if (small_modulus(a.modulus())) {
    std::uint64_t m = a.modulus()->get_ui();
    std::uint64_t inv0 = inv_mod_u64(lead.get_ui() % m, m);
    FlatTerms fa = flatten(a, g, true);
    std::vector<std::uint64_t> b(slots, 0);
    b[0] = inv0;
    for (long t = 1; t < slots; ++t) {
      std::uint64_t s = 0;
      for (std::size_t i = 1; i < fa.off.size() && fa.off[i] <= t; ++i)
        s = (s + fa.cu[i] * b[t - fa.off[i]]) % m;
      b[t] = mul_mod_u64(m - s, inv0, m);
    }
    for (long t = 0; t < slots; ++t)
      if (b[t]) out[-v + g * t] = mpz_class(static_cast<unsigned long>(b[t]));
  } else {
    mpz_class inv0;
    if (a.modulus()) {
      if (mpz_invert(inv0.get_mpz_t(), lead.get_mpz_t(), a.modulus()->get_mpz_t()) == 0)
        throw NonUnitLeading("invert: leading coefficient not a unit modulo " +
                             a.modulus()->get_str());
    } else {
      if (lead != 1 && lead != -1)
        throw NonUnitLeading("invert: exact leading coefficient must be +-1");
      inv0 = lead;
    }
    FlatTerms fa = flatten(a, g, false);
    std::vector<mpz_class> b(slots);
    b[0] = inv0;
    mpz_class s;
    for (long t = 1; t < slots; ++t) {
      s = 0;
      for (std::size_t i = 1; i < fa.off.size() && fa.off[i] <= t; ++i)
        s += *fa.cz[i] * b[t - fa.off[i]];
      b[t] = -inv0 * s;
      if (a.modulus()) {
        b[t] %= *a.modulus();
        if (b[t] < 0) b[t] += *a.modulus();
      }
    }
    for (long t = 0; t < slots; ++t)
      if (b[t] != 0) out[-v + g * t] = std::move(b[t]);
  }
  return QSeries(std::move(out), -v, -v + rel, a.modulus());
}

QSeries reduce_mod(const QSeries& a, const mpz_class& m) {
  if (m < 2) throw BadModulus("reduce_mod: modulus must be >= 2");
  if (a.modulus() && *a.modulus() % m != 0)
    throw BadModulus("reduce_mod: " + m.get_str() + " does not divide the existing modulus " +
                     a.modulus()->get_str());
  return QSeries(a.coeffs(), a.valuation(), a.precision(), m);
}

bool equal_upto(const QSeries& a, const QSeries& b, long n) {
  require_same_modulus(a, b, "equal_upto");
  if (a.precision() < n || b.precision() < n)
    throw InsufficientPrecision("equal_upto: need precision >= " + std::to_string(n));
  auto ia = a.coeffs().begin(), ib = b.coeffs().begin();
  while (true) {
    bool ea = (ia == a.coeffs().end() || ia->first >= n);
    bool eb = (ib == b.coeffs().end() || ib->first >= n);
    if (ea && eb) return true;
    if (ea != eb) return false;
    if (ia->first != ib->first || ia->second != ib->second) return false;
    ++ia;
    ++ib;
  }
}

QSeries shift(const QSeries& a, long k) {
  QSeries::Coeffs out;
  for (const auto& [e, c] : a.coeffs()) out[e + k] = c;
  return QSeries(std::move(out), a.valuation() + k, a.precision() + k, a.modulus());
}

QSeries truncate(const QSeries& a, long prec) {
  if (prec > a.precision())
    throw InsufficientPrecision("truncate: cannot raise precision from " +
                                std::to_string(a.precision()) + " to " + std::to_string(prec));
  return QSeries(a.coeffs(), std::min(a.valuation(), prec), prec, a.modulus());
}

}  // namespace qmod
