#include "qmod/singular_moduli.hpp"

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "qmod/errors.hpp"
#include "qmod/forms.hpp"
#include "qmod/numtheory.hpp"

namespace qmod {

namespace {

constexpr long kSeriesTerms = 100;  // j-expansion truncated at q^kSeriesTerms

// Exact j-expansion coefficients c(-1..kSeriesTerms), shared by every
// evaluation so the oracle and the q-series builders ride one code path.
const std::vector<mpz_class>& j_coefficients() {
  static const std::vector<mpz_class> coeffs = [] {
    QSeries j = jay(kSeriesTerms + 1).series;
    std::vector<mpz_class> v;
    v.reserve(kSeriesTerms + 2);
    for (long n = -1; n <= kSeriesTerms; ++n) v.push_back(j.coeff(n));
    return v;
  }();
  return coeffs;
}

// Minimal RAII mpfr real; just enough surface for the CM evaluation.
class Real {
 public:
  explicit Real(mpfr_prec_t bits) { mpfr_init2(x_, bits); }
  Real(const Real& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Real& operator=(const Real& o) {
    mpfr_set(x_, o.x_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(x_); }
  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

struct Complex {
  Real re, im;
  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
};

void cmul(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2) {
  // (a.re b.re - a.im b.im, a.re b.im + a.im b.re); out must not alias a or b
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(out.re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), t1.get(), t2.get(), MPFR_RNDN);
}

// j evaluated at alpha = (-b + i sqrt(d)) / (2a) through the truncated
// expansion: j = qinv * P(q) with P(q) = sum_{k>=0} c(k-1) q^k.
void j_at_cm_point(const ReducedForm& f, long d, mpfr_prec_t bits, Complex& out) {
  const auto& c = j_coefficients();
  Real pi(bits), sqrtd(bits), angle(bits), mag(bits), t1(bits), t2(bits);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_sqrt_ui(sqrtd.get(), static_cast<unsigned long>(d), MPFR_RNDN);

  // q = exp(-pi sqrt(d)/a) * exp(-i pi b / a)
  Complex q(bits), qinv(bits);
  mpfr_mul(mag.get(), pi.get(), sqrtd.get(), MPFR_RNDN);
  mpfr_div_si(mag.get(), mag.get(), f.a, MPFR_RNDN);
  mpfr_neg(t1.get(), mag.get(), MPFR_RNDN);
  mpfr_exp(t1.get(), t1.get(), MPFR_RNDN);  // |q|
  mpfr_exp(t2.get(), mag.get(), MPFR_RNDN);  // |q|^{-1}

  mpfr_mul_si(angle.get(), pi.get(), -f.b, MPFR_RNDN);
  mpfr_div_si(angle.get(), angle.get(), f.a, MPFR_RNDN);
  Real cosv(bits), sinv(bits);
  mpfr_sin_cos(sinv.get(), cosv.get(), angle.get(), MPFR_RNDN);

  mpfr_mul(q.re.get(), t1.get(), cosv.get(), MPFR_RNDN);
  mpfr_mul(q.im.get(), t1.get(), sinv.get(), MPFR_RNDN);
  // qinv = conj(direction) * |q|^{-1}
  mpfr_mul(qinv.re.get(), t2.get(), cosv.get(), MPFR_RNDN);
  mpfr_mul(qinv.im.get(), t2.get(), sinv.get(), MPFR_RNDN);
  mpfr_neg(qinv.im.get(), qinv.im.get(), MPFR_RNDN);

  // Horner for P(q), highest term first.
  Complex acc(bits), tmp(bits);
  mpfr_set_z(acc.re.get(), c[kSeriesTerms + 1].get_mpz_t(), MPFR_RNDN);
  mpfr_set_ui(acc.im.get(), 0, MPFR_RNDN);
  for (long k = kSeriesTerms; k >= 0; --k) {
    cmul(tmp, acc, q, t1, t2);
    mpfr_add_z(tmp.re.get(), tmp.re.get(), c[k].get_mpz_t(), MPFR_RNDN);
    acc = tmp;
  }
  cmul(out, acc, qinv, t1, t2);
}

std::mutex oracle_mu;
std::map<long, TraceResult> oracle_cache;

}  // namespace

std::vector<ReducedForm> reduced_forms(long d) {
  if (!valid_discriminant(d))
    throw BadDiscriminant("reduced_forms: need d > 0 with d = 0 or 3 (mod 4), got " +
                          std::to_string(d));
  std::vector<ReducedForm> out;
  for (long b = (d % 2 == 0) ? 0 : 1; b * b <= d / 3; b += 2) {
    long n = (b * b + d) / 4;  // = a*c
    for (long a = std::max(b, 1L); a * a <= n; ++a) {
      if (n % a != 0) continue;
      long c = n / a;
      out.push_back({a, b, c});
      if (b > 0 && b < a && a < c) out.push_back({a, -b, c});
    }
  }
  std::sort(out.begin(), out.end(), [](const ReducedForm& x, const ReducedForm& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  });
  return out;
}

int omega_q(const ReducedForm& f) {
  if (f.a == f.b && f.b == f.c) return 3;
  if (f.b == 0 && f.a == f.c) return 2;
  return 1;
}

TraceResult trace_singular_moduli(long d, long bits_override) {
  auto forms = reduced_forms(d);  // validates d
  long bits = bits_override > 0
                  ? bits_override
                  : static_cast<long>(std::ceil(4.54 * std::sqrt(static_cast<double>(d)))) + 128;

  // Accumulate 6*J over classes so the 1/omega weights stay exact integers.
  Complex sum6(bits), jval(bits);
  mpfr_set_ui(sum6.re.get(), 0, MPFR_RNDN);
  mpfr_set_ui(sum6.im.get(), 0, MPFR_RNDN);
  for (const auto& f : forms) {
    j_at_cm_point(f, d, bits, jval);
    mpfr_sub_ui(jval.re.get(), jval.re.get(), 744, MPFR_RNDN);
    long w = 6 / omega_q(f);
    mpfr_mul_si(jval.re.get(), jval.re.get(), w, MPFR_RNDN);
    mpfr_mul_si(jval.im.get(), jval.im.get(), w, MPFR_RNDN);
    mpfr_add(sum6.re.get(), sum6.re.get(), jval.re.get(), MPFR_RNDN);
    mpfr_add(sum6.im.get(), sum6.im.get(), jval.im.get(), MPFR_RNDN);
  }
  Real tval(bits), err(bits);
  mpfr_div_ui(tval.get(), sum6.re.get(), 6, MPFR_RNDN);
  mpz_class t;
  mpfr_get_z(t.get_mpz_t(), tval.get(), MPFR_RNDN);

  mpfr_sub_z(err.get(), tval.get(), t.get_mpz_t(), MPFR_RNDN);
  mpfr_abs(err.get(), err.get(), MPFR_RNDN);
  double dist = mpfr_get_d(err.get(), MPFR_RNDN);
  mpfr_div_ui(err.get(), sum6.im.get(), 6, MPFR_RNDN);
  mpfr_abs(err.get(), err.get(), MPFR_RNDN);
  dist = std::max(dist, mpfr_get_d(err.get(), MPFR_RNDN));

  if (!(dist < 0.25))
    throw RoundingGuard("trace_singular_moduli: d = " + std::to_string(d) + " at " +
                        std::to_string(bits) + " bits left rounding distance " +
                        std::to_string(dist));
  return {d, t, static_cast<long>(forms.size()), dist};
}

TraceResult trace_oracle(long d) {
  {
    std::lock_guard<std::mutex> lock(oracle_mu);
    auto it = oracle_cache.find(d);
    if (it != oracle_cache.end()) return it->second;
  }
  long bits = 0;  // 0 = policy default
  TraceResult r;
  for (int attempt = 0;; ++attempt) {
    try {
      r = trace_singular_moduli(d, bits);
      break;
    } catch (const RoundingGuard&) {
      if (attempt >= 6) throw;
      bits = (bits == 0)
                 ? 2 * (static_cast<long>(std::ceil(4.54 * std::sqrt(static_cast<double>(d)))) + 128)
                 : 2 * bits;
    }
  }
  std::lock_guard<std::mutex> lock(oracle_mu);
  oracle_cache.emplace(d, r);
  return r;
}

TraceTable trace_table(long d_max, std::optional<mpz_class> modulus, int jobs,
                       bool check_all) {
  if (d_max < 3) throw UsageError("trace_table: d_max must be >= 3");
  NamedForm z = zagier_trace_form(d_max + 1, modulus);

  TraceTable table;
  table.modulus = modulus;
  for (long d = 3; d <= d_max; ++d) {
    if (!valid_discriminant(d)) continue;
    mpz_class t = -z.series.coeff(d);
    if (modulus) {
      t %= *modulus;
      if (t < 0) t += *modulus;
    }
    table.t[d] = std::move(t);
  }

  // Deterministic oracle sample: everything up to 300, then every 500th d
  // (or the whole table under check_all).
  std::vector<long> sample;
  for (long d = 3; d <= d_max; ++d)
    if (valid_discriminant(d) && (check_all || d <= 300 || d % 500 == 0)) sample.push_back(d);

  int workers = std::max(1, jobs);
  if (workers > 1) {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < sample.size(); i = next.fetch_add(1))
          trace_oracle(sample[i]);  // fills the shared cache
      });
    for (auto& th : pool) th.join();
  }
  for (long d : sample) {
    mpz_class expected = trace_oracle(d).t;
    if (modulus) {
      expected %= *modulus;
      if (expected < 0) expected += *modulus;
    }
    if (expected != table.t.at(d))
      throw CrossCheckFailed("trace_table: series and oracle disagree at d = " +
                             std::to_string(d));
  }
  return table;
}

}  // namespace qmod
