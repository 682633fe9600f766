#include "qmod/forms.hpp"

#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <vector>

#include "qmod/numtheory.hpp"
#include "qmod/operators.hpp"
#include "qmod/singular_moduli.hpp"

namespace qmod {

namespace {

// Euler product prod (1 - x^n) as a sparse series in x = q^delta, truncated
// below relative precision `rel`.
QSeries pentagonal_series(long delta, long rel, const std::optional<mpz_class>& modulus) {
  QSeries::Coeffs c;
  for (long k = 0;; ++k) {
    long g1 = delta * (k * (3 * k - 1) / 2);
    long g2 = delta * (k * (3 * k + 1) / 2);
    if (g1 >= rel && g2 >= rel) break;
    mpz_class s = (k % 2 == 0) ? 1 : -1;
    if (g1 < rel) c[g1] = s;
    if (g2 < rel) c[g2] = s;
  }
  return QSeries(std::move(c), 0, rel, modulus);
}

std::vector<long> sigma1_odd_sieve(long prec) {
  std::vector<long> s(prec > 0 ? prec : 0, 0);
  for (long d = 1; d < prec; d += 2)
    for (long n = d; n < prec; n += 2 * d) s[n] += d;
  return s;
}

}  // namespace

long EtaQuotientSpec::weight_k2() const {
  long k2 = 0;
  for (auto [delta, r] : factors) k2 += r;
  return k2;
}

long EtaQuotientSpec::offset() const {
  long s = 0;
  for (auto [delta, r] : factors) {
    if (delta < 1) throw UsageError("eta quotient: scales must be positive");
    s += delta * r;
  }
  if (s % 24 != 0)
    throw BadOffset("eta quotient: sum(delta*r) = " + std::to_string(s) +
                    " is not divisible by 24");
  return s / 24;
}

std::string EtaQuotientSpec::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto [delta, r] : factors) {
    if (!first) os << ",";
    first = false;
    os << delta << "^" << r;
  }
  return os.str();
}

EtaQuotientSpec EtaQuotientSpec::parse(const std::string& text) {
  EtaQuotientSpec spec;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    auto caret = part.find('^');
    if (caret == std::string::npos || caret == 0 || caret + 1 == part.size())
      throw UsageError("eta spec: expected delta^exp entries, got '" + part + "'");
    try {
      long delta = std::stol(part.substr(0, caret));
      long r = std::stol(part.substr(caret + 1));
      spec.factors.emplace_back(delta, r);
    } catch (const std::exception&) {
      throw UsageError("eta spec: cannot parse '" + part + "'");
    }
  }
  if (spec.factors.empty()) throw UsageError("eta spec: empty");
  return spec;
}

NamedForm theta(long prec, std::optional<mpz_class> modulus) {
  QSeries::Coeffs c;
  for (long n = 0; n * n < prec; ++n) c[n * n] = (n == 0) ? 1 : 2;
  return {QSeries(std::move(c), 0, prec, std::move(modulus)), {1}, "theta"};
}

QSeries theta_alt(long prec, std::optional<mpz_class> modulus) {
  QSeries::Coeffs c;
  for (long n = 0; n * n < prec; ++n) c[n * n] = (n == 0) ? 1 : ((n % 2) ? -2 : 2);
  return QSeries(std::move(c), 0, prec, std::move(modulus));
}

NamedForm weight2_F(long prec, std::optional<mpz_class> modulus) {
  auto s = sigma1_odd_sieve(prec);
  QSeries::Coeffs c;
  for (long n = 1; n < prec; n += 2)
    if (s[n]) c[n] = s[n];
  return {QSeries(std::move(c), 1, prec, std::move(modulus)), {4}, "F"};
}

mpq_class bernoulli(long k) {
  if (k < 0) throw UsageError("bernoulli: k must be >= 0");
  static std::vector<mpq_class> cache{1};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  for (long n = static_cast<long>(cache.size()); n <= k; ++n) {
    // sum_{j=0}^{n} C(n+1, j) B_j = 0
    mpq_class acc = 0;
    mpz_class binom;
    for (long j = 0; j < n; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), n + 1, j);
      acc += binom * cache[j];
    }
    cache.push_back(-acc / mpq_class(n + 1));
  }
  return cache[k];
}

NamedForm eisenstein(long k, long prec, std::optional<mpz_class> modulus) {
  if (k < 4 || k % 2 != 0)
    throw BadWeight("eisenstein: k must be even and >= 4, got " + std::to_string(k));
  mpq_class factor = mpq_class(-2 * k) / bernoulli(k);
  factor.canonicalize();
  const mpz_class& num = factor.get_num();
  const mpz_class& den = factor.get_den();

  QSeries::Coeffs c;
  c[0] = 1;
  if (modulus) {
    mpz_class den_inv;
    if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), modulus->get_mpz_t()) == 0)
      throw BadModulus("eisenstein: normalization denominator " + den.get_str() +
                       " is not a unit modulo " + modulus->get_str());
    mpz_class cmod = num * den_inv % *modulus;
    if (modulus->fits_ulong_p() && modulus->get_ui() < (1UL << 30)) {
      std::uint64_t m = modulus->get_ui();
      if (cmod < 0) cmod += *modulus;
      std::uint64_t cm = cmod.get_ui();
      auto sig = sigma_sieve_mod(k - 1, prec, m);
      for (long n = 1; n < prec; ++n) {
        std::uint64_t x = mul_mod_u64(cm, sig[n], m);
        if (x) c[n] = mpz_class(static_cast<unsigned long>(x));
      }
    } else {
      for (long n = 1; n < prec; ++n) {
        mpz_class s = 0, dpow;
        for (long d = 1; d * d <= n; ++d) {
          if (n % d) continue;
          mpz_ui_pow_ui(dpow.get_mpz_t(), d, k - 1);
          s += dpow;
          if (d != n / d) {
            mpz_ui_pow_ui(dpow.get_mpz_t(), n / d, k - 1);
            s += dpow;
          }
        }
        c[n] = cmod * s;
      }
    }
  } else {
    if (den != 1)
      throw NonIntegralCoefficients(
          "eisenstein: E_" + std::to_string(k) + " has normalization " + num.get_str() + "/" +
          den.get_str() + "; request a modulus coprime to the denominator instead");
    std::vector<mpz_class> sig(prec > 0 ? prec : 0);
    mpz_class dpow;
    for (long d = 1; d < prec; ++d) {
      mpz_ui_pow_ui(dpow.get_mpz_t(), d, k - 1);
      for (long n = d; n < prec; n += d) sig[n] += dpow;
    }
    for (long n = 1; n < prec; ++n) c[n] = num * sig[n];
  }
  return {QSeries(std::move(c), 0, prec, std::move(modulus)), {2 * k},
          "E" + std::to_string(k)};
}

NamedForm eta_quotient(const EtaQuotientSpec& spec, long prec,
                       std::optional<mpz_class> modulus) {
  long off = spec.offset();
  long rel = prec - off;
  if (rel <= 0) return {QSeries::zero(prec, modulus), {spec.weight_k2()}, "eta:" + spec.str()};
  QSeries unit = QSeries::constant(1, rel, modulus);
  for (auto [delta, r] : spec.factors) {
    if (r == 0) continue;
    unit = mul(unit, pow(pentagonal_series(delta, rel, modulus), r));
  }
  return {shift(unit, off), {spec.weight_k2()}, "eta:" + spec.str()};
}

CuspOrders ord_at_cusps_gamma04(const EtaQuotientSpec& spec) {
  auto order_at = [](const EtaQuotientSpec& s, long c) {
    // Ligozat-type formula on Gamma_0(4): at the cusp with denominator c,
    // ord = N/(24 gcd(c^2, N)) * sum gcd(c, delta)^2 r_delta / delta, N = 4.
    const long N = 4;
    mpq_class sum = 0;
    for (auto [delta, r] : s.factors) {
      if (N % delta != 0)
        throw UsageError("cusp orders: scale " + std::to_string(delta) +
                         " does not divide the level 4");
      long g = std::gcd(c, delta);
      mpq_class term(g * g * r, delta);
      term.canonicalize();
      sum += term;
    }
    mpq_class scale(N, 24 * std::gcd(c * c, N));
    scale.canonicalize();
    mpq_class ord = sum * scale;
    return ord;
  };

  spec.offset();  // validates the 24-divisibility up front

  // Self-check the normalization once: the weight-0 quotient
  // eta(z)^8 eta(4z)^16 / eta(2z)^24 must come out with orders (1, 0, -1)
  // matching its expansion, and total degree zero.
  static std::once_flag calibrated;
  std::call_once(calibrated, [&]() {
    EtaQuotientSpec g{{{1, 8}, {4, 16}, {2, -24}}};
    mpq_class inf = order_at(g, 4), zero = order_at(g, 1), half = order_at(g, 2);
    long expansion_val = eta_quotient(g, 6).series.valuation();
    if (inf != 1 || zero != 0 || half != -1 || inf + zero + half != 0 || expansion_val != 1)
      throw CheckFailure("cusp orders: normalization failed its self-check");
  });

  return {order_at(spec, 4), order_at(spec, 1), order_at(spec, 2)};
}

NamedForm jay(long prec, std::optional<mpz_class> modulus) {
  long p0 = prec + 2;
  QSeries e4 = eisenstein(4, p0, modulus).series;
  QSeries e6 = eisenstein(6, p0, modulus).series;
  QSeries e4cubed = pow(e4, 3);
  QSeries discr_num = sub(e4cubed, pow(e6, 2));  // 1728 * Delta
  QSeries::Coeffs dc;
  if (modulus) {
    mpz_class inv1728;
    if (mpz_invert(inv1728.get_mpz_t(), mpz_class(1728).get_mpz_t(), modulus->get_mpz_t()) == 0)
      throw BadModulus("jay: modulus must be coprime to 1728");
    for (const auto& [e, c] : discr_num.coeffs()) dc[e] = c * inv1728;
  } else {
    for (const auto& [e, c] : discr_num.coeffs()) {
      if (!mpz_divisible_ui_p(c.get_mpz_t(), 1728))
        throw CheckFailure("jay: E4^3 - E6^2 not divisible by 1728 at q^" + std::to_string(e));
      mpz_class q;
      mpz_divexact_ui(q.get_mpz_t(), c.get_mpz_t(), 1728);
      dc[e] = q;
    }
  }
  QSeries delta(std::move(dc), 1, p0, modulus);
  QSeries j = mul(e4cubed, invert(delta));
  return {truncate(j, prec), {0}, "j"};
}

NamedForm zagier_trace_form(long prec, std::optional<mpz_class> modulus) {
  if (prec < 1) throw UsageError("zagier_trace_form: prec must be >= 1");
  QSeries alt = theta_alt(prec + 1, modulus);
  QSeries e4_dilated = v_op(eisenstein(4, ceil_div(prec, 4) + 1, modulus).series, 4);
  QSeries eta4_pow_minus6 = eta_quotient(EtaQuotientSpec{{{4, -6}}}, prec, modulus).series;
  QSeries z = mul(mul(alt, e4_dilated), eta4_pow_minus6);

  auto expect = [&](const mpz_class& v) {
    if (!modulus) return v;
    mpz_class r = v % *modulus;
    if (r < 0) r += *modulus;
    return r;
  };

  bool ok = z.coeff(-1) == expect(1) && (prec < 1 || z.coeff(0) == expect(-2));
  for (long d = 1; ok && d < std::min(prec, 301L); ++d) {
    if (!valid_discriminant(d)) {
      ok = z.coeff(d) == 0;
      continue;
    }
    ok = z.coeff(d) == expect(-trace_oracle(d).t);
  }

  if (!ok) {
    std::cerr << "zagier_trace_form: formula path disagreed with the trace oracle; "
                 "falling back to oracle tabulation\n";
    QSeries::Coeffs c;
    c[-1] = 1;
    c[0] = -2;
    for (long d = 3; d < prec; ++d)
      if (valid_discriminant(d)) c[d] = -trace_oracle(d).t;
    return {QSeries(std::move(c), -1, prec, modulus), {3}, "zagier(oracle-tabulated)"};
  }
  return {z, {3}, "zagier"};
}

}  // namespace qmod
