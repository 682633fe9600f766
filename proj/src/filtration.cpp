#include "qmod/filtration.hpp"

#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include "qmod/forms.hpp"
#include "qmod/numtheory.hpp"
#include "qmod/operators.hpp"

namespace qmod {

namespace {

// Immutable-after-population store of theta^a F^b expansions per modulus.
// Entries are replaced only when a deeper precision is requested.
class MonomialCache {
 public:
  QSeries get(long a, long b, long prec, const std::optional<mpz_class>& modulus) {
    std::lock_guard<std::mutex> lock(mu_);
    std::string mkey = modulus ? modulus->get_str() : "";
    Key key{mkey, a, b};
    auto it = cache_.find(key);
    if (it == cache_.end() || it->second.precision() < prec) {
      QSeries th = pow_cached(theta_chain_, mkey, a, prec, modulus, [&](long p) {
        return theta(p, modulus).series;
      });
      QSeries fp = pow_cached(f_chain_, mkey, b, prec, modulus, [&](long p) {
        return weight2_F(p, modulus).series;
      });
      it = cache_.insert_or_assign(key, mul(th, fp)).first;
    }
    return truncate(it->second, prec);
  }

 private:
  using Key = std::tuple<std::string, long, long>;

  template <typename Build>
  QSeries pow_cached(std::map<Key, QSeries>& chain, const std::string& mkey, long e, long prec,
                     const std::optional<mpz_class>& modulus, Build build) {
    if (e == 0) return QSeries::constant(1, prec, modulus);
    Key key{mkey, e, 0};
    auto it = chain.find(key);
    if (it != chain.end() && it->second.precision() >= prec) return truncate(it->second, prec);
    QSeries base = build(prec);
    QSeries prev = (e == 1) ? base : pow_cached(chain, mkey, e - 1, prec, modulus, build);
    QSeries val = (e == 1) ? base : mul(prev, base);
    chain.insert_or_assign(key, val);
    return truncate(val, prec);
  }

  std::mutex mu_;
  std::map<Key, QSeries> cache_, theta_chain_, f_chain_;
};

MonomialCache& monomial_cache() {
  static MonomialCache c;
  return c;
}

std::uint64_t require_prime_modulus(const QSeries& f, const char* who) {
  if (!f.modulus())
    throw UsageError(std::string(who) + ": series must carry a prime modulus");
  if (!f.modulus()->fits_ulong_p() || !is_prime_long(f.modulus()->get_si()) ||
      f.modulus()->get_si() < 5)
    throw UsageError(std::string(who) + ": modulus must be a prime >= 5");
  return f.modulus()->get_ui();
}

}  // namespace

long sturm_precision(long k2_max) {
  if (k2_max < 0) throw UsageError("sturm_precision: k2 must be >= 0");
  return k2_max / 4 + 16;
}

std::vector<QSeries> graded_basis(long k2, long prec, std::optional<mpz_class> modulus) {
  if (k2 < 0) throw UsageError("graded_basis: k2 must be >= 0");
  std::vector<QSeries> out;
  out.reserve(k2 / 4 + 1);
  for (long b = 0; 4 * b <= k2; ++b)
    out.push_back(monomial_cache().get(k2 - 4 * b, b, prec, modulus));
  return out;
}

std::optional<std::vector<WitnessTerm>> is_congruent_to_weight(const QSeries& f, long k2,
                                                               long prec) {
  std::uint64_t ell = require_prime_modulus(f, "is_congruent_to_weight");
  if (f.valuation() < 0)
    throw UsageError("is_congruent_to_weight: principal part present");
  if (prec < 0) prec = sturm_precision(k2);
  if (f.precision() < prec)
    throw InsufficientPrecision("is_congruent_to_weight: need precision >= " +
                                std::to_string(prec) + ", have " +
                                std::to_string(f.precision()));

  auto basis = graded_basis(k2, prec, f.modulus());
  long rows = prec, cols = static_cast<long>(basis.size());

  // Augmented matrix [basis columns | f] over F_ell, row index = exponent.
  std::vector<std::vector<std::uint64_t>> m(rows, std::vector<std::uint64_t>(cols + 1, 0));
  for (long j = 0; j < cols; ++j)
    for (const auto& [e, c] : basis[j].coeffs())
      if (e >= 0 && e < rows) m[e][j] = c.get_ui();
  for (const auto& [e, c] : f.coeffs())
    if (e >= 0 && e < rows) m[e][cols] = c.get_ui();

  long rank = 0;
  for (long col = 0; col < cols && rank < rows; ++col) {
    long piv = -1;
    for (long r = rank; r < rows; ++r)
      if (m[r][col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    std::uint64_t inv = inv_mod_u64(m[rank][col], ell);
    for (long j = col; j <= cols; ++j) m[rank][j] = m[rank][j] * inv % ell;
    for (long r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      std::uint64_t factor = m[r][col];
      for (long j = col; j <= cols; ++j)
        m[r][j] = (m[r][j] + (ell - factor) * m[rank][j]) % ell;
    }
    ++rank;
  }
  if (rank < cols)
    throw BasisMismatch("graded basis of doubled weight " + std::to_string(k2) +
                        " is rank-deficient at precision " + std::to_string(prec));
  for (long r = rank; r < rows; ++r)
    if (m[r][cols]) return std::nullopt;  // inconsistent: f not in the span

  std::vector<WitnessTerm> witness;
  long row = 0;
  for (long col = 0; col < cols; ++col) {
    // after full reduction, pivot rows carry the solution in order
    std::uint64_t v = m[row][cols];
    ++row;
    if (v) witness.push_back({k2 - 4 * col, col, v});
  }
  return witness;
}

FiltrationResult filtration(const QSeries& f, long k2, long extra_precision) {
  std::uint64_t ell = require_prime_modulus(f, "filtration");
  if (f.is_zero()) throw ZeroInput("filtration: the zero series has no filtration");
  if (f.valuation() < 0)
    throw UsageError("filtration: principal part present; reduce to a holomorphic input");
  if (k2 < 0) throw UsageError("filtration: k2 must be >= 0");

  long prec = sturm_precision(k2) + extra_precision;
  if (f.precision() < prec)
    throw InsufficientPrecision("filtration: need precision >= " + std::to_string(prec));

  long step = 2 * (static_cast<long>(ell) - 1);
  FiltrationResult result;
  result.checked_precision = prec;
  for (long t = k2 / step; t >= 0; --t) result.candidate_chain.push_back(k2 - t * step);
  for (long k2p : result.candidate_chain) {
    auto witness = is_congruent_to_weight(f, k2p, prec);
    if (witness) {
      result.omega2 = k2p;
      result.witness = std::move(*witness);
      return result;
    }
  }
  throw BasisMismatch("filtration: input is not congruent to any form of doubled weight " +
                      std::to_string(k2) + " (chain exhausted)");
}

long u_image_weight_k2(long k2, long ell) {
  if (k2 < 0 || ell < 5) throw UsageError("u_image_weight_k2: need k2 >= 0 and ell >= 5");
  long step = 2 * (ell - 1);
  // omega2(f|U) == k2 + (k2 odd ? ell-1 : 0)  (mod 2(ell-1)), and is bounded
  // by max(k2, 2 ell + (k2-2)/ell).
  long cls = ((k2 + (k2 % 2 != 0 ? ell - 1 : 0)) % step + step) % step;
  long ub = std::max(k2, 2 * ell + ceil_div(std::max(k2 - 2, 0L), ell));
  long rem = ((cls - ub) % step + step) % step;
  return ub + rem;
}

bool FiltrationPropsReport::all_pass() const {
  for (const auto& l : laws)
    if (!l.pass()) return false;
  return true;
}

namespace {

QSeries random_combo(long k2, long prec, std::uint64_t ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, ell - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto basis = graded_basis(k2, prec, mpz_class(static_cast<unsigned long>(ell)));
    QSeries acc = QSeries::zero(prec, mpz_class(static_cast<unsigned long>(ell)));
    for (auto& mono : basis) {
      std::uint64_t c = dist(rng);
      if (c) acc = add(acc, mul_scalar(mono, mpz_class(static_cast<unsigned long>(c))));
    }
    if (!acc.is_zero()) return acc;
  }
  throw Error("random_combo: could not draw a nonzero combination");
}

std::string describe(const QSeries& f, long k2, const char* extra = "") {
  std::ostringstream os;
  os << "k2=" << k2 << " f=" << f.str(8) << " " << extra;
  return os.str();
}

}  // namespace

FiltrationPropsReport verify_filtration_props(long ell, long sample_count, std::uint64_t seed) {
  if (ell != 5 && ell != 7)
    throw UsageError("verify_filtration_props: ell must be 5 or 7");
  if (sample_count < 1 || sample_count > 500)
    throw UsageError("verify_filtration_props: sample_count must be in [1, 500]");
  mpz_class mod(ell);
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(ell));

  FiltrationPropsReport report;
  report.ell = ell;
  report.sample_count = sample_count;

  auto make_law = [](const char* name) {
    LawReport l;
    l.law = name;
    return l;
  };
  LawReport theta_shift = make_law("omega(f*theta^m) = omega(f) + m/2");
  LawReport power = make_law("omega(f^m) = m*omega(f)");
  LawReport u_congruence = make_law("omega(f|U) - omega(f) = 0 mod (ell-1)/2");
  LawReport weight_class = make_law("lambda = omega(f) - 1/2 mod (ell-1)");
  LawReport u_bound = make_law("omega(f|U) <= ell + (omega(f)-1)/ell");
  LawReport descent = make_law("omega(f) > ell+1 implies omega(f|U) < omega(f)");

  std::uniform_int_distribution<long> k2_small(1, 20), m_shift(1, 6);
  std::uniform_int_distribution<long> k2_pow(1, 10), m_pow(2, 4);
  std::uniform_int_distribution<long> lam_half(0, 12);
  std::uniform_int_distribution<long> k_even(1, 15);
  std::uniform_int_distribution<long> k_desc(ell + 2, ell + 8);

  auto u_filtration = [&](const QSeries& f_deep, long k2) -> std::optional<FiltrationResult> {
    QSeries g = u_op(f_deep, ell);
    if (g.is_zero()) return std::nullopt;  // the zero series has no filtration
    return filtration(g, u_image_weight_k2(k2, ell));
  };

  for (long i = 0; i < sample_count; ++i) {
    {  // theta-shift additivity
      long k2 = k2_small(rng), m = m_shift(rng);
      long prec = sturm_precision(k2 + m) + 4;
      QSeries f = random_combo(k2, prec, ell, rng);
      long w_f = filtration(f, k2).omega2;
      long w_shift = filtration(mul(f, pow(theta(prec, mod).series, m)), k2 + m).omega2;
      ++theta_shift.samples;
      if (w_shift != w_f + m) {
        ++theta_shift.failures;
        theta_shift.counterexamples.push_back(describe(f, k2));
      }
    }
    {  // power multiplicativity
      long k2 = k2_pow(rng), m = m_pow(rng);
      long prec = sturm_precision(k2 * m) + 4;
      QSeries f = random_combo(k2, prec, ell, rng);
      long w_f = filtration(f, k2).omega2;
      long w_pow = filtration(pow(f, m), k2 * m).omega2;
      ++power.samples;
      if (w_pow != m * w_f) {
        ++power.failures;
        power.counterexamples.push_back(describe(f, k2));
      }
    }
    {  // U_ell congruence class and the weight-class law (half-integral f)
      long k2 = 2 * lam_half(rng) + 1;
      long k2u = u_image_weight_k2(k2, ell);
      long prec = ell * (sturm_precision(std::max(k2, k2u)) + 1);
      QSeries f = random_combo(k2, prec, ell, rng);
      FiltrationResult w_f = filtration(f, k2);
      auto w_u = u_filtration(f, k2);
      ++u_congruence.samples;
      if (!w_u) {
        ++u_congruence.vacuous;
      } else if ((w_u->omega2 - w_f.omega2) % (ell - 1) != 0) {
        ++u_congruence.failures;
        u_congruence.counterexamples.push_back(describe(f, k2, "U congruence"));
      }
      ++weight_class.samples;
      if ((k2 - w_f.omega2) % (2 * (ell - 1)) != 0) {
        ++weight_class.failures;
        weight_class.counterexamples.push_back(describe(f, k2, "weight class"));
      }
    }
    {  // U_ell upper bound (integral weight)
      long k2 = 2 * k_even(rng);
      long k2u = u_image_weight_k2(k2, ell);
      long prec = ell * (sturm_precision(std::max(k2, k2u)) + 1);
      QSeries f = random_combo(k2, prec, ell, rng);
      long w_f = filtration(f, k2).omega2;
      auto w_u = u_filtration(f, k2);
      ++u_bound.samples;
      if (!w_u) {
        ++u_bound.vacuous;
      } else if (ell * w_u->omega2 > 2 * ell * ell + w_f - 2) {
        ++u_bound.failures;
        u_bound.counterexamples.push_back(describe(f, k2, "U bound"));
      }
    }
    {  // strict descent above ell + 1
      long k2 = 2 * k_desc(rng);
      long k2u = u_image_weight_k2(k2, ell);
      long prec = ell * (sturm_precision(std::max(k2, k2u)) + 1);
      QSeries f = random_combo(k2, prec, ell, rng);
      long w_f = filtration(f, k2).omega2;
      ++descent.samples;
      if (w_f <= 2 * ell + 2) {
        ++descent.vacuous;
      } else {
        auto w_u = u_filtration(f, k2);
        if (!w_u) {
          ++descent.vacuous;
        } else if (w_u->omega2 >= w_f) {
          ++descent.failures;
          descent.counterexamples.push_back(describe(f, k2, "descent"));
        }
      }
    }
  }

  report.laws = {theta_shift, power, u_congruence, weight_class, u_bound, descent};
  return report;
}

}  // namespace qmod
