#include "qmod/numtheory.hpp"

#include <limits>

namespace qmod {

long checked_pow_long(long base, long exp) {
  if (exp < 0) throw UsageError("checked_pow_long: negative exponent");
  long r = 1;
  for (long i = 0; i < exp; ++i) {
    if (base != 0 && std::numeric_limits<long>::max() / (base > 0 ? base : -base) <
                         (r > 0 ? r : -r))
      throw UsageError("checked_pow_long: overflow");
    r *= base;
  }
  return r;
}

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod_u64(r, a, m);
    a = mul_mod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
  // extended euclid on signed 128-bit to dodge overflow for large m
  __int128 t = 0, newt = 1;
  __int128 r = m, newr = a % m;
  while (newr != 0) {
    __int128 q = r / newr;
    __int128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw NonUnitLeading("inv_mod_u64: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  for (long d = 37; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

long squarefree_part(long n) {
  if (n < 1) throw UsageError("squarefree_part: n must be positive");
  long sf = 1;
  for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e & 1) sf *= p;
  }
  return sf * n;  // leftover n is prime (or 1), exponent 1
}

std::vector<std::uint64_t> sigma_sieve_mod(long e, long prec, std::uint64_t m) {
  std::vector<std::uint64_t> s(prec > 0 ? prec : 0, 0);
  for (long d = 1; d < prec; ++d) {
    std::uint64_t de = pow_mod_u64(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(e), m);
    for (long n = d; n < prec; n += d) {
      s[n] += de;
      if (s[n] >= m) s[n] -= m;
    }
  }
  return s;
}

}  // namespace qmod
