#pragma once

#include <cstdint>
#include <vector>

#include "qmod/errors.hpp"

namespace qmod {

// Floor/ceil division that are correct for negative numerators. b > 0.
inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

// base^exp as long, throwing on overflow. exp >= 0.
long checked_pow_long(long base, long exp);

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Inverse of a modulo m; throws NonUnitLeading if gcd(a, m) != 1.
std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m);

bool is_prime_long(long n);

// Largest square-free divisor d of n with n/d a perfect square. n >= 1.
long squarefree_part(long n);

// Divisor-power sums sigma_e(n) for n in [0, prec) as residues mod m.
// Index 0 is unused (set to 0).
std::vector<std::uint64_t> sigma_sieve_mod(long e, long prec, std::uint64_t m);

}  // namespace qmod
