#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <vector>

namespace qmod {

// Reduced positive definite binary quadratic form a x^2 + b xy + c y^2 of
// discriminant b^2 - 4ac = -d: a > 0, |b| <= a <= c, and b >= 0 when
// |b| = a or a = c.
struct ReducedForm {
  long a = 0, b = 0, c = 0;

  long discriminant() const { return b * b - 4 * a * c; }
  bool operator==(const ReducedForm&) const = default;
};

struct TraceResult {
  long d = 0;
  mpz_class t;
  long class_count = 0;
  double max_rounding_error = 0.0;
};

// One reduced representative per class, imprimitive forms included.
// d > 0 with d = 0 or 3 (mod 4); throws BadDiscriminant otherwise.
std::vector<ReducedForm> reduced_forms(long d);

// Stabilizer order in PSL_2(Z): 3 for forms proportional to (1,1,1), 2 for
// forms proportional to (1,0,1), else 1.
int omega_q(const ReducedForm& f);

// Weighted class sum of J = j - 744 over the CM points of discriminant -d,
// evaluated by the truncated j-expansion in binary floating arithmetic with
// ceil(4.54 sqrt(d)) + 128 bits (or `bits_override`). Throws RoundingGuard
// if the result is not within 0.25 of an integer.
TraceResult trace_singular_moduli(long d, long bits_override = 0);

// trace_singular_moduli with the doubling retry policy applied.
TraceResult trace_oracle(long d);

struct TraceTable {
  std::optional<mpz_class> modulus;
  std::map<long, mpz_class> t;  // keyed by valid d only
};

// Fast path through the trace-generating q-series, then an oracle
// cross-check on all d <= 300 plus every 500th d (throws CrossCheckFailed
// naming the first offending d). `jobs` caps oracle worker threads;
// `check_all` widens the cross-check to every tabulated d.
TraceTable trace_table(long d_max, std::optional<mpz_class> modulus = std::nullopt,
                       int jobs = 1, bool check_all = false);

inline bool valid_discriminant(long d) { return d > 0 && (d % 4 == 0 || d % 4 == 3); }

}  // namespace qmod
