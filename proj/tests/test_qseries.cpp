#include <doctest.h>

#include <random>

#include "qmod/json_io.hpp"
#include "qmod/numtheory.hpp"
#include "qmod/qseries.hpp"

using namespace qmod;

namespace {

QSeries from_list(std::initializer_list<std::pair<long, long>> terms, long prec,
                  std::optional<mpz_class> mod = std::nullopt) {
  QSeries::Coeffs c;
  long val = prec;
  for (auto [e, x] : terms) {
    c[e] = x;
    val = std::min(val, e);
  }
  return QSeries(std::move(c), val, prec, std::move(mod));
}

QSeries random_series(std::mt19937_64& rng, long prec, std::optional<mpz_class> mod,
                      long val_min = 0, bool unit_leading = false) {
  std::uniform_int_distribution<long> coeff(-30, 30), gap(1, 4);
  std::uniform_int_distribution<long> vdist(val_min, val_min + 3);
  QSeries::Coeffs c;
  long v = vdist(rng);
  c[v] = unit_leading ? 1 : coeff(rng);
  for (long e = v + gap(rng); e < prec; e += gap(rng)) c[e] = coeff(rng);
  return QSeries(std::move(c), v, prec, std::move(mod));
}

}  // namespace

TEST_CASE("addition: identity, inverse, precision min rule") {
  QSeries a = from_list({{0, 1}, {1, 2}}, 8);
  QSeries z = QSeries::zero(12);
  QSeries s = add(a, z);
  CHECK(s.precision() == 8);
  CHECK(s.coeff(0) == 1);
  CHECK(s.coeff(1) == 2);

  QSeries theta_head = from_list({{0, 1}, {1, 2}, {4, 2}}, 5);
  QSeries cancel = add(theta_head, negate(theta_head));
  CHECK(cancel.is_zero());
  CHECK(cancel.precision() == 5);

  QSeries laurent = from_list({{-1, 1}, {0, -2}}, 3);
  QSeries two = QSeries::constant(2, 10);
  QSeries sum = add(laurent, two);
  CHECK(sum.precision() == 3);
  CHECK(sum.valuation() == -1);
  CHECK(sum.coeff(-1) == 1);
  CHECK(sum.coeff(0) == 0);
  CHECK_THROWS_AS((void)sum.coeff(3), InsufficientPrecision);
}

TEST_CASE("addition rejects mixed moduli") {
  QSeries a = from_list({{0, 1}}, 5, mpz_class(5));
  QSeries b = from_list({{0, 1}}, 5);
  CHECK_THROWS_AS((void)add(a, b), ModulusMismatch);
  QSeries c = from_list({{0, 1}}, 5, mpz_class(7));
  CHECK_THROWS_AS((void)add(a, c), ModulusMismatch);
}

TEST_CASE("multiplication: r2/r3 counts and Laurent shifts") {
  // theta^2 counts lattice points x^2 + y^2 = n
  QSeries theta_head = from_list({{0, 1}, {1, 2}, {4, 2}, {9, 2}}, 10);
  QSeries sq = mul(theta_head, theta_head);
  CHECK(sq.coeff(0) == 1);
  CHECK(sq.coeff(1) == 4);
  CHECK(sq.coeff(2) == 4);
  CHECK(sq.coeff(3) == 0);

  QSeries cube = mul(sq, theta_head);
  CHECK(cube.coeff(0) == 1);
  CHECK(cube.coeff(1) == 6);
  CHECK(cube.coeff(2) == 12);
  CHECK(cube.coeff(3) == 8);

  QSeries laurent = from_list({{-1, 1}, {0, -2}}, 5);
  QSeries q = QSeries::monomial(1, 1, 7);
  QSeries shifted = mul(laurent, q);
  CHECK(shifted.valuation() == 0);
  CHECK(shifted.coeff(0) == 1);
  CHECK(shifted.coeff(1) == -2);
  CHECK(shifted.precision() == 6);  // min(5+1, 7-1)
}

TEST_CASE("multiplication precision: conservative min rule") {
  QSeries a = from_list({{2, 3}, {5, 1}}, 9);
  QSeries b = from_list({{-1, 1}, {0, 4}}, 6);
  QSeries p = mul(a, b);
  CHECK(p.precision() == std::min(9 + (-1), 6 + 2));
  CHECK(p.valuation() == 1);
}

TEST_CASE("pow: empty product, geometric series, theta^5 mod 5") {
  QSeries a = from_list({{1, 5}, {2, -1}}, 9);
  QSeries one = pow(a, 0);
  CHECK(one.coeff(0) == 1);
  CHECK(one.term_count() == 1);

  QSeries geom = pow(from_list({{0, 1}, {1, -1}}, 4), -1);
  CHECK(geom.coeff(0) == 1);
  CHECK(geom.coeff(1) == 1);
  CHECK(geom.coeff(2) == 1);
  CHECK(geom.coeff(3) == 1);

  QSeries::Coeffs tc;
  for (long n = 0; n * n < 30; ++n) tc[n * n] = n ? 2 : 1;
  QSeries theta30(std::move(tc), 0, 30, mpz_class(5));
  QSeries t5 = pow(theta30, 5);
  CHECK(t5.coeff(0) == 1);
  CHECK(t5.coeff(5) == 2);
  CHECK(t5.coeff(20) == 2);
  for (long n : {1, 2, 3, 4, 6, 7, 8, 9, 10}) CHECK(t5.coeff(n) == 0);
}

TEST_CASE("invert: partition numbers from the pentagonal series") {
  QSeries::Coeffs pent;
  for (long k = 0; k < 6; ++k) {
    long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
    if (g1 < 12) pent[g1] = (k % 2) ? -1 : 1;
    if (g2 < 12) pent[g2] = (k % 2) ? -1 : 1;
  }
  QSeries euler(std::move(pent), 0, 12);
  QSeries partitions = invert(euler);
  long expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56};
  for (long n = 0; n < 12; ++n) CHECK(partitions.coeff(n) == expected[n]);
}

TEST_CASE("invert: valuation shift and modular inverse of the lead") {
  QSeries a = from_list({{1, 1}, {2, 3}}, 6);
  QSeries b = invert(a);
  CHECK(b.valuation() == -1);
  CHECK(b.precision() == 6 - 2);

  QSeries c = from_list({{0, 2}, {1, 1}}, 6, mpz_class(5));
  QSeries ci = invert(c);
  CHECK(ci.coeff(0) == 3);  // 3*2 = 1 mod 5
  CHECK(equal_upto(mul(c, ci), QSeries::constant(1, 6, mpz_class(5)), 6));

  QSeries bad = from_list({{0, 2}, {1, 1}}, 6);
  CHECK_THROWS_AS((void)invert(bad), NonUnitLeading);
  QSeries bad5 = from_list({{0, 5}, {1, 1}}, 6, mpz_class(25));
  CHECK_THROWS_AS((void)invert(bad5), NonUnitLeading);
}

TEST_CASE("reduce_mod: canonical residues, tower compatibility") {
  QSeries a = from_list({{0, -3}, {2, 26}}, 5);
  QSeries r = reduce_mod(a, 5);
  CHECK(r.coeff(0) == 2);
  CHECK(r.coeff(2) == 1);

  QSeries r25 = reduce_mod(a, 25);
  CHECK(equal_upto(reduce_mod(r25, 5), r, 5));
  CHECK_THROWS_AS((void)reduce_mod(r, 25), BadModulus);

  QSeries zero_exact = QSeries::zero(7);
  CHECK(reduce_mod(zero_exact, 5).is_zero());
}

TEST_CASE("equal_upto: principal parts and precision guard") {
  QSeries a = from_list({{-2, 1}, {0, 3}}, 6);
  QSeries b = from_list({{-2, 1}, {0, 3}, {5, 9}}, 6);
  CHECK(equal_upto(a, b, 5));
  CHECK(!equal_upto(a, b, 6));
  CHECK(equal_upto(a, a, 6));
  CHECK_THROWS_AS((void)equal_upto(a, b, 7), InsufficientPrecision);

  QSeries c = from_list({{-1, 1}, {0, 3}}, 6);
  CHECK(!equal_upto(a, c, 1));
}

TEST_CASE("ring laws on random series") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 40; ++i) {
    std::optional<mpz_class> mod;
    if (i % 2) mod = mpz_class(i % 4 == 1 ? 7 : 25);
    QSeries a = random_series(rng, 24, mod, -2);
    QSeries b = random_series(rng, 24, mod, -2);
    QSeries c = random_series(rng, 24, mod, -2);

    QSeries lhs = add(add(a, b), c);
    QSeries rhs = add(a, add(b, c));
    CHECK(equal_upto(lhs, rhs, std::min(lhs.precision(), rhs.precision())));

    QSeries d1 = mul(a, add(b, c));
    QSeries d2 = add(mul(a, b), mul(a, c));
    long n = std::min(d1.precision(), d2.precision());
    CHECK(equal_upto(truncate(d1, n), truncate(d2, n), n));

    QSeries m1 = mul(a, b);
    QSeries m2 = mul(b, a);
    CHECK(equal_upto(m1, m2, m1.precision()));
  }
}

TEST_CASE("invert then multiply is 1, random unit-leading series mod 5, 7, 13") {
  std::mt19937_64 rng(999);
  for (long m : {5L, 7L, 13L}) {
    for (int i = 0; i < 100; ++i) {
      QSeries a = random_series(rng, 20, mpz_class(m), -3, true);
      QSeries ai = invert(a);
      QSeries prod = mul(a, ai);
      CHECK(equal_upto(prod, QSeries::constant(1, prod.precision(), mpz_class(m)),
                       prod.precision()));
    }
  }
}

TEST_CASE("reduce_mod commutes with add and mul") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 30; ++i) {
    QSeries a = random_series(rng, 18, std::nullopt, -2);
    QSeries b = random_series(rng, 18, std::nullopt, -2);
    mpz_class m(i % 2 ? 7 : 25);
    QSeries s1 = reduce_mod(add(a, b), m);
    QSeries s2 = add(reduce_mod(a, m), reduce_mod(b, m));
    CHECK(equal_upto(s1, s2, s1.precision()));
    QSeries p1 = reduce_mod(mul(a, b), m);
    QSeries p2 = mul(reduce_mod(a, m), reduce_mod(b, m));
    CHECK(equal_upto(p1, p2, std::min(p1.precision(), p2.precision())));
  }
}

TEST_CASE("precision never overstated: deeper inputs preserve reported coefficients") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 20; ++i) {
    QSeries::Coeffs ca, cb;
    std::uniform_int_distribution<long> coeff(-9, 9);
    for (long e = -2; e < 40; ++e) {
      ca[e] = coeff(rng);
      cb[e] = coeff(rng);
    }
    QSeries deep_a(QSeries::Coeffs(ca), -2, 40), deep_b(QSeries::Coeffs(cb), -2, 40);
    QSeries shallow_a = truncate(deep_a, 20), shallow_b = truncate(deep_b, 20);
    QSeries p_shallow = mul(shallow_a, shallow_b);
    QSeries p_deep = mul(deep_a, deep_b);
    CHECK(equal_upto(truncate(p_deep, p_shallow.precision()), p_shallow,
                     p_shallow.precision()));
  }
}

TEST_CASE("json round trip preserves the wire schema") {
  QSeries a = from_list({{-1, 1}, {0, -2}, {3, 248}}, 10, mpz_class(25));
  Json j = series_to_json(a);
  CHECK(j["valuation"] == -1);
  CHECK(j["precision"] == 10);
  CHECK(j["modulus"] == 25);
  CHECK(j["coeffs"][0][0] == -1);
  CHECK(j["coeffs"][0][1] == "1");
  QSeries back = series_from_json(j);
  CHECK(equal_upto(a, back, 10));
  CHECK(same_modulus(a, back));

  QSeries exact = from_list({{0, 7}}, 3);
  Json je = series_to_json(exact);
  CHECK(je["modulus"].is_null());
  CHECK(equal_upto(series_from_json(je), exact, 3));
}

TEST_CASE("json loader rejects malformed input") {
  Json j;
  j["valuation"] = 0;
  j["precision"] = 5;
  j["modulus"] = nullptr;
  j["coeffs"] = Json::array({Json::array({3, "1"}), Json::array({1, "2"})});
  CHECK_THROWS_AS((void)series_from_json(j), UsageError);  // exponents must ascend
  j["coeffs"] = Json::array({Json::array({7, "1"})});
  CHECK_THROWS_AS((void)series_from_json(j), UsageError);  // beyond precision
}

TEST_CASE("numtheory helpers") {
  CHECK(floor_div(-7, 2) == -4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(ceil_div(7, 2) == 4);
  CHECK(squarefree_part(1) == 1);
  CHECK(squarefree_part(12) == 3);
  CHECK(squarefree_part(49) == 1);
  CHECK(squarefree_part(50) == 2);
  CHECK(is_prime_long(13));
  CHECK(!is_prime_long(1));
  CHECK(!is_prime_long(91));
  CHECK(inv_mod_u64(2, 5) == 3);
  CHECK_THROWS_AS((void)inv_mod_u64(5, 25), NonUnitLeading);
}
