#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "ssc/weil.hpp"

using namespace ssc;

namespace {

// Oracle: compute the four complex roots of X^4 + a1 X^3 + a2 X^2 + q a1 X +
// q^2 through the substitution Y = X + q/X and check |root| = sqrt(q) within
// a relative tolerance.
bool weil_by_float_roots(i64 a1, i64 a2, i64 q, double tol = 1e-9) {
  std::complex<double> A1(static_cast<double>(a1), 0);
  std::complex<double> C(static_cast<double>(a2) - 2.0 * static_cast<double>(q), 0);
  std::complex<double> disc = A1 * A1 - 4.0 * C;
  std::complex<double> s = std::sqrt(disc);
  double rq = std::sqrt(static_cast<double>(q));
  for (std::complex<double> y : {(-A1 + s) / 2.0, (-A1 - s) / 2.0}) {
    // X^2 - yX + q = 0
    std::complex<double> d2 = y * y - 4.0 * static_cast<double>(q);
    std::complex<double> sd = std::sqrt(d2);
    for (std::complex<double> x : {(y + sd) / 2.0, (y - sd) / 2.0}) {
      if (std::abs(std::abs(x) - rq) > tol * rq) return false;
    }
  }
  return true;
}

i64 next_prime_at_least(i64 n) {
  while (!is_prime_u64(static_cast<u64>(n))) ++n;
  return n;
}

}  // namespace

TEST_CASE("validate_weil examples") {
  CHECK(validate_weil(0, 14, 7));
  CHECK(validate_weil(0, 0, 7));
  CHECK(!validate_weil(17, 0, 7));  // 289 > 112
  CHECK_THROWS(validate_weil(0, 0, 12));
  CHECK(validate_weil(0, 2 * 49, 49));  // prime power q = 7^2
}

TEST_CASE("prime power decomposition") {
  CHECK(prime_power_decompose(7) == std::pair<i64, int>{7, 1});
  CHECK(prime_power_decompose(49) == std::pair<i64, int>{7, 2});
  CHECK(prime_power_decompose(1024) == std::pair<i64, int>{2, 10});
  CHECK(!prime_power_decompose(12).has_value());
  CHECK(!prime_power_decompose(1).has_value());
}

TEST_CASE("validate_weil agrees with the float-root oracle") {
  for (i64 q : {7, 11, 13}) {
    i64 a1_max = static_cast<i64>(4 * std::sqrt(static_cast<double>(q))) + 2;
    for (i64 a1 = -a1_max; a1 <= a1_max; ++a1)
      for (i64 a2 = -3 * q; a2 <= a1 * a1 / 4 + 2 * q + 3; ++a2)
        CHECK(validate_weil(a1, a2, q) == weil_by_float_roots(a1, a2, q));
  }
}

TEST_CASE("discriminant") {
  CHECK(discriminant(make_weil(0, 14, 7)) == 0);
  CHECK(discriminant(make_weil(2, 13, 7)) == 8);
  CHECK(discriminant(make_weil(0, 0, 7)) == 56);
  // Discriminant is nonnegative on valid quartics (the upper coefficient
  // bound in disguise).
  for (i64 a1 = -10; a1 <= 10; ++a1)
    for (i64 a2 = -26; a2 <= 51; ++a2)
      if (validate_weil(a1, a2, 13)) CHECK(discriminant(make_weil(a1, a2, 13)) >= 0);
}

TEST_CASE("classification examples") {
  CHECK(classify_supersingular(make_weil(0, 7, 7)) == SurfaceClass::SimpleSSPlusP);
  CHECK(classify_supersingular(make_weil(0, -7, 7)) == SurfaceClass::SimpleSSMinusP);
  CHECK(classify_supersingular(make_weil(0, 0, 7)) == SurfaceClass::SimpleSSZero);
  CHECK(classify_supersingular(make_weil(0, -14, 7)) == SurfaceClass::SimpleSSMinus2P);
  CHECK(classify_supersingular(make_weil(0, 14, 7)) == SurfaceClass::SplitSS);
  CHECK(classify_supersingular(make_weil(1, 1, 7)) == SurfaceClass::NotSS);
  CHECK_THROWS(classify_supersingular(make_weil(0, 0, 5)));
  CHECK_THROWS(classify_supersingular(make_weil(0, 2 * 49, 7, 2)));
}

TEST_CASE("p_rank examples") {
  CHECK(p_rank(make_weil(0, 14, 7)) == 0);
  CHECK(p_rank(make_weil(1, 1, 7)) == 2);
  CHECK(p_rank(make_weil(3, 7, 7)) == 1);
}

TEST_CASE("classification coherent with p-rank, exhaustive small p") {
  for (i64 p : {7, 11, 13, 17, 19}) {
    i64 a1_max = static_cast<i64>(4 * std::sqrt(static_cast<double>(p))) + 1;
    for (i64 a1 = -a1_max; a1 <= a1_max; ++a1)
      for (i64 a2 = -2 * p - a1_max * a1_max; a2 <= a1 * a1 / 4 + 2 * p; ++a2) {
        if (!validate_weil(a1, a2, p)) continue;
        WeilQuartic w = make_weil(a1, a2, p);
        SurfaceClass c = classify_supersingular(w);
        bool ss = is_supersingular(c);
        CHECK(ss == (p_rank(w) == 0));
        CHECK((c == SurfaceClass::SplitSS) ==
              (discriminant(w) == 0 && a1 == 0));
        if (p >= 17 && ss) CHECK(a1 == 0);
        // classify_full refines NotSS by p-rank
        SurfaceClass full = classify_full(w);
        if (!ss)
          CHECK(full == (p_rank(w) == 2 ? SurfaceClass::Ordinary
                                        : SurfaceClass::PRankOne));
      }
  }
}

TEST_CASE("quad field elements") {
  CHECK_THROWS(make_quad_field_elem(1, 2, 0));
  CHECK_THROWS(make_quad_field_elem(8, 2, 0));   // not squarefree
  CHECK_THROWS(make_quad_field_elem(2, 1, 2));   // u odd needs d = 1 mod 4
  CHECK_THROWS(make_quad_field_elem(5, 1, 2));   // mixed parity
  QuadFieldElem b = make_quad_field_elem(5, 1, 1);  // (1+sqrt5)/2
  CHECK(b.trace() == 1);
  CHECK(b.norm() == -1);
  CHECK(b.conjugate().v == -1);
  QuadFieldElem c = make_quad_field_elem(2, 2, 2);  // 1+sqrt2
  CHECK(c.norm() == -1);
}

TEST_CASE("rm_factor examples") {
  auto b = rm_factor(make_weil(2, 13, 7), 2);
  REQUIRE(b.has_value());
  CHECK(b->u == 2);
  CHECK(b->v == 2);  // b = 1 + sqrt(2)

  for (i64 d : {2, 3, 5, 13}) {
    auto sq = rm_factor(make_weil(4, 18, 7), d);
    REQUIRE(sq.has_value());
    CHECK(sq->u == 4);
    CHECK(sq->v == 0);
  }

  CHECK(!rm_factor(make_weil(1, 1, 7), 5).has_value());  // 5 does not divide 53
  CHECK_THROWS(rm_factor(make_weil(1, 1, 7), 12));
  CHECK_THROWS(rm_factor(make_weil(1, 1, 7), 1));
  // Square factorization undefined over non-prime fields.
  CHECK_THROWS(rm_factor(make_weil(0, 2 * 49, 7, 2), 2));
  // Delta divisible by d but the quotient is not a square.
  CHECK(!rm_factor(make_weil(0, 0, 7), 2).has_value());  // 56/2 = 28
  // Half-integer coordinates, d = 1 mod 4: u = v = 1.
  auto h = rm_factor(make_weil(1, 13, 7), 5);  // delta = 1 - 52 + 56 = 5
  REQUIRE(h.has_value());
  CHECK(h->u == 1);
  CHECK(h->v == 1);
}

TEST_CASE("rm expand/factor round trip") {
  std::mt19937_64 rng(42);
  int done = 0;
  while (done < 500) {
    i64 d = std::array<i64, 4>{2, 3, 5, 13}[rng() % 4];
    i64 u = static_cast<i64>(rng() % 21) - 10;
    i64 v = static_cast<i64>(rng() % 21) - 10;
    if (d % 4 == 1) {
      if ((u - v) % 2 != 0) continue;
    } else {
      if (u % 2 != 0 || v % 2 != 0) continue;
    }
    QuadFieldElem b = make_quad_field_elem(d, u, v);
    i64 q = next_prime_at_least(std::max<i64>({u * u, d * v * v, 7}));
    auto [a1, a2] = rm_expand(b, q);
    REQUIRE(validate_weil(a1, a2, q));
    WeilQuartic w = make_weil(a1, a2, q);
    CHECK(discriminant(w) == d * v * v);
    auto rec = rm_factor(w, d);
    REQUIRE(rec.has_value());
    CHECK(rec->u == u);
    CHECK(rec->v == std::abs(v));
    CHECK(rm_expand(*rec, q) == std::make_pair(a1, a2));
    // v = 0 exactly when the discriminant vanishes (and a1 is even).
    CHECK((rec->v == 0) == (discriminant(w) == 0));
    ++done;
  }
}
