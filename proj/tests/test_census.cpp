#include <map>

#include "doctest.h"
#include "ssc/census.hpp"

using namespace ssc;

namespace {

const std::vector<i64> kFixture{1, 0, 0, 0, -1, 1};  // y^2 = x^5 - x + 1
const std::vector<i64> kCM{1, 0, 0, 0, 0, 1};        // y^2 = x^5 + 1

// Oracle: count points of y^2 = f(x) over F_p by looping both coordinates,
// plus the points at infinity of the smooth model.
i64 count_by_xy_loop(const HyperellipticCurve& c, i64 p) {
  i64 count = 0;
  for (i64 x = 0; x < p; ++x) {
    i64 v = 0;
    for (size_t i = c.coeffs.size(); i-- > 0;)
      v = ((v * x + c.coeffs[i]) % p + p) % p;
    for (i64 y = 0; y < p; ++y)
      if (y * y % p == v) ++count;
  }
  return count + (c.degree() == 5 ? 1 : 2);
}

// Oracle over F_{p^2} represented as a + b t with t^2 = r.
i64 count_by_xy_loop_ext(const HyperellipticCurve& c, i64 p) {
  PrimeModulus mod(p);
  i64 r = smallest_nonresidue(mod);
  auto mul = [&](std::pair<i64, i64> u, std::pair<i64, i64> v) {
    return std::make_pair((u.first * v.first + r * u.second * v.second) % p,
                          (u.first * v.second + u.second * v.first) % p);
  };
  i64 count = 0;
  for (i64 xa = 0; xa < p; ++xa)
    for (i64 xb = 0; xb < p; ++xb) {
      std::pair<i64, i64> x{xa, xb}, v{0, 0};
      for (size_t i = c.coeffs.size(); i-- > 0;) {
        v = mul(v, x);
        v.first = ((v.first + c.coeffs[i]) % p + p) % p;
      }
      for (i64 ya = 0; ya < p; ++ya)
        for (i64 yb = 0; yb < p; ++yb) {
          auto y2 = mul({ya, yb}, {ya, yb});
          if (((y2.first % p) + p) % p == v.first &&
              ((y2.second % p) + p) % p == v.second)
            ++count;
        }
    }
  return count + (c.degree() == 5 ? 1 : 2);
}

}  // namespace

TEST_CASE("curve construction and discriminant") {
  HyperellipticCurve c = make_curve(kFixture);
  CHECK(c.degree() == 5);
  CHECK(c.disc == 2869);  // 19 * 151
  CHECK(make_curve(kCM).disc != 0);
  CHECK_THROWS(make_curve({1, 0, 0, 0}));         // wrong degree
  CHECK_THROWS(make_curve({2, 0, 0, 0, -1, 1}));  // not monic
  CHECK_THROWS(make_curve({1, 1, 0, 0, 0, 0}));   // x^4 (x + 1), not squarefree
}

TEST_CASE("poly discriminant on known values") {
  // disc(x^5 + ax + b) = 256 a^5 + 3125 b^4
  CHECK(poly_discriminant({1, -1, 0, 0, 0, 1}) == -256 + 3125);
  CHECK(poly_discriminant({1, 0, 0, 0, 0, 1}) == 3125);
  CHECK(poly_discriminant({2, 3, 0, 0, 0, 1}) == 256 * 243 + 3125 * 16);
  // disc(x^2 + bx + c) = b^2 - 4c embedded sanity via a quadratic-in-x^2 case
  CHECK(poly_discriminant({-1, 0, 1}) == 4);  // x^2 - 1
}

TEST_CASE("point counts match the two-coordinate oracle") {
  HyperellipticCurve fx = make_curve(kFixture);
  CHECK(reduce_and_count(fx, 7, 1) == 7);
  CHECK(reduce_and_count(fx, 3, 1) == 7);
  CHECK_THROWS_AS(reduce_and_count(fx, 19, 1), BadReductionError);
  CHECK_THROWS_AS(reduce_and_count(fx, 2, 1), BadReductionError);
  CHECK_THROWS(reduce_and_count(fx, 7, 3));

  HyperellipticCurve cm = make_curve(kCM);
  for (const auto& curve : {fx, cm}) {
    for (i64 p : {3, 5, 7, 11, 13, 23, 31, 47}) {
      if (curve.disc % p == 0) continue;
      CHECK(reduce_and_count(curve, p, 1) == count_by_xy_loop(curve, p));
    }
    for (i64 p : {3, 5, 7, 11}) {
      if (curve.disc % p == 0) continue;
      CHECK(reduce_and_count(curve, p, 2) == count_by_xy_loop_ext(curve, p));
    }
  }

  // A degree-6 model: y^2 = x^6 + x + 3 (monic, two rational points at
  // infinity over every good field).
  HyperellipticCurve sextic = make_curve({1, 0, 0, 0, 0, 1, 3});
  for (i64 p : {5, 7, 11, 13}) {
    if (sextic.disc % p == 0) continue;
    CHECK(reduce_and_count(sextic, p, 1) == count_by_xy_loop(sextic, p));
    if (p <= 7)
      CHECK(reduce_and_count(sextic, p, 2) == count_by_xy_loop_ext(sextic, p));
  }
}

TEST_CASE("frobenius quartic recovery") {
  HyperellipticCurve fx = make_curve(kFixture);
  CHECK(reduce_and_count(fx, 3, 1) == 7);
  CHECK(reduce_and_count(fx, 3, 2) == 15);
  WeilQuartic w = frobenius_quartic(fx, 3);
  CHECK(w.a1 == 3);
  CHECK(w.a2 == 7);

  // CM curve: supersingular at p = 19 (19 = 4 mod 5), so p | a1 and p | a2.
  HyperellipticCurve cm = make_curve(kCM);
  WeilQuartic w19 = frobenius_quartic(cm, 19);
  CHECK(w19.a1 % 19 == 0);
  CHECK(w19.a2 % 19 == 0);

  // Weil bound |a1| <= 4 sqrt(p) holds by construction (make_weil validated).
  for (i64 p : {7, 11, 13, 23}) {
    WeilQuartic wp = frobenius_quartic(fx, p);
    CHECK(wp.a1 * wp.a1 <= 16 * p);
  }
}

TEST_CASE("census scan basics") {
  HyperellipticCurve fx = make_curve(kFixture);
  CHECK(census_scan(fx, 5).empty());

  std::vector<i64> skipped;
  CensusOptions opt;
  opt.skipped_bad_primes = &skipped;
  auto records = census_scan(fx, 50, opt);
  CHECK(skipped == std::vector<i64>{19});
  for (const auto& r : records) {
    CHECK(r.p >= 7);
    CHECK(r.p != 19);
    // Zeta bookkeeping: N1 and N2 recompute from a1, a2.
    CHECK(r.n1 == r.p + 1 + r.a1);
    CHECK(r.n2 == r.p * r.p + 1 - (r.a1 * r.a1 - 2 * r.a2));
    CHECK(validate_weil(r.a1, r.a2, r.p));
  }
  for (size_t i = 1; i < records.size(); ++i)
    CHECK(records[i - 1].p < records[i].p);

  // Determinism across thread counts.
  CensusOptions serial;
  serial.threads = 1;
  CensusOptions parallel;
  parallel.threads = 4;
  CHECK(census_to_csv(census_scan(fx, 300, serial)) ==
        census_to_csv(census_scan(fx, 300, parallel)));
}

TEST_CASE("CM fixture classification split by residue class") {
  HyperellipticCurve cm = make_curve(kCM);
  auto records = census_scan(cm, 100);
  CHECK(!records.empty());
  for (const auto& r : records) {
    if (r.p % 5 == 4) CHECK(is_supersingular(r.cls));
    if (r.p % 5 == 1) CHECK(r.cls == SurfaceClass::Ordinary);
  }
}

TEST_CASE("screen mode keeps exactly the p-rank-zero candidates") {
  HyperellipticCurve cm = make_curve(kCM);
  auto full = census_scan(cm, 200);
  CensusOptions opt;
  opt.mode = CensusOptions::Mode::ScreenPRankZero;
  auto screened = census_scan(cm, 200, opt);
  std::map<i64, CensusRecord> by_p;
  for (const auto& r : screened) by_p[r.p] = r;
  for (const auto& r : full) {
    if (r.a1 % r.p == 0) {
      REQUIRE(by_p.count(r.p));
      CHECK(by_p[r.p] == r);
    } else {
      CHECK(!by_p.count(r.p));
    }
  }
}

TEST_CASE("counting functions") {
  HyperellipticCurve cm = make_curve(kCM);
  auto records = census_scan(cm, 300);

  i64 split = counting_functions(records, Selector::ss_split());
  i64 total = counting_functions(records, Selector::ss_total());
  CHECK(total >= split);

  // g(p) = 2p selects exactly the split records.
  CHECK(counting_functions(records, Selector::split_with_rule(
                                        CoefficientRule::affine_in_p(0))) ==
        split);

  // The full interval selects every vanishing-discriminant record.
  i64 delta0 = 0;
  for (const auto& r : records)
    if (r.delta == 0) ++delta0;
  CHECK(counting_functions(records,
                           Selector::split_with_interval(-6 * 300, 6 * 300)) ==
        delta0);

  // SS-total equals the independent p-rank-0 count.
  i64 prank0 = 0;
  for (const auto& r : records)
    if (r.a1 % r.p == 0 && r.a2 % r.p == 0) ++prank0;
  CHECK(total == prank0);

  // Rule evaluation enforces |g(p)| <= 6p at every counted prime.
  CHECK_THROWS(counting_functions(
      records, Selector::split_with_rule(CoefficientRule::constant(100000))));

  // External tables must cover every record.
  std::map<i64, i64> table;
  for (const auto& r : records) table[r.p] = 2 * r.p;
  CHECK(counting_functions(records, Selector::split_with_rule(
                                        CoefficientRule::external(table))) ==
        split);
}

TEST_CASE("csv round trip") {
  HyperellipticCurve fx = make_curve(kFixture);
  auto records = census_scan(fx, 200);
  std::string csv = census_to_csv(records);
  auto back = census_from_csv(csv);
  CHECK(back == records);
  CHECK(census_to_csv(back) == csv);
}
