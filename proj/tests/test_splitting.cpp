#include <vector>

#include "doctest.h"
#include "ssc/census.hpp"
#include "ssc/splitting.hpp"

using namespace ssc;

TEST_CASE("plain admissibility") {
  auto plain = AdmissibilityContext::plain();
  CHECK(admissible(PrimeModulus(13), CaseIndex(1), plain));
  CHECK(admissible(PrimeModulus(37), CaseIndex(2), plain));
  CHECK(!admissible(PrimeModulus(5), CaseIndex(1), plain));
  CHECK(admissible(PrimeModulus(17), CaseIndex(3), plain));
  CHECK(!admissible(PrimeModulus(13), CaseIndex(3), plain));
  CHECK(admissible(PrimeModulus(3), CaseIndex(4), plain));
  CHECK(admissible(PrimeModulus(5), CaseIndex(5), plain));
  CHECK(!admissible(PrimeModulus(7), CaseIndex(5), plain));
  CHECK_THROWS(CaseIndex(0));
  CHECK_THROWS(CaseIndex(6));
}

TEST_CASE("rm and qm admissibility") {
  auto rm = AdmissibilityContext::rm(2, {13});
  // (-2/ell) = 1 iff ell = 1, 3 mod 8; ell = 1 mod 12 too for i = 1.
  CHECK(!admissible(PrimeModulus(13), CaseIndex(1), rm));  // ramified
  CHECK(admissible(PrimeModulus(73), CaseIndex(1), rm));   // 73 = 1 mod 24, (-2/73) = 1
  CHECK(!admissible(PrimeModulus(37), CaseIndex(1), rm));  // (-2/37) = -1

  auto qm = AdmissibilityContext::qm(6, {11});
  CHECK(!admissible(PrimeModulus(3), CaseIndex(4), qm));   // ell <= 7
  CHECK(!admissible(PrimeModulus(11), CaseIndex(4), qm));  // ramified in K
  CHECK(admissible(PrimeModulus(13), CaseIndex(4), qm));
  CHECK_THROWS(AdmissibilityContext::rm(12, {}));
  CHECK_THROWS(AdmissibilityContext::qm(0, {}));
}

TEST_CASE("the two RM renderings agree exactly for ell = 1 mod 4") {
  for (i64 d : {2, 3, 5, 13}) {
    for (i64 l : primes_up_to(100)) {
      if (l < 3 || l == d || d % l == 0) continue;
      PrimeModulus ell(l);
      bool displayed = legendre(-d, ell) == 1;
      bool split_form = splits_in_real_quadratic(d, ell);
      if (l % 4 == 1) CHECK(displayed == split_form);
    }
  }
  // And they do differ somewhere with ell = 3 mod 4.
  bool found_difference = false;
  for (i64 d : {2, 3, 5, 13})
    for (i64 l : primes_up_to(50)) {
      if (l < 3 || l % 4 != 3 || d % l == 0) continue;
      PrimeModulus ell(l);
      if ((legendre(-d, ell) == 1) != splits_in_real_quadratic(d, ell))
        found_difference = true;
    }
  CHECK(found_difference);
}

TEST_CASE("templates") {
  WeilQuartic t1 = ss_template(CaseIndex(1), 7);
  CHECK(t1.a1 == 0);
  CHECK(t1.a2 == 7);
  CHECK(ss_template(CaseIndex(4), 7).a2 == -14);
  CHECK(ss_template(CaseIndex(5), 7).a2 == 14);
  CHECK_THROWS(ss_template(CaseIndex(1), 5));
  CHECK_THROWS(ss_template(CaseIndex(1), 9));
  // Templates pass the Weil bounds for every small prime p >= 7.
  for (i64 p : primes_up_to(200)) {
    if (p < 7) continue;
    for (int i = 1; i <= 5; ++i)
      CHECK(validate_weil(0, ss_template_a2(CaseIndex(i), p), p));
  }
}

TEST_CASE("splitting criterion examples") {
  PrimeModulus five(5);
  CHECK(splits_by_legendre(5, five, CaseIndex(5)));   // p = ell
  CHECK(splits_by_factorization(5, five, CaseIndex(5)));
  CHECK(!splits_by_legendre(2, five, CaseIndex(5)));
  CHECK(splits_by_legendre(11, five, CaseIndex(5)));
  CHECK(splits_by_factorization(11, five, CaseIndex(5)));

  PrimeModulus thirteen(13);
  CHECK(!splits_by_factorization(2, thirteen, CaseIndex(1)));
  CHECK(splits_by_factorization(3, thirteen, CaseIndex(1)));

  CHECK_THROWS(splits_by_legendre(7, five, CaseIndex(1)));  // 5 not in L_1
}

TEST_CASE("legendre criterion equals the factorization oracle on admissible primes") {
  auto plain = AdmissibilityContext::plain();
  auto primes = primes_up_to(199);
  long long checked = 0;
  for (int i = 1; i <= 5; ++i) {
    CaseIndex idx(i);
    for (i64 l : {3, 5, 13, 17, 29, 37, 41}) {
      PrimeModulus ell(l);
      if (!admissible(ell, idx, plain)) continue;
      for (i64 p : primes) {
        CHECK(splits_by_legendre(p, ell, idx) ==
              splits_by_factorization(p, ell, idx));
        ++checked;
      }
    }
  }
  CHECK(checked > 800);
}

TEST_CASE("the equivalence genuinely needs admissibility") {
  // Search for a witness triple with ell outside L_i where the Legendre
  // reading and the factorization oracle disagree.
  auto plain = AdmissibilityContext::plain();
  bool found = false;
  i64 wp = 0, wl = 0;
  int wi = 0;
  for (int i = 1; i <= 5 && !found; ++i) {
    CaseIndex idx(i);
    for (i64 l : primes_up_to(49)) {
      if (l < 3 || found) continue;
      PrimeModulus ell(l);
      if (admissible(ell, idx, plain)) continue;
      for (i64 p : primes_up_to(499)) {
        bool legendre_side = legendre(p, ell) != -1;
        bool factor_side = splits_by_factorization(p, ell, idx);
        if (legendre_side != factor_side) {
          found = true;
          wp = p;
          wl = l;
          wi = i;
          break;
        }
      }
    }
  }
  CHECK(found);
  INFO("witness triple p=", wp, " ell=", wl, " i=", wi);
}
