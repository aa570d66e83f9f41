#include "ssc/splitting.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssc {

CaseIndex::CaseIndex(int idx) : i(idx) {
  if (idx < 1 || idx > 5)
    throw std::invalid_argument("CaseIndex: index must be in 1..5");
}

AdmissibilityContext AdmissibilityContext::plain() { return {}; }

AdmissibilityContext AdmissibilityContext::rm(i64 d,
                                              std::vector<i64> ramified) {
  if (d <= 1 || !is_squarefree(d))
    throw std::invalid_argument("AdmissibilityContext: d must be squarefree > 1");
  AdmissibilityContext ctx;
  ctx.variant = Variant::RM;
  ctx.d = d;
  std::sort(ramified.begin(), ramified.end());
  ctx.ramified_in_K = [rams = std::move(ramified)](i64 p) {
    return std::binary_search(rams.begin(), rams.end(), p);
  };
  return ctx;
}

AdmissibilityContext AdmissibilityContext::qm(i64 dD,
                                              std::vector<i64> ramified) {
  if (dD < 1)
    throw std::invalid_argument("AdmissibilityContext: dD must be >= 1");
  AdmissibilityContext ctx;
  ctx.variant = Variant::QM;
  ctx.dD = dD;
  std::sort(ramified.begin(), ramified.end());
  ctx.ramified_in_K = [rams = std::move(ramified)](i64 p) {
    return std::binary_search(rams.begin(), rams.end(), p);
  };
  return ctx;
}

namespace {

bool plainly_admissible(i64 ell, int i) {
  switch (i) {
    case 1:
    case 2:
      return ell % 12 == 1;
    case 3:
      return ell % 8 == 1;
    case 4:
      return true;  // any odd prime
    case 5:
      return ell % 4 == 1;
  }
  return false;
}

}  // namespace

bool admissible(const PrimeModulus& ell, CaseIndex idx,
                const AdmissibilityContext& ctx) {
  const i64 l = ell.value();
  if (!plainly_admissible(l, idx.i)) return false;
  switch (ctx.variant) {
    case AdmissibilityContext::Variant::Plain:
      return true;
    case AdmissibilityContext::Variant::RM:
      if (ctx.ramified_in_K && ctx.ramified_in_K(l)) return false;
      return legendre(-ctx.d, ell) == 1;
    case AdmissibilityContext::Variant::QM:
      if (l <= 7) return false;
      if (ctx.dD % l == 0) return false;
      if (ctx.ramified_in_K && ctx.ramified_in_K(l)) return false;
      return true;
  }
  return false;
}

bool splits_in_real_quadratic(i64 d, const PrimeModulus& ell) {
  return legendre(d, ell) == 1;
}

i64 ss_template_a2(CaseIndex idx, i64 p) {
  switch (idx.i) {
    case 1: return p;
    case 2: return -p;
    case 3: return 0;
    case 4: return -2 * p;
    case 5: return 2 * p;
  }
  return 0;
}

WeilQuartic ss_template(CaseIndex idx, i64 p) {
  if (p < 7 || !is_prime_u64(static_cast<u64>(p)))
    throw std::invalid_argument("ss_template: p must be a prime >= 7");
  return make_weil(0, ss_template_a2(idx, p), p, 1);
}

bool splits_by_legendre(i64 p, const PrimeModulus& ell, CaseIndex idx) {
  if (!admissible(ell, idx, AdmissibilityContext::plain()))
    throw std::domain_error("splits_by_legendre: ell not admissible for case");
  return legendre(p, ell) != -1;
}

bool splits_by_factorization(i64 p, const PrimeModulus& ell, CaseIndex idx) {
  i64 a2 = ss_template_a2(idx, p);
  i64 q2 = mulmod(ell.reduce(p), ell.reduce(p), ell.value());
  return quartic_linear_roots(0, ell.reduce(a2), 0, q2, ell).has_value();
}

}  // namespace ssc
