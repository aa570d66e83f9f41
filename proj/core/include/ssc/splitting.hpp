#pragma once

#include <functional>
#include <vector>

#include "ssc/finite_field.hpp"
#include "ssc/weil.hpp"

namespace ssc {

/// Index of the five supersingular middle-coefficient templates:
/// +p, -p, 0, -2p, +2p for i = 1..5.
struct CaseIndex {
  int i;
  explicit CaseIndex(int idx);
};

/// Which admissible auxiliary-prime set applies: the plain congruence sets,
/// their real-multiplication refinement, or the quaternion refinement.
struct AdmissibilityContext {
  enum class Variant { Plain, RM, QM };
  Variant variant{Variant::Plain};
  i64 d{0};   // RM: the squarefree radicand
  i64 dD{0};  // QM: quaternion algebra discriminant
  std::function<bool(i64)> ramified_in_K;

  static AdmissibilityContext plain();
  static AdmissibilityContext rm(i64 d, std::vector<i64> ramified_primes);
  static AdmissibilityContext qm(i64 dD, std::vector<i64> ramified_primes);
};

/// Membership of ell in L_i (Plain), L_i^RM, or L_i^QM. The plain sets are
/// congruence conditions: ell = 1 mod 12 for i in {1,2}, 1 mod 8 for i = 3,
/// any odd prime for i = 4, 1 mod 4 for i = 5.
bool admissible(const PrimeModulus& ell, CaseIndex i,
                const AdmissibilityContext& ctx);

/// The "ell splits in Q(sqrt d)" rendering, (d/ell) = 1. The RM context
/// instead uses the displayed condition (-d/ell) = 1; the two agree for
/// ell = 1 mod 4 and differ otherwise, and both are exposed on purpose.
bool splits_in_real_quadratic(i64 d, const PrimeModulus& ell);

/// The i-th supersingular Frobenius quartic at p: a1 = 0 and
/// a2 = p, -p, 0, -2p, 2p.
WeilQuartic ss_template(CaseIndex i, i64 p);

/// Middle coefficient of the i-th template, defined for every prime p.
i64 ss_template_a2(CaseIndex i, i64 p);

/// The Legendre-symbol side of the splitting criterion: for admissible ell,
/// the template quartic splits mod ell iff (p/ell) != -1. Throws if ell is
/// not plainly admissible for i.
bool splits_by_legendre(i64 p, const PrimeModulus& ell, CaseIndex i);

/// The factorization oracle: reduce the template mod ell and test for a
/// complete splitting into linear factors. No admissibility required.
bool splits_by_factorization(i64 p, const PrimeModulus& ell, CaseIndex i);

}  // namespace ssc
