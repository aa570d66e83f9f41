#pragma once

#include <optional>
#include <string>
#include <utility>

#include "ssc/finite_field.hpp"

namespace ssc {

/// Reduction type of an abelian surface over F_p, read off its Frobenius
/// quartic. The four SimpleSS variants correspond to the middle coefficients
/// +p, -p, 0, -2p; SplitSS is the middle coefficient +2p.
enum class SurfaceClass {
  Ordinary,
  PRankOne,
  SimpleSSPlusP,
  SimpleSSMinusP,
  SimpleSSZero,
  SimpleSSMinus2P,
  SplitSS,
  NotSS,
};

bool is_supersingular(SurfaceClass c);
std::string to_string(SurfaceClass c);

/// The quartic X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2 with q = p^k, known to
/// satisfy the Weil bounds (enforced at construction via make_weil).
struct WeilQuartic {
  i64 a1{0};
  i64 a2{0};
  i64 p{0};
  int k{1};

  i64 q() const;
  /// Frobenius trace, -a1.
  i64 trace() const { return -a1; }
};

/// Decompose q = p^k with p prime; empty if q is not a prime power.
std::optional<std::pair<i64, int>> prime_power_decompose(i64 q);

/// True iff (a1, a2, q) defines a q-Weil quartic of the symmetric form: the
/// quadratic Y^2 + a1 Y + (a2 - 2q) has both real roots in [-2 sqrt(q),
/// 2 sqrt(q)]. Decided in exact integer arithmetic. Throws if q is not a
/// prime power.
bool validate_weil(i64 a1, i64 a2, i64 q);

/// Validating constructor; throws on invalid input.
WeilQuartic make_weil(i64 a1, i64 a2, i64 p, int k = 1);

/// a1^2 - 4 a2 + 8q. Vanishes exactly on the perfect-square quartics.
i64 discriminant(const WeilQuartic& w);

/// Classification over the prime field, p >= 7, k = 1. Returns one of the
/// four SimpleSS variants, SplitSS, or NotSS.
SurfaceClass classify_supersingular(const WeilQuartic& w);

/// NotSS refined into Ordinary / PRankOne via the p-rank.
SurfaceClass classify_full(const WeilQuartic& w);

/// 2 iff p does not divide a2; 1 iff p | a2 and p does not divide a1; 0 iff
/// p divides both. From the mod-p factorization X^2 (X^2 + a1 X + a2).
int p_rank(const WeilQuartic& w);

/// (u + v sqrt(d)) / 2 in the ring of integers of Q(sqrt(d)), d squarefree.
/// For d != 1 mod 4 both u and v are even; for d = 1 mod 4 they share parity.
struct QuadFieldElem {
  i64 d{0};
  i64 u{0};
  i64 v{0};

  i64 trace() const { return u; }
  i64 norm() const { return (u * u - d * v * v) / 4; }
  QuadFieldElem conjugate() const { return {d, u, -v}; }
  bool operator==(const QuadFieldElem&) const = default;
};

bool is_squarefree(i64 d);

/// Validating constructor for QuadFieldElem; throws unless d is squarefree
/// > 1 and (u, v) satisfies the integrality condition of O_{Q(sqrt d)}.
QuadFieldElem make_quad_field_elem(i64 d, i64 u, i64 v);

/// Coefficients (a1, a2) of (X^2 + bX + q)(X^2 + conj(b)X + q).
std::pair<i64, i64> rm_expand(const QuadFieldElem& b, i64 q);

/// The element b of O_{Q(sqrt d)} with trace(b) = a1 and norm(b) = a2 - 2q,
/// when one exists; equivalently u = a1 and d v^2 = discriminant. Returned
/// with v >= 0; the conjugate is the other solution. When the discriminant
/// vanishes the factorization is a perfect square with rational b = a1/2
/// (k = 1 only; k >= 2 is rejected).
std::optional<QuadFieldElem> rm_factor(const WeilQuartic& w, i64 d);

}  // namespace ssc
