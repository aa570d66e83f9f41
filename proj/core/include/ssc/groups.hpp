#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ssc/finite_field.hpp"

namespace ssc {

/// The three group families: GL2 over F_ell (the quaternion-multiplication
/// image), the symplectic similitude group GSp4, and the determinant fiber
/// product of two GL2 copies (the real-multiplication image).
enum class Family { GL2QM, GSp4, Fiber };

enum class SubgroupName { Full, Borel, Unipotent, UnipotentPrime, Torus };

struct Mat2 {
  std::array<i64, 4> e{};  // row-major

  i64& at(int r, int c) { return e[static_cast<size_t>(2 * r + c)]; }
  i64 at(int r, int c) const { return e[static_cast<size_t>(2 * r + c)]; }
  bool operator==(const Mat2&) const = default;

  static Mat2 identity() { return {{1, 0, 0, 1}}; }
  static Mat2 diag(i64 a, i64 b) { return {{a, 0, 0, b}}; }
  /// Companion matrix of X^2 + b X + c.
  static Mat2 companion(i64 b, i64 c, const PrimeModulus& m);
};

Mat2 mat2_mul(const Mat2& a, const Mat2& b, const PrimeModulus& m);
i64 mat2_det(const Mat2& a, const PrimeModulus& m);
i64 mat2_trace(const Mat2& a, const PrimeModulus& m);
Mat2 mat2_inverse(const Mat2& a, const PrimeModulus& m);
Mat2 mat2_transpose(const Mat2& a);
/// (c1, c0) of the characteristic polynomial X^2 + c1 X + c0.
std::pair<i64, i64> char_poly_quadratic(const Mat2& a, const PrimeModulus& m);

struct Mat4 {
  std::array<i64, 16> e{};

  i64& at(int r, int c) { return e[static_cast<size_t>(4 * r + c)]; }
  i64 at(int r, int c) const { return e[static_cast<size_t>(4 * r + c)]; }
  bool operator==(const Mat4&) const = default;

  static Mat4 identity();
  static Mat4 diag(i64 a, i64 b, i64 c, i64 d);
  static Mat4 from_blocks(const Mat2& a, const Mat2& b, const Mat2& c,
                          const Mat2& d);
  Mat2 block(int r, int c) const;  // 2x2 block at block-position (r, c)
};

Mat4 mat4_mul(const Mat4& a, const Mat4& b, const PrimeModulus& m);
i64 mat4_det(const Mat4& a, const PrimeModulus& m);
Mat4 mat4_inverse(const Mat4& a, const PrimeModulus& m);
Mat4 mat4_transpose(const Mat4& a);
/// (c3, c2, c1, c0) of X^4 + c3 X^3 + c2 X^2 + c1 X + c0.
std::array<i64, 4> char_poly_quartic_mat4(const Mat4& a, const PrimeModulus& m);

/// Similitude multiplier of a raw 4x4 matrix: the mu with
/// -C^t A + A^t C = 0, -C^t B + A^t D = mu I, -D^t B + B^t D = 0,
/// when the block conditions hold for some unit mu; empty otherwise.
std::optional<i64> multiplier(const Mat4& m, const PrimeModulus& ell);

/// Element of one of the three families, entries reduced mod ell.
/// GL2QM uses m1; Fiber uses the pair (m1, m2) with det m1 = det m2;
/// GSp4 uses m4 and carries its similitude multiplier.
struct GroupElement {
  Family family{Family::GL2QM};
  PrimeModulus mod;
  Mat2 m1{};
  Mat2 m2{};
  Mat4 m4{};
  i64 mu{0};  // GSp4 only

  bool operator==(const GroupElement& o) const {
    return family == o.family && mod == o.mod && m1 == o.m1 && m2 == o.m2 &&
           m4 == o.m4;
  }
};

/// Validating constructors. Each reduces entries and checks the family
/// invariants (nonzero determinants, matching determinants, block conditions).
GroupElement gl2_element(const Mat2& m, const PrimeModulus& ell);
GroupElement fiber_element(const Mat2& a, const Mat2& b,
                           const PrimeModulus& ell);
GroupElement gsp4_element(const Mat4& m, const PrimeModulus& ell);

GroupElement group_identity(Family f, const PrimeModulus& ell);
GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_inverse(const GroupElement& a);

/// Characteristic polynomial as a monic quartic (c3, c2, c1, c0), defined
/// for GSp4 and Fiber. GL2QM elements have a quadratic characteristic
/// polynomial; use char_poly_quadratic on the 2x2 block instead.
std::array<i64, 4> char_poly_quartic(const GroupElement& m);

/// Conjugation-invariant set label. GL2QM admits i in {4, 5}; GSp4 and
/// Fiber admit i in {1..5}. The pairs (1, 2) and (4, 5) describe identical
/// sets and are kept apart for bookkeeping.
struct ConjSetId {
  Family family;
  int i;
};
ConjSetId make_conj_set_id(Family f, int i);

/// Closed-form order of the named subgroup, valid for odd ell >= 3.
i64 group_order(Family f, SubgroupName sub, const PrimeModulus& ell);

/// Brute-force order by enumeration; guarded against infeasible sizes
/// (GL2QM ell <= 31, Fiber ell <= 11, GSp4 ell = 3).
i64 enumerate_subgroup_order(Family f, SubgroupName sub,
                             const PrimeModulus& ell);

bool is_member(const GroupElement& m, SubgroupName sub);

bool in_conj_set(const GroupElement& m, ConjSetId id);

/// An explicit element of the conjugacy set, built from square roots of
/// small multiples of mu = 1. Preconditions: ell >= 5 for GL2QM; for GSp4
/// and Fiber, -1, 2 and 3 must all be squares mod ell.
GroupElement witness(ConjSetId id, const PrimeModulus& ell);

/// Returns (g, b) with b = g^-1 m g inside the Borel subgroup. g is
/// symplectic for GSp4 (built from an isotropic eigenflag) and det-matched
/// for Fiber. Throws when the characteristic polynomial does not split.
std::pair<GroupElement, GroupElement> conjugate_into_borel(
    const GroupElement& m);

/// Exact cardinality of the image of (conj-set intersect Borel) in
/// Borel/U', counted over canonical torus representatives modulo
/// simultaneous scaling.
i64 quotient_image_size(ConjSetId id, const PrimeModulus& ell);

/// Uniform-ish random symplectic similitude, built from a random symplectic
/// basis and a random multiplier twist.
GroupElement random_gsp4_element(const PrimeModulus& ell,
                                 std::mt19937_64& rng);

/// Random element of the named conjugacy set: a random template instance
/// conjugated by a random group element.
GroupElement random_conj_set_element(ConjSetId id, const PrimeModulus& ell,
                                     std::mt19937_64& rng);

/// Random element of the named subgroup.
GroupElement random_subgroup_element(Family f, SubgroupName sub,
                                     const PrimeModulus& ell,
                                     std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Verification suite behind the verify-groups command: each named check
// re-derives one structural property at the given scale and reports
// pass/fail with a counterexample when one exists.

struct VerificationEntry {
  std::string check;
  std::string family;
  i64 ell;
  bool pass;
  std::string detail;
};

struct GroupsVerifyOptions {
  std::vector<i64> gl2_order_ells{5, 7};
  std::vector<i64> fiber_order_ells{5};
  std::vector<i64> gsp4_order_ells{3};
  std::vector<i64> closure_ells{5, 7, 11, 13};  // exhaustive, GL2QM/Fiber
  i64 gsp4_sample_ell{73};
  int gsp4_samples{10000};
  i64 witness_max_ell{200};
  std::uint64_t seed{0x5353435F47525053ULL};
  int threads{0};  // 0 = hardware_concurrency
};

std::vector<VerificationEntry> verify_groups(const GroupsVerifyOptions& opt);

}  // namespace ssc
