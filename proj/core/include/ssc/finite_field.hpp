#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace ssc {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime_u64(u64 n);

/// (a * b) mod m without overflow.
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, u64 exp, i64 m);
/// Inverse of a mod m, m prime, a not divisible by m.
i64 invmod(i64 a, i64 m);

namespace detail {
// Precomputed quadratic-residue data for small moduli. legendre[n] in {-1,0,1},
// sqrt[n] = smallest square root of n or -1, nonresidue = smallest positive
// non-residue.
struct QrTable {
  std::vector<std::int8_t> legendre;
  std::vector<std::int32_t> sqrt;
  i64 nonresidue{0};
};
inline constexpr i64 kQrTableLimit = 1 << 13;
}  // namespace detail

/// An odd prime modulus. Primality is checked at construction; residues are
/// kept in the canonical range [0, ell). Immutable and cheap to copy.
class PrimeModulus {
 public:
  explicit PrimeModulus(i64 ell);

  i64 value() const { return ell_; }

  /// n reduced into [0, ell); negative inputs allowed.
  i64 reduce(i64 n) const {
    i64 r = n % ell_;
    return r < 0 ? r + ell_ : r;
  }

  friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) {
    return a.ell_ == b.ell_;
  }

  const detail::QrTable* table() const { return table_.get(); }

 private:
  i64 ell_;
  std::shared_ptr<const detail::QrTable> table_;  // populated for small ell
};

/// Legendre symbol (n/ell): 0 iff ell | n, 1 for nonzero squares, -1 otherwise.
int legendre(i64 n, const PrimeModulus& ell);

/// Square root of n mod ell when one exists: the root in [0, ell/2] for
/// residues, 0 when ell | n, empty for non-residues.
std::optional<i64> sqrt_mod(i64 n, const PrimeModulus& ell);

/// Smallest positive quadratic non-residue mod ell.
i64 smallest_nonresidue(const PrimeModulus& ell);

/// Roots of the monic quartic X^4 + c3 X^3 + c2 X^2 + c1 X + c0 over F_ell,
/// with multiplicity and sorted ascending, provided the quartic factors
/// completely into linear factors; empty otherwise.
std::optional<std::array<i64, 4>> quartic_linear_roots(i64 c3, i64 c2, i64 c1,
                                                       i64 c0,
                                                       const PrimeModulus& ell);

/// Same for a monic quadratic X^2 + c1 X + c0.
std::optional<std::array<i64, 2>> quadratic_linear_roots(
    i64 c1, i64 c0, const PrimeModulus& ell);

/// Element a + b*sqrt(r) of F_{ell^2}, where r is the smallest positive
/// non-residue mod ell. Plain value type; the field data ride along.
struct ExtFieldElem {
  i64 a{0};
  i64 b{0};
  i64 ell{0};
  i64 r{0};

  static ExtFieldElem make(i64 a, i64 b, const PrimeModulus& m);

  bool is_zero() const { return a == 0 && b == 0; }
  ExtFieldElem conj() const { return {a, b == 0 ? 0 : ell - b, ell, r}; }

  /// Norm to the base field: a^2 - r b^2.
  i64 norm() const;

  ExtFieldElem operator+(const ExtFieldElem& o) const;
  ExtFieldElem operator-(const ExtFieldElem& o) const;
  ExtFieldElem operator*(const ExtFieldElem& o) const;
  bool operator==(const ExtFieldElem& o) const {
    return a == o.a && b == o.b && ell == o.ell && r == o.r;
  }

  ExtFieldElem inverse() const;
  ExtFieldElem pow(u64 e) const;

  /// Quadratic character of this element in F_{ell^2}: the value of
  /// z^((ell^2-1)/2), i.e. 0, 1 or -1. Computed through the Frobenius
  /// factorization z^((ell^2-1)/2) = (z * z^ell)^((ell-1)/2) = N(z)^((ell-1)/2).
  int chi(const PrimeModulus& m) const;
};

}  // namespace ssc
