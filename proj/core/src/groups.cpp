#include "ssc/groups.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ssc {

namespace {

i64 md(i64 v, i64 p) {
  v %= p;
  return v < 0 ? v + p : v;
}

}  // namespace

// ---------------------------------------------------------------------------
// 2x2 and 4x4 arithmetic

Mat2 Mat2::companion(i64 b, i64 c, const PrimeModulus& m) {
  return {{0, m.reduce(-c), 1, m.reduce(-b)}};
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b, const PrimeModulus& m) {
  const i64 p = m.value();
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.at(i, j) =
          md(mulmod(a.at(i, 0), b.at(0, j), p) + mulmod(a.at(i, 1), b.at(1, j), p), p);
  return r;
}

i64 mat2_det(const Mat2& a, const PrimeModulus& m) {
  const i64 p = m.value();
  return md(mulmod(a.at(0, 0), a.at(1, 1), p) - mulmod(a.at(0, 1), a.at(1, 0), p), p);
}

i64 mat2_trace(const Mat2& a, const PrimeModulus& m) {
  return m.reduce(a.at(0, 0) + a.at(1, 1));
}

Mat2 mat2_inverse(const Mat2& a, const PrimeModulus& m) {
  const i64 p = m.value();
  i64 det = mat2_det(a, m);
  if (det == 0) throw std::domain_error("mat2_inverse: singular matrix");
  i64 inv = invmod(det, p);
  return {{mulmod(a.at(1, 1), inv, p), mulmod(md(-a.at(0, 1), p), inv, p),
           mulmod(md(-a.at(1, 0), p), inv, p), mulmod(a.at(0, 0), inv, p)}};
}

Mat2 mat2_transpose(const Mat2& a) {
  return {{a.at(0, 0), a.at(1, 0), a.at(0, 1), a.at(1, 1)}};
}

std::pair<i64, i64> char_poly_quadratic(const Mat2& a, const PrimeModulus& m) {
  return {m.reduce(-mat2_trace(a, m)), mat2_det(a, m)};
}

Mat4 Mat4::identity() { return diag(1, 1, 1, 1); }

Mat4 Mat4::diag(i64 a, i64 b, i64 c, i64 d) {
  Mat4 r;
  r.at(0, 0) = a;
  r.at(1, 1) = b;
  r.at(2, 2) = c;
  r.at(3, 3) = d;
  return r;
}

Mat4 Mat4::from_blocks(const Mat2& a, const Mat2& b, const Mat2& c,
                       const Mat2& d) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.at(i, j) = a.at(i, j);
      r.at(i, j + 2) = b.at(i, j);
      r.at(i + 2, j) = c.at(i, j);
      r.at(i + 2, j + 2) = d.at(i, j);
    }
  return r;
}

Mat2 Mat4::block(int br, int bc) const {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = at(2 * br + i, 2 * bc + j);
  return r;
}

Mat4 mat4_mul(const Mat4& a, const Mat4& b, const PrimeModulus& m) {
  const i64 p = m.value();
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      i64 s = 0;
      for (int k = 0; k < 4; ++k) s += mulmod(a.at(i, k), b.at(k, j), p);
      r.at(i, j) = md(s, p);
    }
  return r;
}

Mat4 mat4_transpose(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.at(i, j) = a.at(j, i);
  return r;
}

i64 mat4_det(const Mat4& a, const PrimeModulus& m) {
  const i64 p = m.value();
  // Gaussian elimination on a copy.
  Mat4 w = a;
  i64 det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (w.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < 4; ++j) std::swap(w.at(piv, j), w.at(col, j));
      det = md(-det, p);
    }
    det = mulmod(det, w.at(col, col), p);
    i64 inv = invmod(w.at(col, col), p);
    for (int r = col + 1; r < 4; ++r) {
      if (w.at(r, col) == 0) continue;
      i64 f = mulmod(w.at(r, col), inv, p);
      for (int j = col; j < 4; ++j)
        w.at(r, j) = md(w.at(r, j) - mulmod(f, w.at(col, j), p), p);
    }
  }
  return det;
}

Mat4 mat4_inverse(const Mat4& a, const PrimeModulus& m) {
  const i64 p = m.value();
  Mat4 w = a;
  Mat4 inv = Mat4::identity();
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (w.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("mat4_inverse: singular matrix");
    if (piv != col)
      for (int j = 0; j < 4; ++j) {
        std::swap(w.at(piv, j), w.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    i64 f = invmod(w.at(col, col), p);
    for (int j = 0; j < 4; ++j) {
      w.at(col, j) = mulmod(w.at(col, j), f, p);
      inv.at(col, j) = mulmod(inv.at(col, j), f, p);
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col || w.at(r, col) == 0) continue;
      i64 g = w.at(r, col);
      for (int j = 0; j < 4; ++j) {
        w.at(r, j) = md(w.at(r, j) - mulmod(g, w.at(col, j), p), p);
        inv.at(r, j) = md(inv.at(r, j) - mulmod(g, inv.at(col, j), p), p);
      }
    }
  }
  return inv;
}

std::array<i64, 4> char_poly_quartic_mat4(const Mat4& a,
                                          const PrimeModulus& m) {
  const i64 p = m.value();
  // det(XI - M) via the Leibniz expansion; entries are linear polynomials.
  std::array<i64, 5> acc{};  // coefficients of X^0..X^4
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inversions;
    i64 sign = (inversions % 2 == 0) ? 1 : p - 1;
    // Product of entries (XI - M)[i][perm[i]], each constant or linear.
    std::array<i64, 5> term{};
    term[0] = sign;
    int deg = 0;
    for (int i = 0; i < 4; ++i) {
      i64 c0 = md(-a.at(i, perm[i]), p);
      if (perm[i] == i) {
        // multiply by (X + c0)
        for (int d = deg + 1; d >= 1; --d)
          term[d] = md(term[d - 1] + mulmod(term[d], c0, p), p);
        term[0] = mulmod(term[0], c0, p);
        ++deg;
      } else {
        for (int d = 0; d <= deg; ++d) term[d] = mulmod(term[d], c0, p);
      }
    }
    for (int d = 0; d <= deg; ++d) acc[d] = md(acc[d] + term[d], p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  assert(acc[4] == 1);
  return {acc[3], acc[2], acc[1], acc[0]};
}

std::optional<i64> multiplier(const Mat4& m, const PrimeModulus& ell) {
  const i64 p = ell.value();
  Mat2 A = m.block(0, 0), B = m.block(0, 1), C = m.block(1, 0),
       D = m.block(1, 1);
  Mat2 At = mat2_transpose(A), Ct = mat2_transpose(C), Dt = mat2_transpose(D),
       Bt = mat2_transpose(B);
  auto sub = [&](const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 4; ++i)
      r.e[static_cast<size_t>(i)] =
          md(x.e[static_cast<size_t>(i)] - y.e[static_cast<size_t>(i)], p);
    return r;
  };
  Mat2 zero{};
  if (sub(mat2_mul(At, C, ell), mat2_mul(Ct, A, ell)) != zero)
    return std::nullopt;
  if (sub(mat2_mul(Bt, D, ell), mat2_mul(Dt, B, ell)) != zero)
    return std::nullopt;
  Mat2 E = sub(mat2_mul(At, D, ell), mat2_mul(Ct, B, ell));
  if (E.at(0, 1) != 0 || E.at(1, 0) != 0 || E.at(0, 0) != E.at(1, 1))
    return std::nullopt;
  i64 mu = E.at(0, 0);
  if (mu == 0) return std::nullopt;
  return mu;
}

// ---------------------------------------------------------------------------
// Elements

namespace {

Mat2 reduce2(const Mat2& a, const PrimeModulus& m) {
  Mat2 r;
  for (size_t i = 0; i < 4; ++i) r.e[i] = m.reduce(a.e[i]);
  return r;
}

Mat4 reduce4(const Mat4& a, const PrimeModulus& m) {
  Mat4 r;
  for (size_t i = 0; i < 16; ++i) r.e[i] = m.reduce(a.e[i]);
  return r;
}

}  // namespace

GroupElement gl2_element(const Mat2& m, const PrimeModulus& ell) {
  Mat2 r = reduce2(m, ell);
  if (mat2_det(r, ell) == 0)
    throw std::invalid_argument("gl2_element: singular matrix");
  return GroupElement{Family::GL2QM, ell, r, Mat2{}, Mat4{}, 0};
}

GroupElement fiber_element(const Mat2& a, const Mat2& b,
                           const PrimeModulus& ell) {
  Mat2 ra = reduce2(a, ell), rb = reduce2(b, ell);
  i64 da = mat2_det(ra, ell), db = mat2_det(rb, ell);
  if (da == 0 || da != db)
    throw std::invalid_argument("fiber_element: determinants must match and be nonzero");
  return GroupElement{Family::Fiber, ell, ra, rb, Mat4{}, 0};
}

GroupElement gsp4_element(const Mat4& m, const PrimeModulus& ell) {
  Mat4 r = reduce4(m, ell);
  auto mu = multiplier(r, ell);
  if (!mu)
    throw std::invalid_argument("gsp4_element: block conditions fail, not a similitude");
  return GroupElement{Family::GSp4, ell, Mat2{}, Mat2{}, r, *mu};
}

GroupElement group_identity(Family f, const PrimeModulus& ell) {
  switch (f) {
    case Family::GL2QM: return gl2_element(Mat2::identity(), ell);
    case Family::Fiber:
      return fiber_element(Mat2::identity(), Mat2::identity(), ell);
    case Family::GSp4: return gsp4_element(Mat4::identity(), ell);
  }
  throw std::logic_error("group_identity: bad family");
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  if (a.family != b.family || !(a.mod == b.mod))
    throw std::invalid_argument("group_mul: incompatible elements");
  GroupElement r = a;
  switch (a.family) {
    case Family::GL2QM:
      r.m1 = mat2_mul(a.m1, b.m1, a.mod);
      break;
    case Family::Fiber:
      r.m1 = mat2_mul(a.m1, b.m1, a.mod);
      r.m2 = mat2_mul(a.m2, b.m2, a.mod);
      break;
    case Family::GSp4:
      r.m4 = mat4_mul(a.m4, b.m4, a.mod);
      r.mu = mulmod(a.mu, b.mu, a.mod.value());
      break;
  }
  return r;
}

GroupElement group_inverse(const GroupElement& a) {
  GroupElement r = a;
  switch (a.family) {
    case Family::GL2QM:
      r.m1 = mat2_inverse(a.m1, a.mod);
      break;
    case Family::Fiber:
      r.m1 = mat2_inverse(a.m1, a.mod);
      r.m2 = mat2_inverse(a.m2, a.mod);
      break;
    case Family::GSp4:
      r.m4 = mat4_inverse(a.m4, a.mod);
      r.mu = invmod(a.mu, a.mod.value());
      break;
  }
  return r;
}

std::array<i64, 4> char_poly_quartic(const GroupElement& m) {
  const i64 p = m.mod.value();
  switch (m.family) {
    case Family::GSp4:
      return char_poly_quartic_mat4(m.m4, m.mod);
    case Family::Fiber: {
      auto [b1, c1] = char_poly_quadratic(m.m1, m.mod);
      auto [b2, c2] = char_poly_quadratic(m.m2, m.mod);
      // (X^2 + b1 X + c1)(X^2 + b2 X + c2)
      i64 c3 = md(b1 + b2, p);
      i64 cc2 = md(c1 + c2 + mulmod(b1, b2, p), p);
      i64 cc1 = md(mulmod(b1, c2, p) + mulmod(b2, c1, p), p);
      i64 cc0 = mulmod(c1, c2, p);
      return {c3, cc2, cc1, cc0};
    }
    case Family::GL2QM:
      throw std::domain_error("char_poly_quartic: GL2QM elements are 2x2");
  }
  throw std::logic_error("char_poly_quartic: bad family");
}

ConjSetId make_conj_set_id(Family f, int i) {
  bool ok = (f == Family::GL2QM) ? (i == 4 || i == 5) : (i >= 1 && i <= 5);
  if (!ok) throw std::invalid_argument("make_conj_set_id: index illegal for family");
  return {f, i};
}

// ---------------------------------------------------------------------------
// Orders

i64 group_order(Family f, SubgroupName sub, const PrimeModulus& ell) {
  const i64 l = ell.value();
  const i64 l1 = l - 1;
  switch (f) {
    case Family::GL2QM:
      switch (sub) {
        case SubgroupName::Full: return l1 * l1 * l * (l + 1);
        case SubgroupName::Borel: return l1 * l1 * l;
        case SubgroupName::Unipotent: return l;
        case SubgroupName::UnipotentPrime: return l * l1;
        case SubgroupName::Torus: return l1 * l1;
      }
      break;
    case Family::GSp4:
      switch (sub) {
        case SubgroupName::Full:
          return l1 * l1 * l1 * l * l * l * l * (l + 1) * (l + 1) * (l * l + 1);
        case SubgroupName::Borel: return l * l * l * l * l1 * l1 * l1;
        case SubgroupName::Unipotent: return l * l * l * l;
        case SubgroupName::UnipotentPrime: return l * l * l * l * l1;
        case SubgroupName::Torus: return l1 * l1 * l1;
      }
      break;
    case Family::Fiber:
      switch (sub) {
        case SubgroupName::Full: return l1 * l1 * l1 * l * l * (l + 1) * (l + 1);
        case SubgroupName::Borel: return l1 * l1 * l1 * l * l;
        case SubgroupName::Unipotent: return l * l;
        case SubgroupName::UnipotentPrime: return l * l * l1;
        case SubgroupName::Torus: return l1 * l1 * l1;
      }
      break;
  }
  throw std::logic_error("group_order: bad family/subgroup");
}

// ---------------------------------------------------------------------------
// Membership

namespace {

bool upper_triangular(const Mat2& m) { return m.at(1, 0) == 0; }
bool diagonal2(const Mat2& m) { return m.at(1, 0) == 0 && m.at(0, 1) == 0; }
bool unipotent_upper(const Mat2& m) {
  return m.at(1, 0) == 0 && m.at(0, 0) == 1 && m.at(1, 1) == 1;
}
bool scalar_plus_upper(const Mat2& m) {
  return m.at(1, 0) == 0 && m.at(0, 0) == m.at(1, 1);
}

}  // namespace

bool is_member(const GroupElement& m, SubgroupName sub) {
  const i64 p = m.mod.value();
  switch (m.family) {
    case Family::GL2QM:
      switch (sub) {
        case SubgroupName::Full: return true;
        case SubgroupName::Borel: return upper_triangular(m.m1);
        case SubgroupName::Unipotent: return unipotent_upper(m.m1);
        case SubgroupName::UnipotentPrime: return scalar_plus_upper(m.m1);
        case SubgroupName::Torus: return diagonal2(m.m1);
      }
      break;
    case Family::Fiber:
      switch (sub) {
        case SubgroupName::Full: return true;
        case SubgroupName::Borel:
          return upper_triangular(m.m1) && upper_triangular(m.m2);
        case SubgroupName::Unipotent:
          return unipotent_upper(m.m1) && unipotent_upper(m.m2);
        case SubgroupName::UnipotentPrime:
          return scalar_plus_upper(m.m1) && scalar_plus_upper(m.m2) &&
                 m.m1.at(0, 0) == m.m2.at(0, 0);
        case SubgroupName::Torus:
          return diagonal2(m.m1) && diagonal2(m.m2);
      }
      break;
    case Family::GSp4: {
      Mat2 A = m.m4.block(0, 0), B = m.m4.block(0, 1), C = m.m4.block(1, 0);
      bool c_zero = C == Mat2{};
      switch (sub) {
        case SubgroupName::Full: return true;
        case SubgroupName::Borel: return c_zero && upper_triangular(A);
        case SubgroupName::Unipotent:
          return c_zero && unipotent_upper(A) && m.mu == 1;
        case SubgroupName::UnipotentPrime:
          return c_zero && scalar_plus_upper(A) &&
                 m.mu == mulmod(A.at(0, 0), A.at(0, 0), p);
        case SubgroupName::Torus: return c_zero && B == Mat2{} && diagonal2(A);
      }
      break;
    }
  }
  throw std::logic_error("is_member: bad family/subgroup");
}

// ---------------------------------------------------------------------------
// Conjugation-invariant sets

namespace {

// Template shapes as conditions on a reduced monic quartic, with the
// constant mu existentially quantified over units:
//   i = 1, 2:  X^4 -+ mu X^2 + mu^2   <=> c3 = c1 = 0, c2 != 0, c0 = c2^2
//   i = 3:     X^4 + mu^2             <=> c3 = c2 = c1 = 0, c0 a nonzero square
//   i = 4, 5:  (X^2 -+ mu)^2          <=> c3 = c1 = 0, c2 != 0, 4 c0 = c2^2
bool matches_quartic_template(int i, const std::array<i64, 4>& c,
                              const PrimeModulus& m) {
  const i64 p = m.value();
  auto [c3, c2, c1, c0] = c;
  if (c3 != 0 || c1 != 0) return false;
  switch (i) {
    case 1:
    case 2:
      return c2 != 0 && c0 == mulmod(c2, c2, p);
    case 3:
      return c2 == 0 && legendre(c0, m) == 1;
    case 4:
    case 5:
      return c2 != 0 && m.reduce(4 * c0) == mulmod(c2, c2, p);
  }
  return false;
}

}  // namespace

bool in_conj_set(const GroupElement& m, ConjSetId id) {
  if (m.family != id.family)
    throw std::invalid_argument("in_conj_set: family mismatch");
  if (m.family == Family::GL2QM) {
    // Char_M(X) = X^2 -+ mu with both roots in the base field.
    auto [c1, c0] = char_poly_quadratic(m.m1, m.mod);
    if (c1 != 0) return false;
    return quadratic_linear_roots(c1, c0, m.mod).has_value();
  }
  auto c = char_poly_quartic(m);
  if (!matches_quartic_template(id.i, c, m.mod)) return false;
  return quartic_linear_roots(c[0], c[1], c[2], c[3], m.mod).has_value();
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

void require_witness_residues(const PrimeModulus& ell) {
  if (legendre(-1, ell) != 1 || legendre(2, ell) != 1 || legendre(3, ell) != 1)
    throw std::domain_error(
        "witness: -1, 2 and 3 must all be squares mod ell for this family");
}

// a with a^2 = c * mu for the i-th construction at mu = 1: c = 1, 3, 2, 4.
i64 witness_shift(int i, const PrimeModulus& ell) {
  static constexpr std::array<i64, 4> c{1, 3, 2, 4};
  auto a = sqrt_mod(c[static_cast<size_t>(i - 1)], ell);
  if (!a) throw std::domain_error("witness: residue conditions unsatisfied");
  return *a;
}

}  // namespace

GroupElement witness(ConjSetId id, const PrimeModulus& ell) {
  const i64 p = ell.value();
  switch (id.family) {
    case Family::GL2QM: {
      if (p < 5) throw std::domain_error("witness: GL2QM requires ell >= 5");
      return gl2_element(Mat2::diag(2, p - 2), ell);
    }
    case Family::Fiber: {
      require_witness_residues(ell);
      i64 a = id.i == 5 ? 0 : witness_shift(id.i, ell);
      // Companion matrices of X^2 + aX + 1 and X^2 - aX + 1.
      return fiber_element(Mat2::companion(a, 1, ell),
                           Mat2::companion(ell.reduce(-a), 1, ell), ell);
    }
    case Family::GSp4: {
      require_witness_residues(ell);
      // Eigenvalue-paired diagonal form diag(l1, l2, mu/l1, mu/l2), mu = 1.
      i64 l1, l2;
      if (id.i == 5) {
        i64 s = *sqrt_mod(p - 1, ell);
        l1 = s;
        l2 = s;
      } else {
        i64 a = witness_shift(id.i, ell);
        i64 disc = ell.reduce(mulmod(a, a, p) - 4);
        auto s = sqrt_mod(disc, ell);
        if (!s) throw std::domain_error("witness: residue conditions unsatisfied");
        i64 inv2 = invmod(2, p);
        l1 = mulmod(ell.reduce(-a + *s), inv2, p);
        l2 = mulmod(ell.reduce(a + *s), inv2, p);
      }
      Mat4 d = Mat4::diag(l1, l2, invmod(l1, p), invmod(l2, p));
      GroupElement w = gsp4_element(d, ell);
      assert(in_conj_set(w, id));
      return w;
    }
  }
  throw std::logic_error("witness: bad family");
}

// ---------------------------------------------------------------------------
// Borel conjugation

namespace {

using Vec2 = std::array<i64, 2>;
using Vec4 = std::array<i64, 4>;

Vec2 normalize2(Vec2 v, i64 p) {
  i64 lead = v[0] != 0 ? v[0] : v[1];
  i64 inv = invmod(lead, p);
  return {mulmod(v[0], inv, p), mulmod(v[1], inv, p)};
}

Vec4 normalize4(Vec4 v, i64 p) {
  i64 lead = 0;
  for (i64 x : v)
    if (x != 0) {
      lead = x;
      break;
    }
  i64 inv = invmod(lead, p);
  Vec4 r;
  for (int i = 0; i < 4; ++i) r[static_cast<size_t>(i)] = mulmod(v[static_cast<size_t>(i)], inv, p);
  return r;
}

// Kernel basis of a 2x2 matrix over F_p; vectors normalized, lex-sorted.
std::vector<Vec2> kernel2(const Mat2& m, const PrimeModulus& mod) {
  const i64 p = mod.value();
  std::vector<Vec2> out;
  if (m == Mat2{}) {
    out.push_back({1, 0});
    out.push_back({0, 1});
    return out;
  }
  // Rank 1: kernel spanned by one vector read off a nonzero row.
  if (m.at(0, 0) != 0 || m.at(0, 1) != 0)
    out.push_back(normalize2({mod.reduce(-m.at(0, 1)), m.at(0, 0)}, p));
  else
    out.push_back(normalize2({mod.reduce(-m.at(1, 1)), m.at(1, 0)}, p));
  return out;
}

// Row-reduce an r x 4 system (homogeneous); returns normalized kernel basis.
std::vector<Vec4> kernel4(std::vector<Vec4> rows, const PrimeModulus& mod) {
  const i64 p = mod.value();
  size_t rank = 0;
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  for (int col = 0; col < 4 && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][static_cast<size_t>(col)] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    i64 inv = invmod(rows[rank][static_cast<size_t>(col)], p);
    for (auto& x : rows[rank]) x = mulmod(x, inv, p);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      i64 f = rows[r][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < 4; ++j)
        rows[r][static_cast<size_t>(j)] = mod.reduce(
            rows[r][static_cast<size_t>(j)] -
            mulmod(f, rows[rank][static_cast<size_t>(j)], p));
    }
    pivot_col[rank] = col;
    ++rank;
  }
  std::vector<Vec4> basis;
  std::array<bool, 4> is_pivot{};
  for (size_t r = 0; r < rank; ++r) is_pivot[static_cast<size_t>(pivot_col[r])] = true;
  for (int free = 0; free < 4; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    Vec4 v{};
    v[static_cast<size_t>(free)] = 1;
    for (size_t r = 0; r < rank; ++r)
      v[static_cast<size_t>(pivot_col[r])] =
          mod.reduce(-rows[r][static_cast<size_t>(free)]);
    basis.push_back(normalize4(v, p));
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

// Particular solution of an r x 4 inhomogeneous system with free vars = 0.
Vec4 solve4(std::vector<Vec4> rows, std::vector<i64> rhs,
            const PrimeModulus& mod) {
  const i64 p = mod.value();
  size_t rank = 0;
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  for (int col = 0; col < 4 && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][static_cast<size_t>(col)] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    std::swap(rhs[rank], rhs[piv]);
    i64 inv = invmod(rows[rank][static_cast<size_t>(col)], p);
    for (auto& x : rows[rank]) x = mulmod(x, inv, p);
    rhs[rank] = mulmod(rhs[rank], inv, p);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      i64 f = rows[r][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < 4; ++j)
        rows[r][static_cast<size_t>(j)] = mod.reduce(
            rows[r][static_cast<size_t>(j)] -
            mulmod(f, rows[rank][static_cast<size_t>(j)], p));
      rhs[r] = mod.reduce(rhs[r] - mulmod(f, rhs[rank], p));
    }
    pivot_col[rank] = col;
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r)
    if (rhs[r] != 0) throw std::domain_error("solve4: inconsistent system");
  Vec4 x{};
  for (size_t r = 0; r < rank; ++r) x[static_cast<size_t>(pivot_col[r])] = rhs[r];
  return x;
}

i64 symplectic_pairing(const Vec4& x, const Vec4& y, const PrimeModulus& mod) {
  const i64 p = mod.value();
  i64 s = mulmod(x[0], y[2], p) + mulmod(x[1], y[3], p) - mulmod(x[2], y[0], p) -
          mulmod(x[3], y[1], p);
  return mod.reduce(s);
}

Vec4 mat4_apply(const Mat4& m, const Vec4& v, const PrimeModulus& mod) {
  const i64 p = mod.value();
  Vec4 r{};
  for (int i = 0; i < 4; ++i) {
    i64 s = 0;
    for (int j = 0; j < 4; ++j)
      s += mulmod(m.at(i, j), v[static_cast<size_t>(j)], p);
    r[static_cast<size_t>(i)] = mod.reduce(s);
  }
  return r;
}

// Triangularization of a single 2x2 matrix: returns (g, upper) with
// upper = g^-1 m g. Throws if the characteristic polynomial does not split.
std::pair<Mat2, Mat2> triangularize2(const Mat2& m, const PrimeModulus& mod) {
  const i64 p = mod.value();
  auto [c1, c0] = char_poly_quadratic(m, mod);
  auto roots = quadratic_linear_roots(c1, c0, mod);
  if (!roots)
    throw std::domain_error("conjugate_into_borel: characteristic polynomial does not split");
  i64 l1 = (*roots)[0], l2 = (*roots)[1];
  Mat2 shifted = m;
  shifted.at(0, 0) = mod.reduce(shifted.at(0, 0) - l1);
  shifted.at(1, 1) = mod.reduce(shifted.at(1, 1) - l1);
  auto ker = kernel2(shifted, mod);
  Vec2 v = *std::min_element(ker.begin(), ker.end());
  Vec2 w;
  if (l1 != l2) {
    Mat2 shifted2 = m;
    shifted2.at(0, 0) = mod.reduce(shifted2.at(0, 0) - l2);
    shifted2.at(1, 1) = mod.reduce(shifted2.at(1, 1) - l2);
    auto ker2 = kernel2(shifted2, mod);
    w = *std::min_element(ker2.begin(), ker2.end());
  } else {
    // Complete the basis with the lex-smallest independent unit vector.
    w = v[0] != 0 ? Vec2{0, 1} : Vec2{1, 0};
  }
  Mat2 g{{v[0], w[0], v[1], w[1]}};
  Mat2 b = mat2_mul(mat2_inverse(g, mod), mat2_mul(m, g, mod), mod);
  return {g, b};
}

}  // namespace

std::pair<GroupElement, GroupElement> conjugate_into_borel(
    const GroupElement& m) {
  const PrimeModulus& mod = m.mod;
  const i64 p = mod.value();
  if (is_member(m, SubgroupName::Borel))
    return {group_identity(m.family, mod), m};

  switch (m.family) {
    case Family::GL2QM: {
      auto [g, b] = triangularize2(m.m1, mod);
      return {gl2_element(g, mod), gl2_element(b, mod)};
    }
    case Family::Fiber: {
      auto [g1, b1] = triangularize2(m.m1, mod);
      auto [g2, b2] = triangularize2(m.m2, mod);
      // Rescale the second conjugator so the determinants match.
      i64 scale = mulmod(mat2_det(g1, mod), invmod(mat2_det(g2, mod), p), p);
      Mat2 fix = Mat2::diag(1, scale);
      Mat2 g2s = mat2_mul(g2, fix, mod);
      Mat2 b2s = mat2_mul(mat2_inverse(fix, mod), mat2_mul(b2, fix, mod), mod);
      GroupElement g = fiber_element(g1, g2s, mod);
      GroupElement b = fiber_element(b1, b2s, mod);
      return {g, b};
    }
    case Family::GSp4: {
      auto c = char_poly_quartic(m);
      auto roots = quartic_linear_roots(c[0], c[1], c[2], c[3], mod);
      if (!roots)
        throw std::domain_error(
            "conjugate_into_borel: characteristic polynomial does not split");
      // Eigenvector for the smallest eigenvalue.
      i64 l1 = (*roots)[0];
      Mat4 sh = m.m4;
      for (int i = 0; i < 4; ++i) sh.at(i, i) = mod.reduce(sh.at(i, i) - l1);
      std::vector<Vec4> rows;
      for (int i = 0; i < 4; ++i)
        rows.push_back({sh.at(i, 0), sh.at(i, 1), sh.at(i, 2), sh.at(i, 3)});
      auto ker = kernel4(rows, mod);
      Vec4 v1 = ker.front();

      // Basis {w1, w2} completing v1 inside its symplectic perp.
      std::vector<Vec4> perp_row{
          {mod.reduce(-v1[2]), mod.reduce(-v1[3]), v1[0], v1[1]}};
      auto perp = kernel4(perp_row, mod);  // 3-dim, contains v1
      std::vector<Vec4> w;
      for (const auto& cand : perp) {
        std::vector<Vec4> test{v1};
        for (const auto& x : w) test.push_back(x);
        test.push_back(cand);
        // Independence via rank: kernel of the transpose trick is overkill;
        // use a small rank computation.
        size_t n = test.size();
        std::vector<Vec4> mat = test;
        size_t rank = 0;
        for (int col = 0; col < 4 && rank < n; ++col) {
          size_t piv = rank;
          while (piv < n && mat[piv][static_cast<size_t>(col)] == 0) ++piv;
          if (piv == n) continue;
          std::swap(mat[rank], mat[piv]);
          i64 inv = invmod(mat[rank][static_cast<size_t>(col)], p);
          for (auto& x : mat[rank]) x = mulmod(x, inv, p);
          for (size_t r = 0; r < n; ++r) {
            if (r == rank) continue;
            i64 f = mat[r][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < 4; ++j)
              mat[r][static_cast<size_t>(j)] =
                  mod.reduce(mat[r][static_cast<size_t>(j)] -
                             mulmod(f, mat[rank][static_cast<size_t>(j)], p));
          }
          ++rank;
        }
        if (rank == n && w.size() < 2) w.push_back(cand);
        if (w.size() == 2) break;
      }

      // Induced action on perp / <v1> in the basis {w1, w2}.
      Mat2 beta;
      for (int j = 0; j < 2; ++j) {
        Vec4 mw = mat4_apply(m.m4, w[static_cast<size_t>(j)], mod);
        // Solve x0 v1 + x1 w1 + x2 w2 = mw.
        std::vector<Vec4> sys;
        std::vector<i64> rhs;
        for (int i = 0; i < 4; ++i) {
          sys.push_back({v1[static_cast<size_t>(i)], w[0][static_cast<size_t>(i)],
                         w[1][static_cast<size_t>(i)], 0});
          rhs.push_back(mw[static_cast<size_t>(i)]);
        }
        Vec4 x = solve4(sys, rhs, mod);
        beta.at(0, j) = x[1];
        beta.at(1, j) = x[2];
      }
      auto [bc1, bc0] = char_poly_quadratic(beta, mod);
      auto broots = quadratic_linear_roots(bc1, bc0, mod);
      if (!broots)
        throw std::domain_error("conjugate_into_borel: induced action does not split");
      i64 l2 = (*broots)[0];
      Mat2 bsh = beta;
      bsh.at(0, 0) = mod.reduce(bsh.at(0, 0) - l2);
      bsh.at(1, 1) = mod.reduce(bsh.at(1, 1) - l2);
      auto bker = kernel2(bsh, mod);
      Vec2 vb = *std::min_element(bker.begin(), bker.end());
      Vec4 v2{};
      for (int i = 0; i < 4; ++i)
        v2[static_cast<size_t>(i)] =
            mod.reduce(mulmod(vb[0], w[0][static_cast<size_t>(i)], p) +
                       mulmod(vb[1], w[1][static_cast<size_t>(i)], p));

      // Symplectic completion: <v1,u1> = 1, <v2,u1> = 0; then <v1,u2> = 0,
      // <v2,u2> = 1, <u1,u2> = 0.
      auto pairing_row = [&](const Vec4& v) {
        return Vec4{mod.reduce(-v[2]), mod.reduce(-v[3]), v[0], v[1]};
      };
      Vec4 u1 = solve4({pairing_row(v1), pairing_row(v2)}, {1, 0}, mod);
      Vec4 u2 = solve4({pairing_row(v1), pairing_row(v2), pairing_row(u1)},
                       {0, 1, 0}, mod);

      Mat4 g;
      for (int i = 0; i < 4; ++i) {
        g.at(i, 0) = v1[static_cast<size_t>(i)];
        g.at(i, 1) = v2[static_cast<size_t>(i)];
        g.at(i, 2) = u1[static_cast<size_t>(i)];
        g.at(i, 3) = u2[static_cast<size_t>(i)];
      }
      GroupElement ge = gsp4_element(g, mod);
      Mat4 b = mat4_mul(mat4_inverse(g, mod), mat4_mul(m.m4, g, mod), mod);
      GroupElement be = gsp4_element(b, mod);
      if (!is_member(be, SubgroupName::Borel))
        throw std::logic_error("conjugate_into_borel: result not Borel");
      return {ge, be};
    }
  }
  throw std::logic_error("conjugate_into_borel: bad family");
}

// ---------------------------------------------------------------------------
// Quotient image cardinality

i64 quotient_image_size(ConjSetId id, const PrimeModulus& ell) {
  const i64 p = ell.value();
  i64 count = 0;
  switch (id.family) {
    case Family::GL2QM: {
      // Classes of B/U' carried by torus pairs (1, s).
      for (i64 s = 1; s < p; ++s) {
        GroupElement e = gl2_element(Mat2::diag(1, s), ell);
        if (in_conj_set(e, id)) ++count;
      }
      return count;
    }
    case Family::Fiber: {
      // Classes carried by (1, cd | c, d), the det-matched torus data
      // normalized by simultaneous scaling.
      for (i64 c = 1; c < p; ++c)
        for (i64 d = 1; d < p; ++d) {
          GroupElement e = fiber_element(Mat2::diag(1, mulmod(c, d, p)),
                                         Mat2::diag(c, d), ell);
          if (in_conj_set(e, id)) ++count;
        }
      return count;
    }
    case Family::GSp4: {
      // Classes carried by (1, s, nu), i.e. diag(1, s, nu, nu/s).
      for (i64 s = 1; s < p; ++s) {
        i64 sinv = invmod(s, p);
        for (i64 nu = 1; nu < p; ++nu) {
          GroupElement e = gsp4_element(
              Mat4::diag(1, s, nu, mulmod(nu, sinv, p)), ell);
          if (in_conj_set(e, id)) ++count;
        }
      }
      return count;
    }
  }
  throw std::logic_error("quotient_image_size: bad family");
}

}  // namespace ssc
