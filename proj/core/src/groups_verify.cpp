#include <atomic>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ssc/groups.hpp"

namespace ssc {

// ---------------------------------------------------------------------------
// Enumeration

namespace {

template <typename F>
void for_each_mat2(i64 p, F&& fn) {
  Mat2 m;
  for (i64 a = 0; a < p; ++a)
    for (i64 b = 0; b < p; ++b)
      for (i64 c = 0; c < p; ++c)
        for (i64 d = 0; d < p; ++d) {
          m.e = {a, b, c, d};
          fn(m);
        }
}

std::vector<Mat2> all_gl2(const PrimeModulus& ell) {
  std::vector<Mat2> out;
  for_each_mat2(ell.value(), [&](const Mat2& m) {
    if (mat2_det(m, ell) != 0) out.push_back(m);
  });
  return out;
}

bool shape_matches(const Mat2& m, SubgroupName sub) {
  switch (sub) {
    case SubgroupName::Full: return true;
    case SubgroupName::Borel: return m.at(1, 0) == 0;
    case SubgroupName::Unipotent:
      return m.at(1, 0) == 0 && m.at(0, 0) == 1 && m.at(1, 1) == 1;
    case SubgroupName::UnipotentPrime:
      return m.at(1, 0) == 0 && m.at(0, 0) == m.at(1, 1);
    case SubgroupName::Torus: return m.at(1, 0) == 0 && m.at(0, 1) == 0;
  }
  return false;
}

struct Gsp4Counts {
  i64 full{0}, borel{0}, unipotent{0}, uprime{0}, torus{0};
};

// Full block-tuple scan of GSp4(F_ell); feasible at ell = 3 only.
Gsp4Counts gsp4_scan(const PrimeModulus& ell) {
  static std::mutex mtx;
  static std::map<i64, Gsp4Counts> cache;
  {
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(ell.value());
    if (it != cache.end()) return it->second;
  }

  const i64 p = ell.value();
  std::vector<Mat2> mats;
  for_each_mat2(p, [&](const Mat2& m) { mats.push_back(m); });

  auto sym = [&](const Mat2& m) {
    return m.at(0, 1) == m.at(1, 0);
  };
  // Condition -C^t A + A^t C = 0 is A^t C symmetric; same for B, D.
  std::vector<std::pair<Mat2, Mat2>> ac, bd;
  for (const auto& a : mats)
    for (const auto& c : mats)
      if (sym(mat2_mul(mat2_transpose(a), c, ell))) ac.emplace_back(a, c);
  for (const auto& b : mats)
    for (const auto& d : mats)
      if (sym(mat2_mul(mat2_transpose(b), d, ell))) bd.emplace_back(b, d);

  Gsp4Counts counts;
  Mat2 zero{};
  for (const auto& [A, C] : ac) {
    Mat2 At = mat2_transpose(A), Ct = mat2_transpose(C);
    for (const auto& [B, D] : bd) {
      Mat2 AtD = mat2_mul(At, D, ell);
      Mat2 CtB = mat2_mul(Ct, B, ell);
      i64 mu = ell.reduce(AtD.at(0, 0) - CtB.at(0, 0));
      if (mu == 0) continue;
      if (ell.reduce(AtD.at(0, 1) - CtB.at(0, 1)) != 0) continue;
      if (ell.reduce(AtD.at(1, 0) - CtB.at(1, 0)) != 0) continue;
      if (ell.reduce(AtD.at(1, 1) - CtB.at(1, 1)) != mu) continue;
      ++counts.full;
      if (C == zero) {
        if (shape_matches(A, SubgroupName::Borel)) ++counts.borel;
        if (shape_matches(A, SubgroupName::Unipotent) && mu == 1)
          ++counts.unipotent;
        if (shape_matches(A, SubgroupName::UnipotentPrime) &&
            mu == mulmod(A.at(0, 0), A.at(0, 0), p))
          ++counts.uprime;
        if (shape_matches(A, SubgroupName::Torus) && B == zero) ++counts.torus;
      }
    }
  }

  std::lock_guard<std::mutex> lk(mtx);
  cache[ell.value()] = counts;
  return counts;
}

}  // namespace

i64 enumerate_subgroup_order(Family f, SubgroupName sub,
                             const PrimeModulus& ell) {
  const i64 p = ell.value();
  switch (f) {
    case Family::GL2QM: {
      if (p > 31)
        throw std::invalid_argument("enumerate_subgroup_order: GL2QM needs ell <= 31");
      i64 n = 0;
      for_each_mat2(p, [&](const Mat2& m) {
        if (mat2_det(m, ell) != 0 && shape_matches(m, sub)) ++n;
      });
      return n;
    }
    case Family::Fiber: {
      if (p > 11)
        throw std::invalid_argument("enumerate_subgroup_order: Fiber needs ell <= 11");
      auto gl2 = all_gl2(ell);
      i64 n = 0;
      for (const auto& m1 : gl2) {
        i64 d1 = mat2_det(m1, ell);
        for (const auto& m2 : gl2) {
          if (mat2_det(m2, ell) != d1) continue;
          bool ok = shape_matches(m1, sub) && shape_matches(m2, sub);
          if (ok && sub == SubgroupName::UnipotentPrime)
            ok = m1.at(0, 0) == m2.at(0, 0);
          if (ok) ++n;
        }
      }
      return n;
    }
    case Family::GSp4: {
      if (p != 3)
        throw std::invalid_argument("enumerate_subgroup_order: GSp4 needs ell = 3");
      Gsp4Counts c = gsp4_scan(ell);
      switch (sub) {
        case SubgroupName::Full: return c.full;
        case SubgroupName::Borel: return c.borel;
        case SubgroupName::Unipotent: return c.unipotent;
        case SubgroupName::UnipotentPrime: return c.uprime;
        case SubgroupName::Torus: return c.torus;
      }
    }
  }
  throw std::logic_error("enumerate_subgroup_order: bad family");
}

// ---------------------------------------------------------------------------
// Random elements

namespace {

i64 rand_unit(const PrimeModulus& ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> dist(1, ell.value() - 1);
  return dist(rng);
}

i64 rand_res(const PrimeModulus& ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> dist(0, ell.value() - 1);
  return dist(rng);
}

Mat2 rand_gl2_mat(const PrimeModulus& ell, std::mt19937_64& rng) {
  Mat2 m;
  do {
    for (auto& x : m.e) x = rand_res(ell, rng);
  } while (mat2_det(m, ell) == 0);
  return m;
}

using Vec4 = std::array<i64, 4>;

i64 pairing(const Vec4& x, const Vec4& y, const PrimeModulus& m) {
  const i64 p = m.value();
  return m.reduce(mulmod(x[0], y[2], p) + mulmod(x[1], y[3], p) -
                  mulmod(x[2], y[0], p) - mulmod(x[3], y[1], p));
}

}  // namespace

GroupElement random_gsp4_element(const PrimeModulus& ell,
                                 std::mt19937_64& rng) {
  const i64 p = ell.value();
  auto rand_vec = [&] {
    Vec4 v{};
    do {
      for (auto& x : v) x = rand_res(ell, rng);
    } while (v == Vec4{});
    return v;
  };
  // Symplectic basis (v1, v2, f1, f2).
  Vec4 v1 = rand_vec();
  Vec4 f1;
  i64 pr;
  do {
    f1 = rand_vec();
    pr = pairing(v1, f1, ell);
  } while (pr == 0);
  i64 inv = invmod(pr, p);
  for (auto& x : f1) x = mulmod(x, inv, p);

  // Basis of the perp of {v1, f1}: solve the two pairing equations.
  std::vector<Vec4> basis;
  {
    // Rows of the homogeneous system <v1, x> = 0, <f1, x> = 0.
    std::array<Vec4, 2> rows{
        Vec4{ell.reduce(-v1[2]), ell.reduce(-v1[3]), v1[0], v1[1]},
        Vec4{ell.reduce(-f1[2]), ell.reduce(-f1[3]), f1[0], f1[1]}};
    // Tiny Gauss.
    std::vector<Vec4> r{rows[0], rows[1]};
    int rank = 0;
    std::array<int, 4> piv{-1, -1, -1, -1};
    for (int col = 0; col < 4 && rank < 2; ++col) {
      int sel = -1;
      for (int i = rank; i < 2; ++i)
        if (r[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
          sel = i;
          break;
        }
      if (sel < 0) continue;
      std::swap(r[static_cast<size_t>(rank)], r[static_cast<size_t>(sel)]);
      i64 iv = invmod(r[static_cast<size_t>(rank)][static_cast<size_t>(col)], p);
      for (auto& x : r[static_cast<size_t>(rank)]) x = mulmod(x, iv, p);
      for (int i = 0; i < 2; ++i) {
        if (i == rank) continue;
        i64 f = r[static_cast<size_t>(i)][static_cast<size_t>(col)];
        if (f == 0) continue;
        for (int j = 0; j < 4; ++j)
          r[static_cast<size_t>(i)][static_cast<size_t>(j)] = ell.reduce(
              r[static_cast<size_t>(i)][static_cast<size_t>(j)] -
              mulmod(f, r[static_cast<size_t>(rank)][static_cast<size_t>(j)], p));
      }
      piv[static_cast<size_t>(rank)] = col;
      ++rank;
    }
    std::array<bool, 4> is_piv{};
    for (int i = 0; i < rank; ++i) is_piv[static_cast<size_t>(piv[static_cast<size_t>(i)])] = true;
    for (int free = 0; free < 4; ++free) {
      if (is_piv[static_cast<size_t>(free)]) continue;
      Vec4 v{};
      v[static_cast<size_t>(free)] = 1;
      for (int i = 0; i < rank; ++i)
        v[static_cast<size_t>(piv[static_cast<size_t>(i)])] =
            ell.reduce(-r[static_cast<size_t>(i)][static_cast<size_t>(free)]);
      basis.push_back(v);
    }
  }
  // v2 random nonzero combination, f2 with <v2, f2> = 1.
  i64 p12 = pairing(basis[0], basis[1], ell);
  i64 alpha, beta;
  do {
    alpha = rand_res(ell, rng);
    beta = rand_res(ell, rng);
  } while (alpha == 0 && beta == 0);
  Vec4 v2{}, f2{};
  for (int i = 0; i < 4; ++i)
    v2[static_cast<size_t>(i)] =
        ell.reduce(mulmod(alpha, basis[0][static_cast<size_t>(i)], p) +
                   mulmod(beta, basis[1][static_cast<size_t>(i)], p));
  i64 gamma, delta;
  if (alpha != 0) {
    gamma = 0;
    delta = invmod(mulmod(alpha, p12, p), p);
  } else {
    gamma = ell.reduce(-invmod(mulmod(beta, p12, p), p));
    delta = 0;
  }
  for (int i = 0; i < 4; ++i)
    f2[static_cast<size_t>(i)] =
        ell.reduce(mulmod(gamma, basis[0][static_cast<size_t>(i)], p) +
                   mulmod(delta, basis[1][static_cast<size_t>(i)], p));

  Mat4 g;
  for (int i = 0; i < 4; ++i) {
    g.at(i, 0) = v1[static_cast<size_t>(i)];
    g.at(i, 1) = v2[static_cast<size_t>(i)];
    g.at(i, 2) = f1[static_cast<size_t>(i)];
    g.at(i, 3) = f2[static_cast<size_t>(i)];
  }
  // Multiplier twist.
  i64 mu = rand_unit(ell, rng);
  Mat4 twist = Mat4::diag(1, 1, mu, mu);
  return gsp4_element(mat4_mul(g, twist, ell), ell);
}

GroupElement random_subgroup_element(Family f, SubgroupName sub,
                                     const PrimeModulus& ell,
                                     std::mt19937_64& rng) {
  const i64 p = ell.value();
  switch (f) {
    case Family::GL2QM: {
      Mat2 m;
      switch (sub) {
        case SubgroupName::Full: m = rand_gl2_mat(ell, rng); break;
        case SubgroupName::Borel:
          m = {{rand_unit(ell, rng), rand_res(ell, rng), 0, rand_unit(ell, rng)}};
          break;
        case SubgroupName::Unipotent: m = {{1, rand_res(ell, rng), 0, 1}}; break;
        case SubgroupName::UnipotentPrime: {
          i64 l = rand_unit(ell, rng);
          m = {{l, rand_res(ell, rng), 0, l}};
          break;
        }
        case SubgroupName::Torus:
          m = Mat2::diag(rand_unit(ell, rng), rand_unit(ell, rng));
          break;
      }
      return gl2_element(m, ell);
    }
    case Family::Fiber: {
      if (sub == SubgroupName::UnipotentPrime) {
        i64 l = rand_unit(ell, rng);
        Mat2 a{{l, rand_res(ell, rng), 0, l}};
        Mat2 b{{l, rand_res(ell, rng), 0, l}};
        return fiber_element(a, b, ell);
      }
      GroupElement c1 = random_subgroup_element(Family::GL2QM, sub, ell, rng);
      GroupElement c2 = random_subgroup_element(Family::GL2QM, sub, ell, rng);
      Mat2 m2 = c2.m1;
      if (sub == SubgroupName::Full || sub == SubgroupName::Borel ||
          sub == SubgroupName::Torus) {
        // Scale a column so the determinants agree.
        i64 fix = mulmod(mat2_det(c1.m1, ell), invmod(mat2_det(m2, ell), p), p);
        m2 = mat2_mul(m2, Mat2::diag(1, fix), ell);
      }
      return fiber_element(c1.m1, m2, ell);
    }
    case Family::GSp4: {
      if (sub == SubgroupName::Full) return random_gsp4_element(ell, rng);
      Mat2 a;
      i64 mu;
      switch (sub) {
        case SubgroupName::Borel:
          a = {{rand_unit(ell, rng), rand_res(ell, rng), 0, rand_unit(ell, rng)}};
          mu = rand_unit(ell, rng);
          break;
        case SubgroupName::Unipotent:
          a = {{1, rand_res(ell, rng), 0, 1}};
          mu = 1;
          break;
        case SubgroupName::UnipotentPrime: {
          i64 l = rand_unit(ell, rng);
          a = {{l, rand_res(ell, rng), 0, l}};
          mu = mulmod(l, l, p);
          break;
        }
        default: {  // Torus
          a = Mat2::diag(rand_unit(ell, rng), rand_unit(ell, rng));
          mu = rand_unit(ell, rng);
          Mat4 m = Mat4::from_blocks(
              a, Mat2{}, Mat2{},
              mat2_mul(Mat2::diag(mu, mu), mat2_inverse(a, ell), ell));
          return gsp4_element(m, ell);
        }
      }
      Mat2 s{{rand_res(ell, rng), 0, 0, rand_res(ell, rng)}};
      s.at(0, 1) = s.at(1, 0) = rand_res(ell, rng);
      Mat2 b = mat2_mul(a, s, ell);
      i64 mu_inv = invmod(mu, p);
      for (auto& x : b.e) x = mulmod(x, mu_inv, p);
      Mat2 d = mat2_inverse(mat2_transpose(a), ell);
      for (auto& x : d.e) x = mulmod(x, mu, p);
      return gsp4_element(Mat4::from_blocks(a, b, Mat2{}, d), ell);
    }
  }
  throw std::logic_error("random_subgroup_element: bad family");
}

namespace {

// A Borel element whose torus data is a random scaling of the witness
// eigenvalue data, dressed with random unipotent parts. Lands in the
// conjugacy set intersected with the Borel subgroup.
GroupElement gsp4_borel_member(ConjSetId id, const PrimeModulus& ell,
                               std::mt19937_64& rng) {
  const i64 p = ell.value();
  GroupElement w = witness(id, ell);
  i64 beta = rand_unit(ell, rng);
  i64 l1 = mulmod(beta, w.m4.at(0, 0), p);
  i64 l2 = mulmod(beta, w.m4.at(1, 1), p);
  i64 mu = mulmod(mulmod(beta, beta, p), w.mu, p);
  Mat2 a{{l1, rand_res(ell, rng), 0, l2}};
  Mat2 s{};
  s.at(0, 0) = rand_res(ell, rng);
  s.at(1, 1) = rand_res(ell, rng);
  s.at(0, 1) = s.at(1, 0) = rand_res(ell, rng);
  Mat2 b = mat2_mul(a, s, ell);
  i64 mu_inv = invmod(mu, p);
  for (auto& x : b.e) x = mulmod(x, mu_inv, p);
  Mat2 d = mat2_inverse(mat2_transpose(a), ell);
  for (auto& x : d.e) x = mulmod(x, mu, p);
  return gsp4_element(Mat4::from_blocks(a, b, Mat2{}, d), ell);
}

}  // namespace

GroupElement random_conj_set_element(ConjSetId id, const PrimeModulus& ell,
                                     std::mt19937_64& rng) {
  switch (id.family) {
    case Family::GL2QM: {
      i64 l = rand_unit(ell, rng);
      GroupElement g = gl2_element(rand_gl2_mat(ell, rng), ell);
      Mat2 core = Mat2::diag(l, ell.reduce(-l));
      Mat2 m = mat2_mul(g.m1, mat2_mul(core, mat2_inverse(g.m1, ell), ell), ell);
      return gl2_element(m, ell);
    }
    case Family::Fiber: {
      GroupElement w = witness(id, ell);
      i64 beta = rand_unit(ell, rng);
      Mat2 s = Mat2::diag(beta, beta);
      Mat2 m1 = mat2_mul(s, w.m1, ell);
      Mat2 m2 = mat2_mul(s, w.m2, ell);
      Mat2 g1 = rand_gl2_mat(ell, rng), g2 = rand_gl2_mat(ell, rng);
      m1 = mat2_mul(g1, mat2_mul(m1, mat2_inverse(g1, ell), ell), ell);
      m2 = mat2_mul(g2, mat2_mul(m2, mat2_inverse(g2, ell), ell), ell);
      return fiber_element(m1, m2, ell);
    }
    case Family::GSp4: {
      GroupElement borel = gsp4_borel_member(id, ell, rng);
      GroupElement g = random_gsp4_element(ell, rng);
      return group_mul(group_mul(g, borel), group_inverse(g));
    }
  }
  throw std::logic_error("random_conj_set_element: bad family");
}

// ---------------------------------------------------------------------------
// Verification suite

namespace {

const char* family_name(Family f) {
  switch (f) {
    case Family::GL2QM: return "gl2";
    case Family::GSp4: return "gsp4";
    case Family::Fiber: return "fiber";
  }
  return "?";
}

const char* sub_name(SubgroupName s) {
  switch (s) {
    case SubgroupName::Full: return "full";
    case SubgroupName::Borel: return "borel";
    case SubgroupName::Unipotent: return "unipotent";
    case SubgroupName::UnipotentPrime: return "unipotent-prime";
    case SubgroupName::Torus: return "torus";
  }
  return "?";
}

constexpr std::array<SubgroupName, 5> kAllSubs{
    SubgroupName::Full, SubgroupName::Borel, SubgroupName::Unipotent,
    SubgroupName::UnipotentPrime, SubgroupName::Torus};

// Parametrized enumeration of Borel / U / U' elements per family.
std::vector<GroupElement> borel_elements(Family f, const PrimeModulus& ell) {
  const i64 p = ell.value();
  std::vector<GroupElement> out;
  switch (f) {
    case Family::GL2QM:
      for (i64 l1 = 1; l1 < p; ++l1)
        for (i64 l2 = 1; l2 < p; ++l2)
          for (i64 a = 0; a < p; ++a)
            out.push_back(gl2_element(Mat2{{l1, a, 0, l2}}, ell));
      break;
    case Family::Fiber:
      for (i64 l1 = 1; l1 < p; ++l1)
        for (i64 l2 = 1; l2 < p; ++l2)
          for (i64 l3 = 1; l3 < p; ++l3) {
            // l4 forced by the determinant condition.
            i64 l4 = mulmod(mulmod(l1, l2, p), invmod(l3, p), p);
            for (i64 a1 = 0; a1 < p; ++a1)
              for (i64 a2 = 0; a2 < p; ++a2)
                out.push_back(fiber_element(Mat2{{l1, a1, 0, l2}},
                                            Mat2{{l3, a2, 0, l4}}, ell));
          }
      break;
    case Family::GSp4:
      for (i64 l1 = 1; l1 < p; ++l1)
        for (i64 l2 = 1; l2 < p; ++l2)
          for (i64 a = 0; a < p; ++a)
            for (i64 mu = 1; mu < p; ++mu)
              for (i64 s00 = 0; s00 < p; ++s00)
                for (i64 s01 = 0; s01 < p; ++s01)
                  for (i64 s11 = 0; s11 < p; ++s11) {
                    Mat2 A{{l1, a, 0, l2}};
                    Mat2 S{{s00, s01, s01, s11}};
                    Mat2 B = mat2_mul(A, S, ell);
                    i64 mu_inv = invmod(mu, p);
                    for (auto& x : B.e) x = mulmod(x, mu_inv, p);
                    Mat2 D = mat2_inverse(mat2_transpose(A), ell);
                    for (auto& x : D.e) x = mulmod(x, mu, p);
                    out.push_back(
                        gsp4_element(Mat4::from_blocks(A, B, Mat2{}, D), ell));
                  }
      break;
  }
  return out;
}

std::vector<GroupElement> unipotent_elements(Family f, const PrimeModulus& ell,
                                             bool prime_variant) {
  const i64 p = ell.value();
  std::vector<GroupElement> out;
  auto lambdas = [&]() {
    std::vector<i64> v;
    if (prime_variant)
      for (i64 l = 1; l < p; ++l) v.push_back(l);
    else
      v.push_back(1);
    return v;
  }();
  switch (f) {
    case Family::GL2QM:
      for (i64 l : lambdas)
        for (i64 a = 0; a < p; ++a)
          out.push_back(gl2_element(Mat2{{l, a, 0, l}}, ell));
      break;
    case Family::Fiber:
      for (i64 l : lambdas)
        for (i64 a1 = 0; a1 < p; ++a1)
          for (i64 a2 = 0; a2 < p; ++a2)
            out.push_back(fiber_element(Mat2{{l, a1, 0, l}},
                                        Mat2{{l, a2, 0, l}}, ell));
      break;
    case Family::GSp4:
      for (i64 l : lambdas)
        for (i64 a = 0; a < p; ++a)
          for (i64 s00 = 0; s00 < p; ++s00)
            for (i64 s01 = 0; s01 < p; ++s01)
              for (i64 s11 = 0; s11 < p; ++s11) {
                Mat2 A{{l, a, 0, l}};
                i64 mu = mulmod(l, l, p);
                Mat2 S{{s00, s01, s01, s11}};
                Mat2 B = mat2_mul(A, S, ell);
                i64 mu_inv = invmod(mu, p);
                for (auto& x : B.e) x = mulmod(x, mu_inv, p);
                Mat2 D = mat2_inverse(mat2_transpose(A), ell);
                for (auto& x : D.e) x = mulmod(x, mu, p);
                out.push_back(
                    gsp4_element(Mat4::from_blocks(A, B, Mat2{}, D), ell));
              }
      break;
  }
  return out;
}

// Torus projection of a Borel element.
GroupElement torus_part(const GroupElement& b) {
  const PrimeModulus& m = b.mod;
  switch (b.family) {
    case Family::GL2QM:
      return gl2_element(Mat2::diag(b.m1.at(0, 0), b.m1.at(1, 1)), m);
    case Family::Fiber:
      return fiber_element(Mat2::diag(b.m1.at(0, 0), b.m1.at(1, 1)),
                           Mat2::diag(b.m2.at(0, 0), b.m2.at(1, 1)), m);
    case Family::GSp4: {
      i64 p = m.value();
      i64 l1 = b.m4.at(0, 0), l2 = b.m4.at(1, 1);
      return gsp4_element(
          Mat4::diag(l1, l2, mulmod(b.mu, invmod(l1, p), p),
                     mulmod(b.mu, invmod(l2, p), p)),
          m);
    }
  }
  throw std::logic_error("torus_part: bad family");
}

struct EntrySink {
  std::vector<VerificationEntry> entries;
  void add(const std::string& check, Family f, i64 ell, bool pass,
           std::string detail) {
    entries.push_back({check, family_name(f), ell, pass, std::move(detail)});
  }
};

std::string mat2_str(const Mat2& m) {
  std::ostringstream os;
  os << "[[" << m.at(0, 0) << "," << m.at(0, 1) << "],[" << m.at(1, 0) << ","
     << m.at(1, 1) << "]]";
  return os.str();
}

// The closure statement U' C^i = C^i holds on the Borel slice: for upper
// triangular members the characteristic polynomial is read off the diagonal,
// and left multiplication by U' scales the diagonal simultaneously, which
// every template shape is invariant under. This is the form the quotient
// counting uses (C^i intersect B is a union of U' cosets). Verified
// exhaustively here.
//
// Over the full set the statement fails: a unipotent factor shifts the trace
// of a non-triangular member. The companion check below exhibits a concrete
// counterexample instead of asserting the general form.

void closure_borel_gl2(const PrimeModulus& ell, EntrySink& sink) {
  const i64 p = ell.value();
  bool pass = true;
  long long checked = 0;
  GroupElement mem = group_identity(Family::GL2QM, ell);
  GroupElement prod = mem;
  for (i64 l1 = 1; l1 < p && pass; ++l1)
    for (i64 l2 = 1; l2 < p && pass; ++l2)
      for (i64 a = 0; a < p && pass; ++a) {
        mem.m1 = Mat2{{l1, a, 0, l2}};
        if (!in_conj_set(mem, ConjSetId{Family::GL2QM, 4})) continue;
        for (i64 lam = 1; lam < p; ++lam)
          for (i64 b = 0; b < p; ++b) {
            prod.m1 = mat2_mul(Mat2{{lam, b, 0, lam}}, mem.m1, ell);
            ++checked;
            if (!in_conj_set(prod, ConjSetId{Family::GL2QM, 4}) ||
                !in_conj_set(prod, ConjSetId{Family::GL2QM, 5}) ||
                !is_member(prod, SubgroupName::Borel)) {
              pass = false;
              break;
            }
          }
      }
  std::ostringstream os;
  os << checked << " Borel-slice products checked";
  sink.add("uprime-closure-borel", Family::GL2QM, p, pass, os.str());
}

void closure_borel_fiber(const PrimeModulus& ell, EntrySink& sink) {
  const i64 p = ell.value();
  bool pass = true;
  long long checked = 0;
  GroupElement mem = group_identity(Family::Fiber, ell);
  GroupElement prod = mem;
  struct BMember {
    Mat2 m1, m2;
    std::uint8_t mask;
  };
  std::vector<BMember> members;
  for (i64 l1 = 1; l1 < p; ++l1)
    for (i64 l2 = 1; l2 < p; ++l2)
      for (i64 l3 = 1; l3 < p; ++l3) {
        i64 l4 = mulmod(mulmod(l1, l2, p), invmod(l3, p), p);
        for (i64 a1 = 0; a1 < p; ++a1)
          for (i64 a2 = 0; a2 < p; ++a2) {
            mem.m1 = Mat2{{l1, a1, 0, l2}};
            mem.m2 = Mat2{{l3, a2, 0, l4}};
            std::uint8_t mask = 0;
            for (int i = 1; i <= 5; ++i)
              if (in_conj_set(mem, ConjSetId{Family::Fiber, i}))
                mask |= static_cast<std::uint8_t>(1 << i);
            if (mask) members.push_back({mem.m1, mem.m2, mask});
          }
      }
  for (const auto& bm : members) {
    for (i64 lam = 1; lam < p && pass; ++lam)
      for (i64 b1 = 0; b1 < p && pass; ++b1)
        for (i64 b2 = 0; b2 < p; ++b2) {
          prod.m1 = mat2_mul(Mat2{{lam, b1, 0, lam}}, bm.m1, ell);
          prod.m2 = mat2_mul(Mat2{{lam, b2, 0, lam}}, bm.m2, ell);
          for (int i = 1; i <= 5; ++i) {
            if (!(bm.mask & (1 << i))) continue;
            ++checked;
            if (!in_conj_set(prod, ConjSetId{Family::Fiber, i}) ||
                !is_member(prod, SubgroupName::Borel)) {
              pass = false;
              break;
            }
          }
        }
    if (!pass) break;
  }
  std::ostringstream os;
  os << members.size() << " Borel-slice members, " << checked
     << " products checked";
  sink.add("uprime-closure-borel", Family::Fiber, p, pass, os.str());
}

// Search for the first (u, m) with u m outside the set; reports the literal
// full-set closure statement, which is expected to fail.
void closure_general(Family f, const PrimeModulus& ell, EntrySink& sink) {
  const i64 p = ell.value();
  std::string counterexample;
  long long checked = 0;
  GroupElement prod = group_identity(f, ell);
  if (f == Family::GL2QM) {
    GroupElement mem = prod;
    for_each_mat2(p, [&](const Mat2& m) {
      if (!counterexample.empty() || mat2_det(m, ell) == 0) return;
      mem.m1 = m;
      if (!in_conj_set(mem, ConjSetId{Family::GL2QM, 4})) return;
      for (i64 lam = 1; lam < p && counterexample.empty(); ++lam)
        for (i64 b = 0; b < p; ++b) {
          Mat2 u{{lam, b, 0, lam}};
          prod.m1 = mat2_mul(u, m, ell);
          ++checked;
          if (!in_conj_set(prod, ConjSetId{Family::GL2QM, 4})) {
            counterexample = "u=" + mat2_str(u) + " m=" + mat2_str(m) +
                             " um=" + mat2_str(prod.m1) + " leaves set 4";
            break;
          }
        }
    });
  } else if (f == Family::Fiber) {
    auto gl2 = all_gl2(ell);
    GroupElement mem = prod;
    for (const auto& m1 : gl2) {
      if (!counterexample.empty()) break;
      i64 d1 = mat2_det(m1, ell);
      for (const auto& m2 : gl2) {
        if (!counterexample.empty()) break;
        if (mat2_det(m2, ell) != d1) continue;
        mem.m1 = m1;
        mem.m2 = m2;
        int idx = 0;
        for (int i = 1; i <= 5; ++i)
          if (in_conj_set(mem, ConjSetId{Family::Fiber, i})) idx = i;
        if (!idx) continue;
        for (i64 lam = 1; lam < p && counterexample.empty(); ++lam)
          for (i64 b1 = 0; b1 < p && counterexample.empty(); ++b1)
            for (i64 b2 = 0; b2 < p; ++b2) {
              prod.m1 = mat2_mul(Mat2{{lam, b1, 0, lam}}, m1, ell);
              prod.m2 = mat2_mul(Mat2{{lam, b2, 0, lam}}, m2, ell);
              ++checked;
              if (!in_conj_set(prod, ConjSetId{Family::Fiber, idx})) {
                std::ostringstream os;
                os << "u=(lam=" << lam << ",b1=" << b1 << ",b2=" << b2
                   << ") m=(" << mat2_str(m1) << "," << mat2_str(m2)
                   << ") leaves set " << idx;
                counterexample = os.str();
                break;
              }
            }
      }
    }
  } else {
    std::mt19937_64 rng(0xC10534E);
    for (int n = 0; n < 10000 && counterexample.empty(); ++n) {
      int i = 1 + static_cast<int>(rng() % 5);
      ConjSetId id{Family::GSp4, i};
      GroupElement m = random_conj_set_element(id, ell, rng);
      GroupElement u = random_subgroup_element(
          Family::GSp4, SubgroupName::UnipotentPrime, ell, rng);
      ++checked;
      if (!in_conj_set(group_mul(u, m), id)) {
        std::ostringstream os;
        os << "random sample " << n << " leaves set " << i;
        counterexample = os.str();
      }
    }
  }
  std::ostringstream os;
  if (counterexample.empty()) {
    os << checked << " products stayed inside the set";
  } else {
    os << "full-set closure fails: " << counterexample
       << " (after " << checked
       << " products); the Borel-slice restriction holds, see uprime-closure-borel";
  }
  sink.add("uprime-closure-general", f, p, counterexample.empty(), os.str());
}

std::vector<i64> odd_primes_upto(i64 n) {
  std::vector<i64> out;
  for (i64 p = 3; p <= n; p += 2)
    if (is_prime_u64(static_cast<u64>(p))) out.push_back(p);
  return out;
}

bool gsp4_admissible(const PrimeModulus& ell) {
  return legendre(-1, ell) == 1 && legendre(2, ell) == 1 &&
         legendre(3, ell) == 1;
}

}  // namespace

std::vector<VerificationEntry> verify_groups(const GroupsVerifyOptions& opt) {
  EntrySink sink;

  // --- closed-form orders vs enumeration
  auto order_check = [&](Family f, i64 l) {
    PrimeModulus ell(l);
    bool pass = true;
    std::ostringstream os;
    for (SubgroupName s : kAllSubs) {
      i64 formula = group_order(f, s, ell);
      i64 scan = enumerate_subgroup_order(f, s, ell);
      if (formula != scan) {
        pass = false;
        os << sub_name(s) << ": formula " << formula << " != scan " << scan
           << "; ";
      } else {
        os << sub_name(s) << "=" << scan << " ";
      }
    }
    sink.add("order-closed-form", f, l, pass, os.str());
  };
  for (i64 l : opt.gl2_order_ells) order_check(Family::GL2QM, l);
  for (i64 l : opt.fiber_order_ells) order_check(Family::Fiber, l);
  for (i64 l : opt.gsp4_order_ells) order_check(Family::GSp4, l);

  // --- normality of U and U' in B, quotient structure B/U = T
  auto structure_check = [&](Family f, i64 l) {
    PrimeModulus ell(l);
    auto borel = borel_elements(f, ell);
    auto uni = unipotent_elements(f, ell, false);
    auto uni_p = unipotent_elements(f, ell, true);

    bool normal = true;
    for (const auto& b : borel) {
      GroupElement binv = group_inverse(b);
      for (const auto& u : uni)
        if (!is_member(group_mul(b, group_mul(u, binv)), SubgroupName::Unipotent))
          normal = false;
      for (const auto& u : uni_p)
        if (!is_member(group_mul(b, group_mul(u, binv)),
                       SubgroupName::UnipotentPrime))
          normal = false;
      if (!normal) break;
    }
    sink.add("unipotent-normality", f, l, normal,
             normal ? "conjugation preserves U and U'" : "counterexample found");

    // Torus projection is a homomorphism with kernel U; commutators land in
    // U (so B/U is abelian) and in U' (so B/U' is abelian).
    bool hom = true, kernel = true, commutators = true;
    GroupElement id = group_identity(f, ell);
    for (const auto& b1 : borel) {
      GroupElement t1 = torus_part(b1);
      if ((torus_part(b1) == id) != is_member(b1, SubgroupName::Unipotent))
        kernel = false;
      for (const auto& b2 : borel) {
        GroupElement prod = group_mul(b1, b2);
        if (!(torus_part(prod) == group_mul(t1, torus_part(b2)))) hom = false;
        GroupElement comm = group_mul(
            prod, group_inverse(group_mul(b2, b1)));
        if (!is_member(comm, SubgroupName::Unipotent)) commutators = false;
        if (!is_member(comm, SubgroupName::UnipotentPrime)) commutators = false;
      }
      if (!(hom && kernel && commutators)) break;
    }
    i64 torus_order = group_order(f, SubgroupName::Torus, ell);
    i64 quotient = group_order(f, SubgroupName::Borel, ell) /
                   group_order(f, SubgroupName::Unipotent, ell);
    bool sizes = torus_order == quotient;
    bool pass = hom && kernel && commutators && sizes;
    std::ostringstream os;
    os << "hom=" << hom << " kernel=" << kernel << " commutators=" << commutators
       << " |B|/|U|=" << quotient << " |T|=" << torus_order;
    sink.add("borel-quotient-structure", f, l, pass, os.str());
  };
  for (i64 l : opt.gl2_order_ells) structure_check(Family::GL2QM, l);
  for (i64 l : opt.fiber_order_ells) structure_check(Family::Fiber, l);
  for (i64 l : opt.gsp4_order_ells) structure_check(Family::GSp4, l);

  // --- witnesses land in their sets
  for (Family f : {Family::GL2QM, Family::GSp4, Family::Fiber}) {
    bool pass = true;
    std::ostringstream os;
    int count = 0;
    std::vector<int> indices =
        f == Family::GL2QM ? std::vector<int>{4, 5} : std::vector<int>{1, 2, 3, 4, 5};
    for (i64 l : odd_primes_upto(opt.witness_max_ell)) {
      if (l < 5) continue;
      PrimeModulus ell(l);
      if (f != Family::GL2QM && !gsp4_admissible(ell)) continue;
      for (int i : indices) {
        ConjSetId id{f, i};
        if (!in_conj_set(witness(id, ell), id)) {
          pass = false;
          os << "i=" << i << " ell=" << l << " failed; ";
        }
        ++count;
      }
    }
    os << count << " witnesses checked";
    sink.add("witness-membership", f, opt.witness_max_ell, pass, os.str());
  }

  // --- U' closure on the Borel slice (exhaustive / sampled), plus the
  //     literal full-set statement, which fails with a concrete
  //     counterexample and is reported as such.
  for (i64 l : opt.closure_ells) {
    PrimeModulus ell(l);
    closure_borel_gl2(ell, sink);
    closure_borel_fiber(ell, sink);
  }
  {
    PrimeModulus ell(opt.gsp4_sample_ell);
    std::mt19937_64 rng(opt.seed);
    bool pass = true;
    for (int n = 0; n < opt.gsp4_samples; ++n) {
      int i = 1 + static_cast<int>(rng() % 5);
      ConjSetId id{Family::GSp4, i};
      GroupElement m = gsp4_borel_member(id, ell, rng);
      GroupElement u = random_subgroup_element(
          Family::GSp4, SubgroupName::UnipotentPrime, ell, rng);
      GroupElement prod = group_mul(u, m);
      if (!in_conj_set(prod, id) || !is_member(prod, SubgroupName::Borel)) {
        pass = false;
        break;
      }
    }
    std::ostringstream os;
    os << opt.gsp4_samples << " random Borel-slice (u, m) samples";
    sink.add("uprime-closure-borel", Family::GSp4, opt.gsp4_sample_ell, pass,
             os.str());

    closure_general(Family::GL2QM, PrimeModulus(5), sink);
    closure_general(Family::Fiber, PrimeModulus(5), sink);
    closure_general(Family::GSp4, ell, sink);
  }

  // --- Borel conjugation
  {
    std::mt19937_64 rng(opt.seed + 1);
    for (Family f : {Family::GL2QM, Family::Fiber, Family::GSp4}) {
      i64 l = f == Family::GSp4 ? opt.gsp4_sample_ell : 13;
      PrimeModulus ell(f == Family::Fiber ? 5 : l);
      bool pass = true;
      std::ostringstream os;
      int count = 0;
      auto check_one = [&](const GroupElement& m, ConjSetId id) {
        auto [g, b] = conjugate_into_borel(m);
        GroupElement lhs = group_mul(group_inverse(g), group_mul(m, g));
        if (!(lhs == b) || !is_member(b, SubgroupName::Borel) ||
            !in_conj_set(b, id)) {
          pass = false;
          os << family_name(f) << " i=" << id.i << " mismatch; ";
        }
        ++count;
      };
      if (f == Family::GL2QM) {
        GroupElement probe = group_identity(f, ell);
        for_each_mat2(ell.value(), [&](const Mat2& m) {
          if (mat2_det(m, ell) == 0) return;
          probe.m1 = m;
          if (in_conj_set(probe, ConjSetId{f, 4}))
            check_one(probe, ConjSetId{f, 4});
        });
      } else if (f == Family::Fiber) {
        auto gl2 = all_gl2(ell);
        GroupElement probe = group_identity(f, ell);
        for (const auto& m1 : gl2) {
          i64 d1 = mat2_det(m1, ell);
          for (const auto& m2 : gl2) {
            if (mat2_det(m2, ell) != d1) continue;
            probe.m1 = m1;
            probe.m2 = m2;
            for (int i = 1; i <= 5; ++i)
              if (in_conj_set(probe, ConjSetId{f, i}))
                check_one(probe, ConjSetId{f, i});
          }
        }
      } else {
        for (int i = 1; i <= 5; ++i) {
          ConjSetId id{f, i};
          check_one(witness(id, ell), id);
          for (int n = 0; n < 50; ++n)
            check_one(random_conj_set_element(id, ell, rng), id);
        }
      }
      os << count << " elements conjugated";
      sink.add("borel-conjugation", f, ell.value(), pass, os.str());
    }
  }

  // --- quotient image sizes bounded and constant in ell
  {
    auto admissible_ells = [&](Family f) {
      std::vector<i64> out;
      for (i64 l : odd_primes_upto(opt.witness_max_ell)) {
        if (f == Family::GL2QM) {
          if (l >= 5) out.push_back(l);
        } else {
          PrimeModulus ell(l);
          if (gsp4_admissible(ell)) out.push_back(l);
        }
      }
      return out;
    };
    for (Family f : {Family::GL2QM, Family::Fiber, Family::GSp4}) {
      std::vector<int> indices =
          f == Family::GL2QM ? std::vector<int>{4, 5} : std::vector<int>{1, 2, 3, 4, 5};
      bool pass = true;
      std::ostringstream os;
      for (int i : indices) {
        std::vector<i64> sizes;
        for (i64 l : admissible_ells(f)) {
          PrimeModulus ell(l);
          sizes.push_back(quotient_image_size(ConjSetId{f, i}, ell));
        }
        bool constant = std::adjacent_find(sizes.begin(), sizes.end(),
                                           std::not_equal_to<>()) == sizes.end();
        bool bounded = !sizes.empty() &&
                       *std::max_element(sizes.begin(), sizes.end()) <= 8;
        if (!constant || !bounded) pass = false;
        os << "i=" << i << ":" << (sizes.empty() ? -1 : sizes.front())
           << (constant ? "" : "(varies!)") << " ";
      }
      sink.add("quotient-image-bound", f, opt.witness_max_ell, pass, os.str());
    }
  }

  // --- the paired templates describe identical sets
  {
    for (i64 l : {5, 7}) {
      PrimeModulus ell(l);
      bool pass = true;
      // Coefficient-level identity: the mu -> -mu substitution swaps the
      // paired templates.
      for (i64 mu = 1; mu < l; ++mu) {
        i64 nmu = l - mu;
        if (!(ell.reduce(mu * mu) == ell.reduce(nmu * nmu))) pass = false;
      }
      // Exhaustive set equality at small scale.
      GroupElement probe = group_identity(Family::GL2QM, ell);
      for_each_mat2(l, [&](const Mat2& m) {
        if (mat2_det(m, ell) == 0) return;
        probe.m1 = m;
        if (in_conj_set(probe, ConjSetId{Family::GL2QM, 4}) !=
            in_conj_set(probe, ConjSetId{Family::GL2QM, 5}))
          pass = false;
      });
      auto gl2 = all_gl2(ell);
      GroupElement fprobe = group_identity(Family::Fiber, ell);
      for (const auto& m1 : gl2) {
        i64 d1 = mat2_det(m1, ell);
        for (const auto& m2 : gl2) {
          if (mat2_det(m2, ell) != d1) continue;
          fprobe.m1 = m1;
          fprobe.m2 = m2;
          if (in_conj_set(fprobe, ConjSetId{Family::Fiber, 1}) !=
                  in_conj_set(fprobe, ConjSetId{Family::Fiber, 2}) ||
              in_conj_set(fprobe, ConjSetId{Family::Fiber, 4}) !=
                  in_conj_set(fprobe, ConjSetId{Family::Fiber, 5}))
            pass = false;
        }
      }
      sink.add("conjset-pair-identity", Family::Fiber, l, pass,
               "templates 1/2 and 4/5 agree elementwise");
    }
  }

  return sink.entries;
}

}  // namespace ssc
