#include "ssc/weil.hpp"

#include <cmath>
#include <stdexcept>

namespace ssc {

namespace {

using i128 = __int128;

i64 isqrt_i64(i64 n) {
  if (n < 0) return -1;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

bool is_supersingular(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::SimpleSSPlusP:
    case SurfaceClass::SimpleSSMinusP:
    case SurfaceClass::SimpleSSZero:
    case SurfaceClass::SimpleSSMinus2P:
    case SurfaceClass::SplitSS:
      return true;
    default:
      return false;
  }
}

std::string to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::Ordinary: return "ordinary";
    case SurfaceClass::PRankOne: return "prank1";
    case SurfaceClass::SimpleSSPlusP: return "ss_simple_pp";
    case SurfaceClass::SimpleSSMinusP: return "ss_simple_mp";
    case SurfaceClass::SimpleSSZero: return "ss_simple_0";
    case SurfaceClass::SimpleSSMinus2P: return "ss_simple_m2p";
    case SurfaceClass::SplitSS: return "ss_split";
    case SurfaceClass::NotSS: return "not_ss";
  }
  return "?";
}

i64 WeilQuartic::q() const {
  i64 v = 1;
  for (int i = 0; i < k; ++i) v *= p;
  return v;
}

std::optional<std::pair<i64, int>> prime_power_decompose(i64 q) {
  if (q < 2) return std::nullopt;
  for (i64 f = 2; f * f <= q; ++f) {
    if (q % f == 0) {
      int k = 0;
      i64 v = q;
      while (v % f == 0) {
        v /= f;
        ++k;
      }
      if (v != 1) return std::nullopt;
      return std::make_pair(f, k);
    }
  }
  return std::make_pair(q, 1);  // q itself prime
}

bool validate_weil(i64 a1, i64 a2, i64 q) {
  if (!prime_power_decompose(q))
    throw std::invalid_argument("validate_weil: q is not a prime power");
  // |a1| <= 4 sqrt(q)
  if (i128(a1) * a1 > i128(16) * q) return false;
  // a2 <= a1^2/4 + 2q, i.e. discriminant >= 0
  if (i128(a1) * a1 - i128(4) * a2 + i128(8) * q < 0) return false;
  // 2|a1| sqrt(q) - 2q <= a2, squared with sign care
  i128 lhs = i128(a2) + i128(2) * q;
  if (lhs < 0) return false;
  if (lhs * lhs < i128(4) * a1 * a1 * q) return false;
  return true;
}

WeilQuartic make_weil(i64 a1, i64 a2, i64 p, int k) {
  if (k < 1 || !is_prime_u64(static_cast<u64>(p)))
    throw std::invalid_argument("make_weil: q must be a positive prime power");
  WeilQuartic w{a1, a2, p, k};
  if (!validate_weil(a1, a2, w.q()))
    throw std::invalid_argument("make_weil: coefficients violate Weil bounds");
  return w;
}

i64 discriminant(const WeilQuartic& w) {
  return w.a1 * w.a1 - 4 * w.a2 + 8 * w.q();
}

SurfaceClass classify_supersingular(const WeilQuartic& w) {
  if (w.k != 1)
    throw std::domain_error("classify_supersingular: requires a prime field");
  if (w.p < 7)
    throw std::domain_error("classify_supersingular: requires p >= 7");
  if (w.a1 != 0) return SurfaceClass::NotSS;
  if (w.a2 == w.p) return SurfaceClass::SimpleSSPlusP;
  if (w.a2 == -w.p) return SurfaceClass::SimpleSSMinusP;
  if (w.a2 == 0) return SurfaceClass::SimpleSSZero;
  if (w.a2 == -2 * w.p) return SurfaceClass::SimpleSSMinus2P;
  if (w.a2 == 2 * w.p) return SurfaceClass::SplitSS;
  return SurfaceClass::NotSS;
}

SurfaceClass classify_full(const WeilQuartic& w) {
  SurfaceClass c = classify_supersingular(w);
  if (c != SurfaceClass::NotSS) return c;
  switch (p_rank(w)) {
    case 2: return SurfaceClass::Ordinary;
    case 1: return SurfaceClass::PRankOne;
    default: return SurfaceClass::NotSS;
  }
}

int p_rank(const WeilQuartic& w) {
  if (w.a2 % w.p != 0) return 2;
  if (w.a1 % w.p != 0) return 1;
  return 0;
}

bool is_squarefree(i64 d) {
  if (d < 1) return false;
  for (i64 f = 2; f * f <= d; ++f) {
    if (d % f == 0) {
      d /= f;
      if (d % f == 0) return false;
    }
  }
  return true;
}

QuadFieldElem make_quad_field_elem(i64 d, i64 u, i64 v) {
  if (d <= 1 || !is_squarefree(d))
    throw std::invalid_argument("QuadFieldElem: d must be squarefree > 1");
  bool integral = (d % 4 == 1) ? ((u - v) % 2 == 0)
                               : (u % 2 == 0 && v % 2 == 0);
  if (!integral)
    throw std::invalid_argument("QuadFieldElem: (u, v) not in the ring of integers");
  return {d, u, v};
}

std::pair<i64, i64> rm_expand(const QuadFieldElem& b, i64 q) {
  return {b.trace(), 2 * q + b.norm()};
}

std::optional<QuadFieldElem> rm_factor(const WeilQuartic& w, i64 d) {
  if (d <= 1 || !is_squarefree(d))
    throw std::invalid_argument("rm_factor: d must be squarefree > 1");
  i64 delta = discriminant(w);
  if (delta == 0) {
    if (w.k != 1)
      throw std::domain_error(
          "rm_factor: square factorization defined over prime fields only");
    if (w.a1 % 2 != 0) return std::nullopt;
    return QuadFieldElem{d, w.a1, 0};
  }
  if (delta % d != 0) return std::nullopt;
  i64 vsq = delta / d;
  i64 v = isqrt_i64(vsq);
  if (v < 0 || v * v != vsq) return std::nullopt;
  i64 u = w.a1;
  bool integral = (d % 4 == 1) ? ((u - v) % 2 == 0)
                               : (u % 2 == 0 && v % 2 == 0);
  if (!integral) return std::nullopt;
  return QuadFieldElem{d, u, v};
}

}  // namespace ssc
