#include "ssc/finite_field.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ssc {

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(a) * b % m);
}

i64 powmod(i64 base, u64 exp, i64 m) {
  i64 r = 1 % m;
  i64 b = base % m;
  if (b < 0) b += m;
  while (exp) {
    if (exp & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return r;
}

i64 invmod(i64 a, i64 m) { return powmod(a, static_cast<u64>(m - 2), m); }

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto witness = [&](u64 a) {
    using u128 = unsigned __int128;
    u64 x = 1, b = a % n, e = d;
    while (e) {
      if (e & 1) x = static_cast<u64>(u128(x) * b % n);
      b = static_cast<u64>(u128(b) * b % n);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<u64>(u128(x) * x % n);
      if (x == n - 1) return true;
    }
    return false;
  };
  // This witness set is deterministic for all n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (!witness(a)) return false;
  }
  return true;
}

namespace {

std::shared_ptr<const detail::QrTable> build_qr_table(i64 ell) {
  auto t = std::make_shared<detail::QrTable>();
  t->legendre.assign(static_cast<size_t>(ell), -1);
  t->sqrt.assign(static_cast<size_t>(ell), -1);
  t->legendre[0] = 0;
  t->sqrt[0] = 0;
  for (i64 r = 1; r <= (ell - 1) / 2; ++r) {
    i64 s = mulmod(r, r, ell);
    t->legendre[static_cast<size_t>(s)] = 1;
    if (t->sqrt[static_cast<size_t>(s)] < 0)
      t->sqrt[static_cast<size_t>(s)] = static_cast<std::int32_t>(r);
  }
  for (i64 n = 2; n < ell; ++n) {
    if (t->legendre[static_cast<size_t>(n)] == -1) {
      t->nonresidue = n;
      break;
    }
  }
  return t;
}

int jacobi(i64 n, i64 k) {
  n %= k;
  if (n < 0) n += k;
  int t = 1;
  while (n != 0) {
    while (n % 2 == 0) {
      n /= 2;
      i64 r = k % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(n, k);
    if (n % 4 == 3 && k % 4 == 3) t = -t;
    n %= k;
  }
  return k == 1 ? t : 0;
}

// Square root of a known quadratic residue a mod p (odd prime), a != 0.
i64 tonelli(i64 a, i64 p) {
  if (p % 4 == 3) return powmod(a, static_cast<u64>((p + 1) / 4), p);
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (jacobi(z, p) != -1) ++z;
  i64 m = s;
  i64 c = powmod(z, static_cast<u64>(q), p);
  i64 t = powmod(a, static_cast<u64>(q), p);
  i64 x = powmod(a, static_cast<u64>((q + 1) / 2), p);
  while (t != 1) {
    i64 t2 = t;
    int i = 0;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    x = mulmod(x, b, p);
  }
  return x;
}

}  // namespace

PrimeModulus::PrimeModulus(i64 ell) : ell_(ell) {
  if (ell < 3 || ell % 2 == 0 || !is_prime_u64(static_cast<u64>(ell)))
    throw std::invalid_argument("PrimeModulus: modulus must be an odd prime");
  if (ell < detail::kQrTableLimit) table_ = build_qr_table(ell);
}

int legendre(i64 n, const PrimeModulus& ell) {
  i64 r = ell.reduce(n);
  if (const auto* t = ell.table()) return t->legendre[static_cast<size_t>(r)];
  return jacobi(r, ell.value());
}

std::optional<i64> sqrt_mod(i64 n, const PrimeModulus& ell) {
  const i64 p = ell.value();
  i64 a = ell.reduce(n);
  if (const auto* t = ell.table()) {
    std::int32_t s = t->sqrt[static_cast<size_t>(a)];
    if (s < 0) return std::nullopt;
    return static_cast<i64>(s);
  }
  if (a == 0) return 0;
  if (jacobi(a, p) != 1) return std::nullopt;
  i64 x = tonelli(a, p);
  return std::min(x, p - x);
}

i64 smallest_nonresidue(const PrimeModulus& ell) {
  if (const auto* t = ell.table()) return t->nonresidue;
  for (i64 n = 2;; ++n)
    if (jacobi(n, ell.value()) == -1) return n;
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers over F_ell, little-endian coefficients.
// Degrees stay tiny (<= ell for the Frobenius power, <= 4 otherwise).

namespace {

using Poly = std::vector<i64>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly poly_mul(const Poly& f, const Poly& g, i64 p) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size(); ++j)
      h[i + j] = (h[i + j] + mulmod(f[i], g[j], p)) % p;
  }
  trim(h);
  return h;
}

// f mod g, g nonzero.
Poly poly_rem(Poly f, const Poly& g, i64 p) {
  trim(f);
  i64 inv_lead = invmod(g.back(), p);
  while (degree(f) >= degree(g)) {
    i64 c = mulmod(f.back(), inv_lead, p);
    size_t shift = f.size() - g.size();
    for (size_t i = 0; i < g.size(); ++i) {
      f[shift + i] = (f[shift + i] - mulmod(c, g[i], p)) % p;
      if (f[shift + i] < 0) f[shift + i] += p;
    }
    trim(f);
  }
  return f;
}

Poly poly_quot(Poly f, const Poly& g, i64 p) {
  trim(f);
  Poly q(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
  i64 inv_lead = invmod(g.back(), p);
  while (degree(f) >= degree(g)) {
    i64 c = mulmod(f.back(), inv_lead, p);
    size_t shift = f.size() - g.size();
    q[shift] = c;
    for (size_t i = 0; i < g.size(); ++i) {
      f[shift + i] = (f[shift + i] - mulmod(c, g[i], p)) % p;
      if (f[shift + i] < 0) f[shift + i] += p;
    }
    trim(f);
  }
  trim(q);
  return q;
}

void make_monic(Poly& f, i64 p) {
  if (f.empty() || f.back() == 1) return;
  i64 inv = invmod(f.back(), p);
  for (auto& c : f) c = mulmod(c, inv, p);
}

Poly poly_gcd(Poly a, Poly b, i64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(a, p);
  return a;
}

Poly poly_derivative(const Poly& f, i64 p) {
  if (f.size() <= 1) return {};
  Poly d(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i)
    d[i - 1] = mulmod(f[i], static_cast<i64>(i % static_cast<size_t>(p)), p);
  trim(d);
  return d;
}

// base^e mod f.
Poly poly_powmod(const Poly& base, u64 e, const Poly& f, i64 p) {
  Poly r{1};
  Poly b = poly_rem(base, f, p);
  while (e) {
    if (e & 1) r = poly_rem(poly_mul(r, b, p), f, p);
    b = poly_rem(poly_mul(b, b, p), f, p);
    e >>= 1;
  }
  return r;
}

i64 poly_eval(const Poly& f, i64 x, i64 p) {
  i64 v = 0;
  for (size_t i = f.size(); i-- > 0;) v = (mulmod(v, x, p) + f[i]) % p;
  return v;
}

// Roots of a monic polynomial known to split into distinct linear factors
// over F_p. Equal-degree splitting with deterministic shifts.
void split_roots(Poly f, i64 p, std::vector<i64>& out) {
  trim(f);
  int d = degree(f);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back((p - f[0]) % p);
    return;
  }
  if (d == 2) {
    // Quadratic formula; the discriminant is a nonzero square here.
    i64 b = f[1], c = f[0];
    i64 disc = ((mulmod(b, b, p) - 4 * c) % p + p) % p;
    i64 s = tonelli(disc, p);
    i64 inv2 = invmod(2, p);
    out.push_back(mulmod(((s - b) % p + p) % p, inv2, p));
    out.push_back(mulmod(((p - s - b) % p + 2 * p) % p, inv2, p));
    return;
  }
  for (i64 a = 0;; ++a) {
    assert(a < p);
    if (poly_eval(f, (p - a) % p, p) == 0) {
      Poly lin{a % p, 1};
      out.push_back((p - a % p) % p);
      split_roots(poly_quot(f, lin, p), p, out);
      return;
    }
    Poly shifted{a % p, 1};
    Poly h = poly_powmod(shifted, static_cast<u64>((p - 1) / 2), f, p);
    if (!h.empty()) h[0] = (h[0] + p - 1) % p;
    trim(h);
    Poly g = poly_gcd(f, h, p);
    if (degree(g) > 0 && degree(g) < degree(f)) {
      split_roots(g, p, out);
      split_roots(poly_quot(f, g, p), p, out);
      return;
    }
  }
}

}  // namespace

std::optional<std::array<i64, 2>> quadratic_linear_roots(
    i64 c1, i64 c0, const PrimeModulus& ell) {
  const i64 p = ell.value();
  c1 = ell.reduce(c1);
  c0 = ell.reduce(c0);
  i64 disc = ell.reduce(mulmod(c1, c1, p) - 4 * c0);
  auto s = sqrt_mod(disc, ell);
  if (!s) return std::nullopt;
  i64 inv2 = invmod(2, p);
  i64 r1 = mulmod(ell.reduce(*s - c1), inv2, p);
  i64 r2 = mulmod(ell.reduce(-*s - c1), inv2, p);
  if (r1 > r2) std::swap(r1, r2);
  return std::array<i64, 2>{r1, r2};
}

std::optional<std::array<i64, 4>> quartic_linear_roots(
    i64 c3, i64 c2, i64 c1, i64 c0, const PrimeModulus& ell) {
  const i64 p = ell.value();
  c3 = ell.reduce(c3);
  c2 = ell.reduce(c2);
  c1 = ell.reduce(c1);
  c0 = ell.reduce(c0);

  std::array<i64, 4> roots{};
  if (c3 == 0 && c1 == 0) {
    // Biquadratic: substitute Y = X^2 and solve by radicals.
    auto ys = quadratic_linear_roots(c2, c0, ell);
    if (!ys) return std::nullopt;
    int k = 0;
    for (i64 y : *ys) {
      auto r = sqrt_mod(y, ell);
      if (!r) return std::nullopt;
      roots[k++] = *r;
      roots[k++] = y == 0 ? 0 : p - *r;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  Poly f{c0, c1, c2, c3, 1};
  Poly g = poly_gcd(f, poly_derivative(f, p), p);
  Poly sf = degree(g) > 0 ? poly_quot(f, g, p) : f;

  // The squarefree part must divide X^p - X.
  Poly x{0, 1};
  Poly frob = poly_powmod(x, static_cast<u64>(p), sf, p);
  Poly diff = frob;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim(diff);
  if (!diff.empty()) return std::nullopt;

  std::vector<i64> distinct;
  split_roots(sf, p, distinct);

  int k = 0;
  Poly rem = f;
  for (i64 r : distinct) {
    Poly lin{(p - r) % p, 1};
    while (degree(rem) >= 1 && poly_eval(rem, r, p) == 0) {
      if (k >= 4) return std::nullopt;
      roots[k++] = r;
      rem = poly_quot(rem, lin, p);
    }
  }
  if (k != 4) return std::nullopt;
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// F_{ell^2}

ExtFieldElem ExtFieldElem::make(i64 a, i64 b, const PrimeModulus& m) {
  return {m.reduce(a), m.reduce(b), m.value(), smallest_nonresidue(m)};
}

i64 ExtFieldElem::norm() const {
  i64 n = (mulmod(a, a, ell) - mulmod(r, mulmod(b, b, ell), ell)) % ell;
  return n < 0 ? n + ell : n;
}

ExtFieldElem ExtFieldElem::operator+(const ExtFieldElem& o) const {
  return {(a + o.a) % ell, (b + o.b) % ell, ell, r};
}

ExtFieldElem ExtFieldElem::operator-(const ExtFieldElem& o) const {
  return {(a - o.a + ell) % ell, (b - o.b + ell) % ell, ell, r};
}

ExtFieldElem ExtFieldElem::operator*(const ExtFieldElem& o) const {
  i64 ac = mulmod(a, o.a, ell);
  i64 bd = mulmod(b, o.b, ell);
  i64 ad_bc = (mulmod(a, o.b, ell) + mulmod(b, o.a, ell)) % ell;
  return {(ac + mulmod(r, bd, ell)) % ell, ad_bc, ell, r};
}

ExtFieldElem ExtFieldElem::inverse() const {
  if (is_zero()) throw std::domain_error("ExtFieldElem: inverse of zero");
  i64 n_inv = invmod(norm(), ell);
  return {mulmod(a, n_inv, ell), mulmod((ell - b) % ell, n_inv, ell), ell, r};
}

ExtFieldElem ExtFieldElem::pow(u64 e) const {
  ExtFieldElem acc{1, 0, ell, r};
  ExtFieldElem base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

int ExtFieldElem::chi(const PrimeModulus& m) const {
  return legendre(norm(), m);
}

}  // namespace ssc
