#include "ssc/census.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace ssc {

namespace {

using i128 = __int128;

// Fraction-free Gaussian elimination (Bareiss) determinant of an integer
// matrix. Exact as long as intermediates fit in 128 bits, which holds
// comfortably for the Sylvester matrices of desk-scale curves.
i64 bareiss_det(std::vector<std::vector<i128>> m) {
  const size_t n = m.size();
  i128 prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  i128 det = sign * m[n - 1][n - 1];
  return static_cast<i64>(det);
}

}  // namespace

i64 poly_discriminant(const std::vector<i64>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  // f' coefficients.
  std::vector<i64> df(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i)
    df[static_cast<size_t>(i - 1)] = f[static_cast<size_t>(i)] * i;
  // Sylvester matrix of f (degree n) and f' (degree n-1): (2n-1) square.
  const int dim = 2 * n - 1;
  std::vector<std::vector<i128>> syl(static_cast<size_t>(dim),
                                     std::vector<i128>(static_cast<size_t>(dim), 0));
  for (int r = 0; r < n - 1; ++r)
    for (int i = 0; i <= n; ++i)
      syl[static_cast<size_t>(r)][static_cast<size_t>(r + n - i)] =
          f[static_cast<size_t>(i)];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= n - 1; ++i)
      syl[static_cast<size_t>(n - 1 + r)][static_cast<size_t>(r + n - 1 - i)] =
          df[static_cast<size_t>(i)];
  i64 res = bareiss_det(std::move(syl));
  // disc = (-1)^{n(n-1)/2} Res(f, f') for monic f.
  int e = (n * (n - 1) / 2) % 2;
  return e ? -res : res;
}

HyperellipticCurve make_curve(const std::vector<i64>& descending) {
  if (descending.size() != 6 && descending.size() != 7)
    throw std::invalid_argument("make_curve: degree must be 5 or 6");
  if (descending.front() != 1)
    throw std::invalid_argument("make_curve: polynomial must be monic");
  HyperellipticCurve c;
  c.coeffs.assign(descending.rbegin(), descending.rend());
  c.disc = poly_discriminant(c.coeffs);
  if (c.disc == 0)
    throw std::invalid_argument("make_curve: polynomial is not squarefree");
  return c;
}

i64 reduce_and_count(const HyperellipticCurve& c, i64 p, int k) {
  if (k != 1 && k != 2)
    throw std::invalid_argument("reduce_and_count: k must be 1 or 2");
  if (p == 2 || c.disc % p == 0)
    throw BadReductionError("bad reduction at p = " + std::to_string(p));
  PrimeModulus mod(p);
  const int deg = c.degree();
  std::vector<i64> f(c.coeffs.size());
  for (size_t i = 0; i < f.size(); ++i) f[i] = mod.reduce(c.coeffs[i]);

  i64 count = 0;
  if (k == 1) {
    for (i64 x = 0; x < p; ++x) {
      i64 v = 0;
      for (size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
      count += 1 + legendre(v, mod);
    }
    count += 1;  // x = infinity on the degree-5 model
    if (deg == 6) count += legendre(f.back(), mod);
  } else {
    // Horner over F_{p^2} = F_p(sqrt(r)) in plain 64-bit arithmetic; the
    // character of z is legendre(N(z)), i.e. z^((p^2-1)/2) through the
    // Frobenius factorization.
    const i64 r = smallest_nonresidue(mod);
    const size_t nc = f.size();
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b) {
        i64 va = 0, vb = 0;
        for (size_t i = nc; i-- > 0;) {
          i64 na = (va * a + r * (vb * b % p) + f[i]) % p;
          vb = (va * b + vb * a) % p;
          va = na;
        }
        i64 norm = ((va * va - r * (vb * vb % p)) % p + p) % p;
        count += 1 + legendre(norm, mod);
      }
    count += 1;
    if (deg == 6) {
      ExtFieldElem lead = ExtFieldElem::make(f.back(), 0, mod);
      count += lead.chi(mod);
    }
  }
  return count;
}

WeilQuartic frobenius_quartic(const HyperellipticCurve& c, i64 p) {
  i64 n1 = reduce_and_count(c, p, 1);
  i64 n2 = reduce_and_count(c, p, 2);
  i64 a1 = n1 - p - 1;
  i64 num = a1 * a1 + n2 - p * p - 1;
  if (num % 2 != 0)
    throw std::logic_error("frobenius_quartic: point counts are inconsistent");
  return make_weil(a1, num / 2, p, 1);
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<size_t>(n + 1), false);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[static_cast<size_t>(i)]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[static_cast<size_t>(j)] = true;
  }
  return out;
}

std::vector<CensusRecord> census_scan(const HyperellipticCurve& c, double x,
                                      const CensusOptions& opt) {
  std::vector<CensusRecord> records;
  if (x < 7) return records;
  std::vector<i64> ps;
  for (i64 p : primes_up_to(static_cast<i64>(x)))
    if (p >= 7) {
      if (c.disc % p == 0) {
        if (opt.skipped_bad_primes) opt.skipped_bad_primes->push_back(p);
        continue;
      }
      ps.push_back(p);
    }

  std::vector<std::vector<CensusRecord>> partial(ps.size());
  auto work = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      i64 p = ps[i];
      i64 n1 = reduce_and_count(c, p, 1);
      i64 a1 = n1 - p - 1;
      if (opt.mode == CensusOptions::Mode::ScreenPRankZero && a1 % p != 0)
        continue;
      i64 n2 = reduce_and_count(c, p, 2);
      i64 a2 = (a1 * a1 + n2 - p * p - 1) / 2;
      WeilQuartic w = make_weil(a1, a2, p, 1);
      partial[i].push_back(
          {p, n1, n2, a1, a2, discriminant(w), classify_full(w)});
    }
  };

  int nthreads =
      opt.threads > 0 ? opt.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (nthreads == 1 || ps.size() < 16) {
    work(0, ps.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = ps.size() / static_cast<size_t>(nthreads) + 1;
    for (int t = 0; t < nthreads; ++t) {
      size_t lo = static_cast<size_t>(t) * chunk;
      size_t hi = std::min(ps.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  for (auto& part : partial)
    for (auto& r : part) records.push_back(r);
  return records;
}

CoefficientRule CoefficientRule::constant(i64 t) {
  return {Kind::Constant, t, {}};
}
CoefficientRule CoefficientRule::affine_in_p(i64 m0) {
  return {Kind::AffineInP, m0, {}};
}
CoefficientRule CoefficientRule::external(std::map<i64, i64> t) {
  return {Kind::ExternalTable, 0, std::move(t)};
}

i64 CoefficientRule::eval(i64 p) const {
  i64 g = 0;
  switch (kind) {
    case Kind::Constant: g = value; break;
    case Kind::AffineInP: g = 2 * p + value; break;
    case Kind::ExternalTable: {
      auto it = table.find(p);
      if (it == table.end())
        throw std::invalid_argument("CoefficientRule: no table entry for p");
      g = it->second;
      break;
    }
  }
  if (g > 6 * p || g < -6 * p)
    throw std::invalid_argument("CoefficientRule: |g(p)| <= 6p violated");
  return g;
}

Selector Selector::ss_total() { return {Kind::SSTotal, {}, 0, 0}; }
Selector Selector::ss_split() { return {Kind::SSSplit, {}, 0, 0}; }
Selector Selector::split_with_rule(CoefficientRule r) {
  return {Kind::SplitWithRule, std::move(r), 0, 0};
}
Selector Selector::split_with_interval(i64 lo, i64 hi) {
  return {Kind::SplitWithInterval, {}, lo, hi};
}

i64 counting_functions(const std::vector<CensusRecord>& records,
                       const Selector& sel) {
  i64 count = 0;
  for (const auto& r : records) {
    switch (sel.kind) {
      case Selector::Kind::SSTotal:
        if (is_supersingular(r.cls)) ++count;
        break;
      case Selector::Kind::SSSplit:
        if (r.cls == SurfaceClass::SplitSS) ++count;
        break;
      case Selector::Kind::SplitWithRule:
        if (r.delta == 0 && r.a2 == sel.rule.eval(r.p)) ++count;
        break;
      case Selector::Kind::SplitWithInterval:
        if (r.delta == 0 && r.a2 >= sel.interval_lo && r.a2 <= sel.interval_hi)
          ++count;
        break;
    }
  }
  return count;
}

std::string census_to_csv(const std::vector<CensusRecord>& records) {
  std::ostringstream os;
  os << "p,n1,n2,a1,a2,delta,class\n";
  for (const auto& r : records)
    os << r.p << ',' << r.n1 << ',' << r.n2 << ',' << r.a1 << ',' << r.a2
       << ',' << r.delta << ',' << to_string(r.cls) << '\n';
  return os.str();
}

std::vector<CensusRecord> census_from_csv(const std::string& csv) {
  std::vector<CensusRecord> out;
  std::istringstream is(csv);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("p,", 0) == 0) continue;  // header
    }
    std::istringstream ls(line);
    CensusRecord r;
    char comma;
    std::string cls;
    ls >> r.p >> comma >> r.n1 >> comma >> r.n2 >> comma >> r.a1 >> comma >>
        r.a2 >> comma >> r.delta >> comma;
    std::getline(ls, cls);
    if (!ls && cls.empty())
      throw std::invalid_argument("census_from_csv: malformed line: " + line);
    for (SurfaceClass c :
         {SurfaceClass::Ordinary, SurfaceClass::PRankOne,
          SurfaceClass::SimpleSSPlusP, SurfaceClass::SimpleSSMinusP,
          SurfaceClass::SimpleSSZero, SurfaceClass::SimpleSSMinus2P,
          SurfaceClass::SplitSS, SurfaceClass::NotSS}) {
      if (to_string(c) == cls) {
        r.cls = c;
        break;
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace ssc
