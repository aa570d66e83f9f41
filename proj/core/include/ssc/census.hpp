#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssc/finite_field.hpp"
#include "ssc/weil.hpp"

namespace ssc {

struct BadReductionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// y^2 = f(x) with f monic of degree 5 or 6 and squarefree over Q.
/// Coefficients are stored ascending (coeffs[i] multiplies x^i); the integer
/// discriminant of f is computed at construction.
struct HyperellipticCurve {
  std::vector<i64> coeffs;
  i64 disc{0};

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Construct from descending coefficients (leading first). The leading
/// coefficient must be 1 and the discriminant nonzero.
HyperellipticCurve make_curve(const std::vector<i64>& descending);

/// Integer discriminant of a monic polynomial, by a fraction-free resultant
/// with the derivative.
i64 poly_discriminant(const std::vector<i64>& ascending);

/// Point count #C(F_{p^k}) for k in {1, 2} of the smooth model: the affine
/// character sum plus the points at infinity (one for degree 5; for degree 6,
/// two or zero according to the quadratic character of the leading
/// coefficient). Throws BadReductionError when p = 2 or p divides disc.
i64 reduce_and_count(const HyperellipticCurve& c, i64 p, int k);

/// Frobenius quartic at a good prime: a1 = N1 - p - 1 and
/// a2 = (a1^2 + N2 - p^2 - 1) / 2.
WeilQuartic frobenius_quartic(const HyperellipticCurve& c, i64 p);

struct CensusRecord {
  i64 p{0};
  i64 n1{0};
  i64 n2{0};
  i64 a1{0};
  i64 a2{0};
  i64 delta{0};
  SurfaceClass cls{SurfaceClass::NotSS};

  bool operator==(const CensusRecord&) const = default;
};

struct CensusOptions {
  /// Full: every good prime gets a complete record. ScreenPRankZero: count
  /// N1 everywhere but finish the record only where p | a1, the necessary
  /// condition for p-rank 0.
  enum class Mode { Full, ScreenPRankZero };
  Mode mode{Mode::Full};
  int threads{0};  // 0 = hardware_concurrency
  std::vector<i64>* skipped_bad_primes{nullptr};
};

/// One record per good prime 7 <= p <= x, ascending; bad primes skipped.
std::vector<CensusRecord> census_scan(const HyperellipticCurve& c, double x,
                                      const CensusOptions& opt = {});

/// Middle-coefficient rule g(p) for the split-surface counting functions.
/// AffineInP is g(p) = 2p + m0. Evaluation enforces |g(p)| <= 6p.
struct CoefficientRule {
  enum class Kind { Constant, AffineInP, ExternalTable };
  Kind kind{Kind::Constant};
  i64 value{0};  // Constant: t; AffineInP: m0
  std::map<i64, i64> table;

  static CoefficientRule constant(i64 t);
  static CoefficientRule affine_in_p(i64 m0);
  static CoefficientRule external(std::map<i64, i64> t);
  i64 eval(i64 p) const;
};

struct Selector {
  enum class Kind { SSTotal, SSSplit, SplitWithRule, SplitWithInterval };
  Kind kind{Kind::SSTotal};
  CoefficientRule rule;
  i64 interval_lo{0};
  i64 interval_hi{0};

  static Selector ss_total();
  static Selector ss_split();
  static Selector split_with_rule(CoefficientRule r);
  static Selector split_with_interval(i64 lo, i64 hi);
};

/// Count of records matching the selector. SplitWithRule counts records with
/// vanishing discriminant and a2 = g(p); SplitWithInterval counts vanishing
/// discriminant with a2 in [lo, hi].
i64 counting_functions(const std::vector<CensusRecord>& records,
                       const Selector& sel);

/// CSV round-trip for census records, schema
/// p,n1,n2,a1,a2,delta,class. Byte-deterministic.
std::string census_to_csv(const std::vector<CensusRecord>& records);
std::vector<CensusRecord> census_from_csv(const std::string& csv);

std::vector<i64> primes_up_to(i64 n);

}  // namespace ssc
