#pragma once

#include <vector>

#include "ssc/finite_field.hpp"

namespace ssc {

/// Sieve configuration: a target bound x, t auxiliary odd primes
/// ell_1 < ... < ell_t with product P_t < x, and the template case index the
/// primes were chosen for. The scale constraints t <= ceil(sqrt(log x)) and
/// ell <= C log x / log log x are enforced at construction.
struct SieveConfig {
  double x{0};
  int t{0};
  std::vector<i64> primes;
  int case_index{4};
  double ell_bound_constant{2.0};
};

SieveConfig make_sieve_config(double x, std::vector<i64> primes,
                              int case_index, double ell_bound_constant = 2.0);

struct SieveReport {
  i64 member_count{0};
  std::vector<i64> per_ell;  // #{p in M : (p/ell) != -1} per configured ell
  i64 leftover{0};           // #{p in M : (p/ell) = -1 for every ell}
  double bound_term{0};      // x / (2^t log(x / P_t))
  bool identity_holds{false};
  double leftover_vs_bound{0};
};

/// The inclusion-exclusion partition of a member set of primes <= x:
/// exact per-ell counts, the leftover sifted count, and the analytic bound
/// term for comparison. Throws when P_t >= x.
SieveReport sieve_report(const std::vector<i64>& member_primes,
                         const SieveConfig& cfg);

enum class BoundCase { Generic, RMorQM };

/// The bound-curve value without its implicit constant:
/// x (log log x)^{3/2} / (log x)^{3/2} in the generic case and
/// x (log log x)^2 / (log x)^2 otherwise. Domain x > e^e.
double theorem_bound(BoundCase c, double x);

/// Offset logarithmic integral li(x), evaluated as the adaptive-Simpson
/// quadrature of 1/log t over [2, x] plus li(2).
double li(double x);

/// Degrees and discriminant data of a finite Galois extension L/K.
struct FieldBudget {
  int degree_LK{1};
  int degree_LQ{1};
  int degree_KQ{1};
  double log_dK{0};
  std::vector<i64> ramified;
  i64 rad_rel_disc{1};
};

struct ChebotarevBudget {
  double M{0};          // [L:K] d_K^{1/n_K} prod of ramified primes
  double hensel_ub{0};  // upper bound on log d_L
  double upper{0};      // (|C|/|G|) li(x)
  bool applicable{false};
};

ChebotarevBudget chebotarev_budget(const FieldBudget& fb, i64 cardC, i64 cardG,
                                   double x, double kappa = 1.0);

enum class ScheduleCase { Generic, RM, QM };

struct ParamSchedule {
  double ell1{0};
  int t{0};
};

/// Auxiliary-prime schedules: ell1 = c1 (log x / (n_K log log(N_A d_K x)))^e
/// with exponent e = 1/4, 1/2, 1 for the Generic, RM, QM cases (the RM inner
/// argument omits d_K), and t = round(c log log x). Clamping ell1 to the
/// smallest admissible prime is the caller's job.
ParamSchedule param_schedule(ScheduleCase sc, double x, i64 n_K, i64 N_A,
                             i64 d_K, double c, double c1);

}  // namespace ssc
