#include "ssc/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssc {

namespace {

constexpr double kLi2 = 1.0451637801174927848;  // li(2)

double simpson(double (*f)(double), double a, double b) {
  double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

double adaptive_simpson(double (*f)(double), double a, double b, double eps,
                        double whole, int depth) {
  double c = 0.5 * (a + b);
  double left = simpson(f, a, c);
  double right = simpson(f, c, b);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, eps / 2.0, left, depth - 1) +
         adaptive_simpson(f, c, b, eps / 2.0, right, depth - 1);
}

double inv_log(double t) { return 1.0 / std::log(t); }

}  // namespace

double li(double x) {
  if (x < 2.0) throw std::domain_error("li: x must be >= 2");
  if (x == 2.0) return kLi2;
  double integral =
      adaptive_simpson(inv_log, 2.0, x, 1e-9, simpson(inv_log, 2.0, x), 60);
  return integral + kLi2;
}

SieveConfig make_sieve_config(double x, std::vector<i64> primes,
                              int case_index, double ell_bound_constant) {
  if (!(x > std::exp(1.0)))
    throw std::invalid_argument("SieveConfig: x must exceed e");
  if (primes.empty())
    throw std::invalid_argument("SieveConfig: need at least one prime");
  if (case_index < 1 || case_index > 5)
    throw std::invalid_argument("SieveConfig: case index must be in 1..5");
  if (!std::is_sorted(primes.begin(), primes.end()) ||
      std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw std::invalid_argument("SieveConfig: primes must be strictly ascending");
  double product = 1;
  for (i64 l : primes) {
    if (l < 3 || l % 2 == 0 || !is_prime_u64(static_cast<u64>(l)))
      throw std::invalid_argument("SieveConfig: entries must be odd primes");
    product *= static_cast<double>(l);
  }
  int t = static_cast<int>(primes.size());
  double logx = std::log(x);
  if (t > static_cast<int>(std::ceil(std::sqrt(logx))))
    throw std::invalid_argument("SieveConfig: t exceeds ceil(sqrt(log x))");
  double ell_cap = ell_bound_constant * logx / std::log(logx);
  if (static_cast<double>(primes.back()) > ell_cap)
    throw std::invalid_argument(
        "SieveConfig: largest prime exceeds C log x / log log x");
  if (product >= x)
    throw std::invalid_argument("SieveConfig: prime product must stay below x");
  return {x, t, std::move(primes), case_index, ell_bound_constant};
}

SieveReport sieve_report(const std::vector<i64>& member_primes,
                         const SieveConfig& cfg) {
  double pt = 1;
  for (i64 l : cfg.primes) pt *= static_cast<double>(l);
  if (pt >= cfg.x)
    throw std::invalid_argument("sieve_report: P_t >= x, bound term undefined");

  for (i64 p : member_primes) {
    if (static_cast<double>(p) > cfg.x)
      throw std::invalid_argument("sieve_report: member prime exceeds x");
    if (!is_prime_u64(static_cast<u64>(p)))
      throw std::invalid_argument("sieve_report: member set must contain primes");
  }

  SieveReport rep;
  rep.member_count = static_cast<i64>(member_primes.size());
  std::vector<PrimeModulus> mods;
  mods.reserve(cfg.primes.size());
  for (i64 l : cfg.primes) mods.emplace_back(l);

  rep.per_ell.assign(cfg.primes.size(), 0);
  for (i64 p : member_primes) {
    bool all_nonresidue = true;
    for (size_t j = 0; j < mods.size(); ++j) {
      if (legendre(p, mods[j]) != -1) {
        ++rep.per_ell[j];
        all_nonresidue = false;
      }
    }
    if (all_nonresidue) ++rep.leftover;
  }

  rep.bound_term = cfg.x / (std::pow(2.0, cfg.t) * std::log(cfg.x / pt));
  i64 sum = rep.leftover;
  for (i64 c : rep.per_ell) sum += c;
  rep.identity_holds = rep.member_count <= sum;
  rep.leftover_vs_bound =
      rep.bound_term > 0 ? static_cast<double>(rep.leftover) / rep.bound_term
                         : 0.0;
  return rep;
}

double theorem_bound(BoundCase c, double x) {
  if (!(x > std::exp(std::exp(1.0))))
    throw std::domain_error("theorem_bound: requires x > e^e");
  double lx = std::log(x);
  double llx = std::log(lx);
  double e = c == BoundCase::Generic ? 1.5 : 2.0;
  return x * std::pow(llx, e) / std::pow(lx, e);
}

ChebotarevBudget chebotarev_budget(const FieldBudget& fb, i64 cardC, i64 cardG,
                                   double x, double kappa) {
  if (cardC < 1 || cardC > cardG)
    throw std::invalid_argument("chebotarev_budget: need 1 <= |C| <= |G|");
  if (x < 2) throw std::invalid_argument("chebotarev_budget: need x >= 2");
  if (fb.degree_LK < 1 || fb.degree_LQ < 1 || fb.degree_KQ < 1 ||
      fb.rad_rel_disc < 1)
    throw std::invalid_argument("chebotarev_budget: malformed field data");

  ChebotarevBudget out;
  double prod = 1;
  for (i64 p : fb.ramified) prod *= static_cast<double>(p);
  out.M = fb.degree_LK * std::exp(fb.log_dK / fb.degree_KQ) * prod;
  out.hensel_ub = fb.degree_LK * fb.log_dK +
                  (fb.degree_LQ - fb.degree_KQ) *
                      std::log(static_cast<double>(fb.rad_rel_disc)) +
                  fb.degree_LQ * std::log(static_cast<double>(fb.degree_LK));
  out.upper = static_cast<double>(cardC) / static_cast<double>(cardG) * li(x);
  out.applicable = std::log(x) >= kappa * fb.degree_KQ * std::log(out.M * x);
  return out;
}

ParamSchedule param_schedule(ScheduleCase sc, double x, i64 n_K, i64 N_A,
                             i64 d_K, double c, double c1) {
  if (!(x > std::exp(std::exp(1.0))))
    throw std::domain_error("param_schedule: requires x > e^e");
  if (n_K < 1 || N_A < 1 || d_K < 1)
    throw std::invalid_argument("param_schedule: integer parameters must be >= 1");
  if (!(c > 0) || !(c1 > 0))
    throw std::invalid_argument("param_schedule: constants must be positive");

  double inner = sc == ScheduleCase::RM
                     ? static_cast<double>(N_A) * x
                     : static_cast<double>(N_A) * static_cast<double>(d_K) * x;
  double base = std::log(x) / (static_cast<double>(n_K) * std::log(std::log(inner)));
  double exponent = sc == ScheduleCase::Generic ? 0.25
                    : sc == ScheduleCase::RM    ? 0.5
                                                : 1.0;
  ParamSchedule out;
  out.ell1 = c1 * std::pow(base, exponent);
  out.t = static_cast<int>(std::llround(c * std::log(std::log(x))));
  return out;
}

}  // namespace ssc
