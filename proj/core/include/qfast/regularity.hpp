#pragma once

// Finite-grid and finite-horizon classifiers for regularity conditions on
// growth functions and for the minimum-modulus criteria.
//
// Every witness is oriented so that the condition under test reads
// lhs >= rhs. Pointwise checks fail only on a resolved violation
// (compare_resolved == less). Lag certificates need resolved dominance
// (greater, or exact equality); ties at the representation's resolution
// neither certify nor refute.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qfast/efun.hpp"
#include "qfast/growth.hpp"
#include "qfast/xreal.hpp"

namespace qfast {

enum class VerdictStatus {
  holds_on_grid,
  violated,
  consistent_to_horizon,
  violation_all_lags,
  inconclusive,
};

std::string to_string(VerdictStatus s);

/// lo..hi with n points, uniform or log-spaced. `coordinate` names the
/// variable ("t" for log-radius, "r" for radius).
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 256;
  bool log_spaced = false;
  std::string coordinate = "t";

  std::vector<double> points() const;
  /// Throws PreconditionError unless n >= 1, lo <= hi (lo < hi for n > 1)
  /// and, for log spacing, lo > 0.
  void validate() const;
};

struct Witness {
  std::map<std::string, double> where;
  TowerReal lhs;
  TowerReal rhs;
};

struct RegularityVerdict {
  std::string criterion;
  std::map<std::string, double> params;
  VerdictStatus status = VerdictStatus::inconclusive;
  std::vector<Witness> witnesses;
  Grid grid;
  bool has_grid = false;
  /// Derived quantities (empirical constants, first-failure indices, ...).
  std::map<std::string, double> results;
  std::vector<std::string> notes;
  /// Per-parameter sub-verdicts, e.g. one per epsilon of a weak check.
  std::vector<RegularityVerdict> parts;
};

/// Witnesses kept per verdict: the worst violation first, then grid order.
inline constexpr std::size_t kMaxWitnesses = 8;

/// Second divided differences of phi are >= 0 on the grid, up to 1e-9 of the
/// local scale max(1, |phi|) / h^2.
RegularityVerdict check_convexity(const GrowthModel& g, const Grid& grid, unsigned jobs = 1);

/// D(t) = t phi'(t) / phi(t) by forward differences with step
/// min(1e-7 max(1, |t|), grid spacing). Holds when min D >= 1 + c_min; the
/// empirical c = min D - 1 is reported as results["c_witness"].
RegularityVerdict check_log_regular_derivative(const GrowthModel& g, const Grid& grid,
                                               double c_min, unsigned jobs = 1);

/// phi(k t) >= k d phi(t) at each grid t. results["ratio_min"] is the least
/// phi(kt) / phi(t) seen, the finite-grid version of Wang's liminf.
RegularityVerdict check_log_regular_hadamard(const GrowthModel& g, double k, double d,
                                             const Grid& grid, unsigned jobs = 1);

/// c with (1 - 1/(kd)) / (1 - 1/k) = 1 + c.
double constants_c_from_kd(double k, double d);
/// d = k^c.
double constants_d_from_c(double k, double c);

/// phi-orbit P(n) and psi_eps-orbit S(n) from t_R; per lag l <= L the first
/// n <= N with S(n + l) < P(n) is results["first_failure_lag_<l>"] (-1 if
/// none through the horizon). Failing every lag counts as a violation only
/// when eps phi expands at t_R (psi_expands_at); otherwise it is inconclusive.
RegularityVerdict check_eps_regularity(const GrowthModel& g, double eps, double t_r,
                                       std::size_t lags, std::size_t horizon);

/// check_eps_regularity over each epsilon; overall status is the worst.
RegularityVerdict check_weak_regularity(const GrowthModel& g, const std::vector<double>& eps_grid,
                                        double t_r, std::size_t lags, std::size_t horizon,
                                        unsigned jobs = 1);

/// psi(r) = r^k: phi(k t) >= m k phi(t) for t >= 0 on the grid.
RegularityVerdict check_psi_regularity(const GrowthModel& g, double k, double m,
                                       const Grid& grid, unsigned jobs = 1);

/// Sequence test in log coordinates with s_n = k P(n) (r_n = psi(M^n(R)),
/// psi(r) = r^k): s_n >= P(n) and phi(s_n) >= m s_{n+1} for n < N.
RegularityVerdict check_weak_sequence(const GrowthModel& g, double m, double k, double t_r,
                                      std::size_t horizon);

/// phi(t) >= exp^n((log^{n-1} t)^q) on the grid, i.e.
/// M(r) >= exp^{n+1}((log^n r)^q) with r = e^t.
RegularityVerdict check_tower_lower_bound(const GrowthModel& g, unsigned n, double q,
                                          const Grid& grid, unsigned jobs = 1);

/// K = 4 log 4.
double minmod_constant();

/// log m(r) <= (1 - K / log r) log M(r) on an r-grid (r > 1). A zero on the
/// circle passes.
RegularityVerdict check_minmod_criterion(const EntireFunction& f, const Grid& r_grid,
                                         unsigned jobs = 1);

/// pi / (4 sqrt 2).
double beurling_constant();

struct BeurlingReport {
  double r1 = 0.0;
  double r2 = 0.0;
  double mu = 0.0;
  double log_measure = 0.0;
  std::size_t components = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool trivial = false;
  bool confirmed = false;
};

/// Samples m(t) on `samples` log-spaced points of [r1, r2], forms E from
/// the grid cells whose two endpoints satisfy m <= mu and compares
/// log(M(r2)/mu) with c exp(m_l(E)/2) log(M(r1)/mu). Throws PreconditionError
/// unless 0 <= r1 < r2 and 0 < mu < M(r2).
BeurlingReport beurling_check(const EntireFunction& f, double r1, double r2, double mu,
                              std::size_t samples = 256, unsigned jobs = 1);

/// 2 log((k - alpha) / (c (beta - alpha))).
double fr_threshold(double k, double alpha, double beta);

/// Logarithmic measure of F_r = {rho in (r, r^k) : m(rho) <= M(r^k)^{alpha/k}}
/// sampled on `samples` log-spaced points.
double fr_log_measure(const EntireFunction& f, double r, double k, double alpha,
                      std::size_t samples = 256);

RegularityVerdict check_Fr_criterion(const EntireFunction& f, double k, double alpha, double beta,
                                     const Grid& r_grid, unsigned jobs = 1);

struct CascadeConstants {
  double r = 0.0;
  double k = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  long n = 0;
  double p = 0.0;
  double p_lower = 0.0;
  /// Both sides of the sufficient condition on (k, d), when d was given.
  bool has_d = false;
  double d = 0.0;
  double suff_lhs = 0.0;
  double suff_rhs = 0.0;
};

/// Constants for radius r and exponent k. Throws PreconditionError unless
/// delta(r^k) < 1 and 1 < lambda < r^{k-1}. Pass d > 1 to evaluate the
/// sufficient condition as well.
CascadeConstants cascade_constants(double r, double k, double d = 0.0);

struct CascadeCheck {
  CascadeConstants constants;
  double lhs = 0.0;  // log log M(r^k)
  double rhs = 0.0;  // log of (r^{(k-1)/2})^{p n/(n+1)} log M(r)
  bool holds = false;
};

/// log M(r^k) > (r^{(k-1)/2})^{p n/(n+1)} log M(r), compared in log form.
CascadeCheck cascade_check(const EntireFunction& f, double r, double k);

struct DoublingStats {
  double inf_ratio = 0.0;
  double sup_ratio = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Inf and sup of log M(2r) / log M(r) over the tail half of the grid,
/// skipping points with M(r) <= 1.
DoublingStats doubling_stats(const EntireFunction& f, const std::vector<double>& r_grid);

}  // namespace qfast
