#pragma once

// Generators and verifiers for three explicit growth constructions:
//   * a convex piecewise-linear model that is b-regular but not a-regular,
//   * a convex model mixing exp(sqrt t) with chords that is weakly regular
//     but not log-regular,
//   * a lacunary product recipe whose growth defeats eps-regularity,
// plus a tester for the equivalent forms of log-regularity.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfast/growth.hpp"
#include "qfast/regularity.hpp"
#include "qfast/xreal.hpp"

namespace qfast {

struct CheckLine {
  CheckLine() = default;
  explicit CheckLine(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::map<std::string, double> values;
  std::string detail;
};

struct ConstructionReport {
  std::string construction;
  std::map<std::string, double> params;
  std::vector<CheckLine> checks;
  /// Regularity runs. Their status is reported; expectations are checks.
  std::vector<RegularityVerdict> verdicts;
  /// Informational quantities that carry no pass/fail meaning.
  std::map<std::string, double> data;
  std::vector<std::string> notes;

  bool all_passed() const;
  const CheckLine* find(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Piecewise-linear model: t_0 = 1, t_1 = 2, t_{n+2}/t_{n+1} = (1/c) t_{n+1}/t_n,
// Phi(0) = 0, Phi(t_n) = t_{n+1}, linear in between and on (-inf, t_0].

class Example62Model final : public PiecewiseLinearModel {
 public:
  Example62Model(double a, double b, std::vector<TowerReal> t);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return (a_ + b_) / 2; }
  double alpha() const { return (a_ + c()) / 2; }
  double beta() const { return (c() + b_) / 2; }
  /// t_0 .. t_K.
  const std::vector<TowerReal>& sequence() const { return t_; }

 private:
  double a_;
  double b_;
  std::vector<TowerReal> t_;
};

/// Builds t_0 .. t_count. Throws DomainError unless 0 < a < b < 1 and
/// count >= 4.
Example62Model build_example62(double a, double b, std::size_t count = 96);

/// Segment bounds for Psi_s = s Phi, the start window
/// [4(1-c)/(b-c) t_N, t_{N+1}], eps = b and eps = a regularity runs,
/// descent of Psi_beta orbits along the knots and the drop index per lag.
ConstructionReport verify_example62(const Example62Model& model, std::size_t lags,
                                    std::size_t horizon);

// ---------------------------------------------------------------------------
// mu(t) = exp(sqrt t), t_{n+1} = mu(t_n), k_n = t_{n+1}^{1/4}; Phi = mu except
// on [t_{n+1}/k_n, t_{n+1}] where it is the chord of mu.

class Example61Model final : public GrowthModel {
 public:
  Example61Model(double t0, std::size_t chords);

  std::string name() const override { return "e61model"; }
  /// Below t = 1 the model continues linearly with slope mu'(1) = e/2.
  TowerReal phi(const TowerReal& t) const override;
  /// t_0, then the chord endpoints a_0, T_0, a_1, T_1, ...
  std::vector<TowerReal> knots() const override;

  double t0() const { return t0_; }
  std::size_t chords() const { return top_.size(); }
  /// T_n = t_{n+1}.
  const TowerReal& chord_top(std::size_t n) const { return top_.at(n); }
  /// a_n = T_n / k_n = T_n^{3/4}.
  const TowerReal& chord_bottom(std::size_t n) const { return bottom_.at(n); }
  /// log k_n = log(T_n) / 4.
  TowerReal log_k(std::size_t n) const;

  /// log Phi(s T_n) for s in [1/k_n, 1], the chord point at fraction s.
  TowerReal log_phi_on_chord(std::size_t n, double s) const;
  /// The same with s given as log s, for chords where 1/k_n underflows.
  TowerReal log_phi_at_log_fraction(std::size_t n, double log_s) const;
  /// log Phi(T_n) - log Phi(s T_n) in closed form, exact where the
  /// difference of the two tower values would be absorbed.
  double log_drop_on_chord(std::size_t n, double log_s) const;

 private:
  double t0_;
  std::vector<TowerReal> top_;
  std::vector<TowerReal> bottom_;
};

/// Throws DomainError unless t0 >= 64/9 and exp(3/4 sqrt t0) > t0.
/// Chords whose endpoints the representation cannot separate are refused
/// with EvaluatorRefusal; from t0 = 20 that allows 4.
Example61Model build_example61(double t0 = 20.0, std::size_t chords = 4);

/// Convexity at every knot, the bound log Phi(t)/t <= T_n^{-1/4} on chords,
/// the ratio Phi(T_n)/Phi(T_n/k) against (1-1/k_n)/(1/k-1/k_n) and k, and
/// Phi(t) >= exp(t^{1/4}) on chord and off-chord samples, for
/// n_lo <= n <= n_hi.
ConstructionReport verify_example61(const Example61Model& model, double k, std::size_t n_lo,
                                    std::size_t n_hi);

// ---------------------------------------------------------------------------
// Lacunary product recipe. Window m is 2 r_m < r < r_{m+1}/2 where
// P- r^m / r_1..r_m < M(r) < P+ r^m / r_1..r_m with P+- the gap-4 constants.

struct LacunaryRecipe {
  double eps = 0.5;
  double eps_prime = 0.8;
  std::size_t m_max = 12;
  double log_p_plus = 0.0;
  double log_p_minus = 0.0;
  /// log r_1 .. log r_{m_max+1}.
  std::vector<double> log_zeros;
  /// log R_1 .. log R_{m_max}.
  std::vector<double> log_markers;
  /// N_1 .. N_{m_max}.
  std::vector<long> counts;

  TowerReal zero(std::size_t m) const { return TowerReal::from_log(log_zeros.at(m - 1)); }
  TowerReal marker(std::size_t m) const { return TowerReal::from_log(log_markers.at(m - 1)); }
  long count(std::size_t m) const { return counts.at(m - 1); }
  /// Sum of log r_k for k <= m.
  double log_zero_sum(std::size_t m) const;
};

/// Smallest integer N > m log(eps m) / log(eps'/eps) when eps m > 1, else 1.
long lacunary_count(double eps, double eps_prime, std::size_t m);

/// Throws DomainError unless 0 < eps < eps' < 1 and m_max >= 1.
LacunaryRecipe build_lacunary_recipe(double eps, double eps_prime, std::size_t m_max = 12);

/// phi(t) = max_m (m t - sum_{k<=m} log r_k) over the recipe's zeros; refused
/// beyond log r_{m_max+1}.
class TropicalLacunaryModel final : public GrowthModel {
 public:
  explicit TropicalLacunaryModel(const LacunaryRecipe& recipe);

  std::string name() const override { return "lacunary_recipe"; }
  TowerReal phi(const TowerReal& t) const override;
  std::vector<TowerReal> knots() const override;

  double phi_double(double t) const;
  /// Upper bound on log M - phi over the whole axis.
  double gap_bound() const { return gap_; }

 private:
  std::vector<double> log_zeros_;
  std::vector<double> prefix_;
  double gap_;
};

/// Re-checks the gap condition, the window inequalities, the exponent
/// inequality on N_m, window containment and the long-orbit inequality from
/// stored data, and compares the model with the direct product on windows
/// that fit in double range.
ConstructionReport verify_lacunary_recipe(const LacunaryRecipe& recipe);

/// eps-regularity of the tropical model from t_R (default log R_3) with the
/// per-lag m, N_m, N'_m bookkeeping and the predicted failure index.
ConstructionReport verify_nonregularity(const LacunaryRecipe& recipe, std::optional<double> t_r,
                                        std::size_t lags, std::size_t horizon);

// ---------------------------------------------------------------------------

struct Thm43Input {
  double k = 2.0;
  std::optional<double> d;
  std::optional<double> c;
};

/// (a) t phi'/phi >= 1 + c, (b) phi(kt) >= k d phi(t) with d = k^c for the
/// tested k values, (c) phi(kt) >= k d phi(t) for the given (k, d). Missing
/// constants are derived from the supplied ones.
ConstructionReport thm43_equivalence_test(const GrowthModel& g, const Thm43Input& in,
                                          const Grid& grid, unsigned jobs = 1);

}  // namespace qfast
