#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/errors.hpp"

namespace qfast {

namespace {

constexpr double kGap = 4.0;

// sup of log M - phi for gap ratios >= 4: both the factors below and above
// the current window contribute at most sum_j log(1 + 4^-j).
double tropical_gap_bound() {
  double s = 0.0;
  for (int j = 0; j < 60; ++j) s += std::log1p(std::pow(kGap, -j));
  return 2 * s;
}

// log(4 r + 1) from log r.
double log_four_r_plus_one(double log_r) {
  return std::log(kGap) + log_r + std::log1p(std::exp(-log_r) / kGap);
}

enum class Outcome { holds, unresolved, fails };

// a < b, with a non-strict result within the resolution treated as a tie.
Outcome less_than(double a, double b) {
  if (a < b) return Outcome::holds;
  double tol = TowerReal::kResolution * std::max({1.0, std::abs(a), std::abs(b)});
  return a - b <= tol ? Outcome::unresolved : Outcome::fails;
}

struct Tally {
  std::size_t fails = 0;
  std::size_t unresolved = 0;

  void add(Outcome o) {
    if (o == Outcome::fails) ++fails;
    if (o == Outcome::unresolved) ++unresolved;
  }
  void record(CheckLine& line) const {
    line.values["violations"] = double(fails);
    line.values["unresolved"] = double(unresolved);
    line.passed = fails == 0;
  }
};

}  // namespace

double LacunaryRecipe::log_zero_sum(std::size_t m) const {
  return std::accumulate(log_zeros.begin(), log_zeros.begin() + static_cast<long>(m), 0.0);
}

long lacunary_count(double eps, double eps_prime, std::size_t m) {
  double em = eps * static_cast<double>(m);
  if (em <= 1.0) return 1;
  double x = static_cast<double>(m) * std::log(em) / std::log(eps_prime / eps);
  return static_cast<long>(std::floor(x)) + 1;
}

LacunaryRecipe build_lacunary_recipe(double eps, double eps_prime, std::size_t m_max) {
  if (!(eps > 0.0 && eps < eps_prime && eps_prime < 1.0)) {
    throw DomainError("build_lacunary_recipe: need 0 < eps < eps' < 1");
  }
  if (m_max == 0) throw DomainError("build_lacunary_recipe: need m_max >= 1");
  LacunaryRecipe rec;
  rec.eps = eps;
  rec.eps_prime = eps_prime;
  rec.m_max = m_max;
  rec.log_p_plus = log_window_constant_plus(kGap);
  rec.log_p_minus = log_window_constant_minus(kGap);
  rec.log_zeros.push_back(std::log(5.0));
  double s = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double md = static_cast<double>(m);
    const double log_r = rec.log_zeros.back();
    s += log_r;
    double log_big_r = std::max(std::log(kGap) + log_r,
                                (s - 2 * rec.log_p_minus) / ((1 - eps_prime) * md) + 1.0);
    long n = lacunary_count(eps, eps_prime, m);
    double t = log_big_r;
    for (long j = 0; j < n; ++j) t = md * t - s + 2 * rec.log_p_plus;
    double next = std::max({log_four_r_plus_one(log_r), std::log(kGap) + log_big_r,
                            std::numbers::ln2 + t});
    if (!std::isfinite(next)) throw DomainError("build_lacunary_recipe: zeros beyond range");
    rec.log_markers.push_back(log_big_r);
    rec.counts.push_back(n);
    rec.log_zeros.push_back(next);
  }
  return rec;
}

TropicalLacunaryModel::TropicalLacunaryModel(const LacunaryRecipe& recipe)
    : log_zeros_(recipe.log_zeros), gap_(tropical_gap_bound()) {
  prefix_.push_back(0.0);
  for (double z : log_zeros_) prefix_.push_back(prefix_.back() + z);
}

double TropicalLacunaryModel::phi_double(double t) const {
  if (t > log_zeros_.back()) throw EvaluatorRefusal("lacunary_recipe: beyond the last zero");
  auto m = static_cast<std::size_t>(std::upper_bound(log_zeros_.begin(), log_zeros_.end(), t) -
                                    log_zeros_.begin());
  return static_cast<double>(m) * t - prefix_[m];
}

TowerReal TropicalLacunaryModel::phi(const TowerReal& t) const {
  if (!t.fits_double()) throw EvaluatorRefusal("lacunary_recipe: beyond the last zero");
  return TowerReal::from_double(phi_double(t.to_double()));
}

std::vector<TowerReal> TropicalLacunaryModel::knots() const {
  std::vector<TowerReal> k;
  for (double z : log_zeros_) k.push_back(TowerReal::from_double(z));
  return k;
}

ConstructionReport verify_lacunary_recipe(const LacunaryRecipe& rec) {
  const TropicalLacunaryModel model(rec);
  const double eps = rec.eps;
  const double kappa = model.gap_bound();
  ConstructionReport rep;
  rep.construction = "lacunary_recipe";
  rep.params = {{"eps", eps}, {"eps_prime", rec.eps_prime}, {"m_max", double(rec.m_max)}};
  rep.data["log_p_plus"] = rec.log_p_plus;
  rep.data["log_p_minus"] = rec.log_p_minus;
  rep.data["gap_bound"] = kappa;

  CheckLine gap{"zero_gaps"};
  CheckLine window{"window_bounds"};
  CheckLine exponent{"count_inequality"};
  CheckLine contain{"window_containment"};
  CheckLine long_model{"long_orbit_model"};
  CheckLine long_bounds{"long_orbit_bounds"};
  Tally t_gap, t_window, t_exp, t_contain, t_long, t_long_bounds;
  std::size_t exp_checked = 0;

  for (std::size_t m = 1; m <= rec.m_max; ++m) {
    const double md = static_cast<double>(m);
    const double log_r = rec.log_zeros[m - 1];
    const double log_next = rec.log_zeros[m];
    const double s = rec.log_zero_sum(m);
    const double t_big = rec.log_markers[m - 1];
    const long n = rec.counts[m - 1];
    const std::string tag = "_m" + std::to_string(m);

    t_gap.add(less_than(std::log(kGap), log_next - log_r));

    // Window [R_m, r_{m+1}/2) inside (2 r_m, r_{m+1}/2); the lower bound's
    // margin over r^{eps' m} grows with t, the upper is uniform in t.
    double lower_margin = md * t_big - s + 2 * rec.log_p_minus - rec.eps_prime * md * t_big;
    t_window.add(less_than(0.0, lower_margin));
    t_window.add(less_than(2 * rec.log_p_plus, s));
    t_window.add(less_than(std::numbers::ln2 + log_r, t_big));
    t_window.add(less_than(t_big, log_next - std::numbers::ln2));
    rep.data["window_lower_margin" + tag] = lower_margin;

    if (eps * md > 1.0) {
      ++exp_checked;
      double lhs = static_cast<double>(n + static_cast<long>(m)) * std::log(eps * md);
      double rhs = static_cast<double>(n) * std::log(rec.eps_prime * md);
      t_exp.add(less_than(lhs, rhs));
    }

    // The upper window bound reaches r_{m+1}/2 exactly when it sets r_{m+1};
    // the model orbit stays strictly below.
    double upper = t_big;
    double trop = t_big;
    for (long j = 0; j < n; ++j) {
      upper = md * upper - s + 2 * rec.log_p_plus;
      trop = model.phi_double(trop);
    }
    if (upper > log_next - std::numbers::ln2) {
      t_contain.add(less_than(upper, log_next - std::numbers::ln2));
    }
    t_contain.add(less_than(trop, log_next - std::numbers::ln2));

    // mu_eps^{N_m + m}(R_m) < M^{N_m}(R_m): on the model, and with the
    // global bounds phi <= log M <= phi + kappa.
    double mu_model = t_big;
    double mu_upper = t_big;
    for (long j = 0; j < n + static_cast<long>(m); ++j) {
      mu_model = eps * model.phi_double(mu_model);
      mu_upper = eps * (model.phi_double(mu_upper) + kappa);
    }
    rep.data["long_lhs" + tag] = mu_model;
    rep.data["long_rhs" + tag] = trop;
    t_long.add(less_than(mu_model, trop));
    t_long_bounds.add(less_than(mu_upper, trop));
  }

  t_gap.record(gap);
  t_window.record(window);
  t_exp.record(exponent);
  exponent.values["checked"] = double(exp_checked);
  t_contain.record(contain);
  t_long.record(long_model);
  t_long_bounds.record(long_bounds);
  rep.checks = {gap, window, exponent, contain, long_model, long_bounds};

  // Direct product on the zeros that fit in double range; later zeros move
  // log M by at most (4/3) r / r_next, far below the tolerance here.
  {
    CheckLine line{"direct_product"};
    LacunaryProduct p;
    for (double z : rec.log_zeros) {
      if (z > 700.0) break;
      p.zeros.push_back(std::exp(z));
    }
    EntireFunction f("lacunary_recipe_partial", p);
    double t_hi = std::min(690.0, rec.log_zeros.back() - 1.0);
    std::size_t compared = 0, bad = 0;
    for (int i = 0; i <= 400; ++i) {
      double t = t_hi * i / 400.0;
      double lm = f.max_modulus(std::exp(t)).log_value;
      double phi = model.phi_double(t);
      ++compared;
      double tol = 1e-9 * std::max(1.0, std::abs(lm));
      if (lm < phi - tol || lm > phi + kappa + tol) ++bad;
      for (std::size_t m = 1; m <= p.zeros.size() && m <= rec.m_max; ++m) {
        double lo = std::numbers::ln2 + rec.log_zeros[m - 1];
        double hi = rec.log_zeros[m] - std::numbers::ln2;
        if (t > lo && t < hi) {
          double base = static_cast<double>(m) * t - rec.log_zero_sum(m);
          if (lm - base < 2 * rec.log_p_minus - tol || lm - base > 2 * rec.log_p_plus + tol) ++bad;
        }
      }
    }
    line.values["compared"] = double(compared);
    line.values["violations"] = double(bad);
    line.values["t_hi"] = t_hi;
    line.passed = bad == 0;
    rep.checks.push_back(line);
  }
  return rep;
}

ConstructionReport verify_nonregularity(const LacunaryRecipe& rec, std::optional<double> t_r,
                                        std::size_t lags, std::size_t horizon) {
  const TropicalLacunaryModel model(rec);
  const double eps = rec.eps;
  const double start = t_r.value_or(rec.log_markers.at(std::min<std::size_t>(3, rec.m_max) - 1));
  const double m_of_r = model.phi_double(start);
  if (!(m_of_r > start)) throw PreconditionError("verify_nonregularity: needs phi(t_R) > t_R");

  ConstructionReport rep;
  rep.construction = "lacunary_nonregularity";
  rep.params = {{"eps", eps},
                {"eps_prime", rec.eps_prime},
                {"t_R", start},
                {"L", double(lags)},
                {"N", double(horizon)}};

  RegularityVerdict v = check_eps_regularity(model, eps, start, lags, horizon);
  CheckLine status{"violation_all_lags"};
  status.passed = v.status == VerdictStatus::violation_all_lags;
  status.detail = to_string(v.status);

  // mu_eps orbit from t_R, long enough to bracket every marker in use.
  std::vector<double> mu{start};
  try {
    while (mu.size() < 100000 && mu.back() <= rec.log_markers.back()) {
      double next = eps * model.phi_double(mu.back());
      if (!(next > mu.back())) break;
      mu.push_back(next);
    }
  } catch (const EvaluatorRefusal&) {
  }
  auto phi_iter = [&](double t, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) t = model.phi_double(t);
    return t;
  };
  auto mu_iter = [&](double t, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) t = eps * model.phi_double(t);
    return t;
  };

  CheckLine eq_m{"late_orbit_inequality"};
  std::size_t bad_m = 0, checked_m = 0;
  double adequate = 0.0;
  bool all_failed = true;
  for (std::size_t l = 0; l <= lags; ++l) {
    const std::string tag = "_lag_" + std::to_string(l);
    double first = v.results.at("first_failure_lag_" + std::to_string(l));
    rep.data["first_failure" + tag] = first;
    std::size_t m = l + 1;
    while (m <= rec.m_max && !(rec.log_markers[m - 1] > m_of_r)) ++m;
    if (m > rec.m_max) {
      rep.notes.push_back("lag " + std::to_string(l) + ": no marker beyond M(R) up to m_max");
      all_failed = all_failed && first >= 0;
      continue;
    }
    std::optional<std::size_t> n_prime;
    for (std::size_t j = 0; j + 1 < mu.size(); ++j) {
      if (mu[j] <= rec.log_markers[m - 1] && rec.log_markers[m - 1] < mu[j + 1]) {
        n_prime = j;
        break;
      }
    }
    rep.data["m" + tag] = double(m);
    rep.data["N_m" + tag] = double(rec.count(m));
    if (!n_prime) {
      rep.notes.push_back("lag " + std::to_string(l) + ": mu orbit does not bracket R_m");
      all_failed = all_failed && first >= 0;
      continue;
    }
    std::size_t predicted = static_cast<std::size_t>(rec.count(m)) + *n_prime + 1;
    rep.data["N_prime" + tag] = double(*n_prime);
    rep.data["predicted_failure" + tag] = double(predicted);
    try {
      ++checked_m;
      double lhs = mu_iter(start, predicted + m - 1);
      double rhs = phi_iter(start, predicted);
      if (!(lhs < rhs)) ++bad_m;
    } catch (const EvaluatorRefusal&) {
      rep.notes.push_back("lag " + std::to_string(l) + ": orbit left the recipe's zeros");
      --checked_m;
    }
    if (first >= 0 && first > double(predicted)) ++bad_m;
    adequate = std::max(adequate, first >= 0 ? first : double(predicted));
    all_failed = all_failed && first >= 0;
  }
  eq_m.values["checked"] = double(checked_m);
  eq_m.values["violations"] = double(bad_m);
  eq_m.passed = bad_m == 0 && checked_m > 0;
  rep.data["min_adequate_horizon"] = adequate;
  if (!all_failed) {
    rep.notes.push_back("horizon insufficient: estimated minimal N is " +
                        std::to_string(static_cast<long>(adequate)));
  }
  rep.checks = {status, eq_m};
  rep.verdicts.push_back(std::move(v));
  return rep;
}

}  // namespace qfast
