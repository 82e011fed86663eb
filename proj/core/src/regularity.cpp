#include "qfast/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qfast/errors.hpp"
#include "qfast/parallel.hpp"

namespace qfast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointCheck {
  double at = 0.0;
  TowerReal lhs;
  TowerReal rhs;
  bool violated = false;
  double deficit = 0.0;
};

PointCheck make_check(double at, const TowerReal& lhs, const TowerReal& rhs) {
  PointCheck pc{at, lhs, rhs, false, 0.0};
  if (compare_resolved(lhs, rhs) == Resolved::less) {
    pc.violated = true;
    pc.deficit = difference(rhs, lhs);
  }
  return pc;
}

// Shared tail of the pointwise checks: status and ordered witnesses.
void finish_pointwise(RegularityVerdict& v, const std::vector<PointCheck>& checks,
                      const std::string& coord) {
  std::optional<std::size_t> worst;
  std::size_t count = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (!checks[i].violated) continue;
    ++count;
    if (!worst || checks[i].deficit > checks[*worst].deficit) worst = i;
  }
  v.results["violations"] = static_cast<double>(count);
  if (!worst) {
    v.status = VerdictStatus::holds_on_grid;
    return;
  }
  v.status = VerdictStatus::violated;
  auto push = [&](std::size_t i) {
    v.witnesses.push_back(Witness{{{coord, checks[i].at}}, checks[i].lhs, checks[i].rhs});
  };
  push(*worst);
  for (std::size_t i = 0; i < checks.size() && v.witnesses.size() < kMaxWitnesses; ++i) {
    if (checks[i].violated && i != *worst) push(i);
  }
}

RegularityVerdict base_verdict(std::string criterion, const Grid& grid) {
  RegularityVerdict v;
  v.criterion = std::move(criterion);
  v.grid = grid;
  v.has_grid = true;
  return v;
}

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

int status_rank(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds_on_grid:
    case VerdictStatus::consistent_to_horizon:
      return 0;
    case VerdictStatus::inconclusive:
      return 1;
    case VerdictStatus::violated:
    case VerdictStatus::violation_all_lags:
      return 2;
  }
  return 1;
}

TowerReal td(double x) { return TowerReal::from_double(x); }

}  // namespace

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds_on_grid:
      return "holds-on-grid";
    case VerdictStatus::violated:
      return "violated";
    case VerdictStatus::consistent_to_horizon:
      return "consistent-to-horizon";
    case VerdictStatus::violation_all_lags:
      return "violation-all-lags";
    case VerdictStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

void Grid::validate() const {
  require(n >= 1, "grid: needs at least one point");
  require(std::isfinite(lo) && std::isfinite(hi), "grid: bounds must be finite");
  require(n == 1 ? lo <= hi : lo < hi, "grid: bounds must increase");
  require(!log_spaced || lo > 0.0, "grid: log spacing needs lo > 0");
}

std::vector<double> Grid::points() const {
  validate();
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double u = static_cast<double>(i) / last;
    out[i] = log_spaced ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                        : lo + u * (hi - lo);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

RegularityVerdict check_convexity(const GrowthModel& g, const Grid& grid, unsigned jobs) {
  RegularityVerdict v = base_verdict("convexity", grid);
  std::vector<double> t = grid.points();
  require(t.size() >= 3, "convexity: needs >= 3 grid points");
  std::vector<TowerReal> phi = parallel_map(t.size(), jobs, [&](std::size_t i) { return g.phi_at(t[i]); });

  std::vector<PointCheck> checks;
  double min_normalized = kInf;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    double hl = t[i] - t[i - 1];
    double hr = t[i + 1] - t[i];
    double f0 = phi[i - 1].to_double();
    double f1 = phi[i].to_double();
    double f2 = phi[i + 1].to_double();
    PointCheck pc;
    pc.at = t[i];
    if (std::isfinite(f0) && std::isfinite(f1) && std::isfinite(f2)) {
      double sl = (f1 - f0) / hl;
      double sr = (f2 - f1) / hr;
      double scale = std::max({1.0, std::abs(f0), std::abs(f1), std::abs(f2)});
      double normalized = (sr - sl) * std::min(hl, hr) / scale;
      min_normalized = std::min(min_normalized, normalized);
      pc.lhs = td(sr);
      pc.rhs = td(sl);
      pc.violated = normalized < -1e-9;
      pc.deficit = -normalized;
    } else {
      // slopes of an increasing phi at tower magnitude
      TowerReal sl = scale(difference_positive(phi[i], phi[i - 1]), 1.0 / hl);
      TowerReal sr = scale(difference_positive(phi[i + 1], phi[i]), 1.0 / hr);
      pc = make_check(t[i], sr, sl);
    }
    checks.push_back(pc);
  }
  v.results["min_normalized_second_difference"] = std::isfinite(min_normalized) ? min_normalized : 0.0;
  finish_pointwise(v, checks, grid.coordinate);
  return v;
}

RegularityVerdict check_log_regular_derivative(const GrowthModel& g, const Grid& grid,
                                               double c_min, unsigned jobs) {
  RegularityVerdict v = base_verdict("logreg", grid);
  v.params["c_min"] = c_min;
  std::vector<double> t = grid.points();
  struct DPoint {
    double t;
    double d;
  };
  std::vector<DPoint> pts = parallel_map(t.size(), jobs, [&](std::size_t i) {
    double spacing = t.size() > 1 ? (i + 1 < t.size() ? t[i + 1] - t[i] : t[i] - t[i - 1]) : 1.0;
    double h = std::min(1e-7 * std::max(1.0, std::abs(t[i])), spacing);
    TowerReal f0 = g.phi_at(t[i]);
    TowerReal f1 = g.phi_at(t[i] + h);
    if (!f0.is_positive()) throw DomainError("logreg: phi(t) <= 0 on grid");
    double d = (t[i] / h) * std::expm1(log_ratio(f1, f0));
    return DPoint{t[i], d};
  });
  double min_d = kInf;
  std::vector<PointCheck> checks;
  for (const auto& p : pts) {
    min_d = std::min(min_d, p.d);
    checks.push_back(make_check(p.t, td(p.d), td(1.0 + c_min)));
  }
  v.results["d_min"] = min_d;
  v.results["c_witness"] = min_d - 1.0;
  finish_pointwise(v, checks, grid.coordinate);
  return v;
}

RegularityVerdict check_log_regular_hadamard(const GrowthModel& g, double k, double d,
                                             const Grid& grid, unsigned jobs) {
  require(k > 1.0 && d > 1.0, "hadamard: needs k > 1 and d > 1");
  RegularityVerdict v = base_verdict("hadamard", grid);
  v.params["k"] = k;
  v.params["d"] = d;
  std::vector<double> t = grid.points();
  struct HPoint {
    PointCheck check;
    double ratio;
  };
  std::vector<HPoint> pts = parallel_map(t.size(), jobs, [&](std::size_t i) {
    TowerReal f1 = g.phi_at(t[i]);
    TowerReal fk = g.phi_at(k * t[i]);
    double ratio = f1.is_positive() && fk.is_positive() ? std::exp(log_ratio(fk, f1)) : kInf;
    return HPoint{make_check(t[i], fk, scale(f1, k * d)), ratio};
  });
  std::vector<PointCheck> checks;
  double ratio_min = kInf;
  for (const auto& p : pts) {
    checks.push_back(p.check);
    ratio_min = std::min(ratio_min, p.ratio);
  }
  if (std::isfinite(ratio_min)) v.results["ratio_min"] = ratio_min;
  finish_pointwise(v, checks, grid.coordinate);
  return v;
}

double constants_c_from_kd(double k, double d) {
  require(k > 1.0 && d > 1.0, "c_from_kd: needs k > 1 and d > 1");
  return (1.0 - 1.0 / (k * d)) / (1.0 - 1.0 / k) - 1.0;
}

double constants_d_from_c(double k, double c) {
  require(k > 1.0 && c > 0.0, "d_from_c: needs k > 1 and c > 0");
  return std::pow(k, c);
}

RegularityVerdict check_eps_regularity(const GrowthModel& g, double eps, double t_r,
                                       std::size_t lags, std::size_t horizon) {
  require(eps > 0.0 && eps < 1.0, "eps regularity: eps must lie in (0, 1)");
  require(horizon >= 1, "eps regularity: horizon must be >= 1");
  TowerReal start = td(t_r);
  if (compare_resolved(g.phi(start), start) != Resolved::greater) {
    throw PreconditionError("eps regularity: needs phi(t_R) > t_R");
  }
  RegularityVerdict v;
  v.criterion = "eps";
  v.params["eps"] = eps;
  v.params["t_R"] = t_r;
  v.params["L"] = static_cast<double>(lags);
  v.params["N"] = static_cast<double>(horizon);

  OrbitSequence p = iterate_map(g, MapKind::phi, 1.0, start, horizon);
  OrbitSequence s = iterate_map(g, MapKind::psi_eps, eps, start, horizon + lags);
  if (p.truncated || s.truncated) {
    v.results["truncated"] = 1.0;
    v.notes.push_back("range-truncated: " + (p.truncated ? p.note : s.note));
  }

  bool any_certified = false;
  bool all_failed = true;
  double certified_lag = -1.0;
  for (std::size_t l = 0; l <= lags; ++l) {
    long fail = -1;
    bool certified = true;
    for (std::size_t n = 0; n <= horizon; ++n) {
      if (n >= p.values.size() || n + l >= s.values.size()) {
        certified = false;
        break;
      }
      const TowerReal& sv = s.values[n + l];
      const TowerReal& pv = p.values[n];
      Resolved r = compare_resolved(sv, pv);
      if (r == Resolved::less) {
        fail = static_cast<long>(n);
        v.witnesses.push_back(Witness{{{"lag", static_cast<double>(l)}, {"n", static_cast<double>(n)}}, sv, pv});
        break;
      }
      if (r == Resolved::indistinguishable && !(sv == pv)) certified = false;
    }
    v.results["first_failure_lag_" + std::to_string(l)] = static_cast<double>(fail);
    if (fail >= 0) certified = false;
    if (fail < 0) all_failed = false;
    if (certified && !any_certified) certified_lag = static_cast<double>(l);
    any_certified = any_certified || certified;
  }
  v.results["certified_lag"] = certified_lag;
  // The lag form is equivalent to eps-regularity only when the psi_eps orbit
  // of t_R escapes; otherwise failing every lag refutes nothing.
  const bool expanding = psi_expands_at(g, eps, t_r);
  v.results["psi_expanding"] = expanding ? 1.0 : 0.0;
  if (any_certified) {
    v.status = VerdictStatus::consistent_to_horizon;
  } else if (all_failed && expanding) {
    v.status = VerdictStatus::violation_all_lags;
  } else if (all_failed) {
    v.status = VerdictStatus::inconclusive;
    v.notes.push_back("eps phi does not expand at t_R; choose t_R >= threshold_R_eps");
  } else {
    v.status = VerdictStatus::inconclusive;
  }
  return v;
}

RegularityVerdict check_weak_regularity(const GrowthModel& g, const std::vector<double>& eps_grid,
                                        double t_r, std::size_t lags, std::size_t horizon,
                                        unsigned jobs) {
  require(!eps_grid.empty(), "weak regularity: empty epsilon grid");
  RegularityVerdict v;
  v.criterion = "weak";
  v.params["t_R"] = t_r;
  v.params["L"] = static_cast<double>(lags);
  v.params["N"] = static_cast<double>(horizon);
  v.parts = parallel_map(eps_grid.size(), jobs, [&](std::size_t i) {
    return check_eps_regularity(g, eps_grid[i], t_r, lags, horizon);
  });
  v.status = v.parts.front().status;
  for (const auto& part : v.parts) {
    if (status_rank(part.status) > status_rank(v.status)) v.status = part.status;
  }
  return v;
}

RegularityVerdict check_psi_regularity(const GrowthModel& g, double k, double m,
                                       const Grid& grid, unsigned jobs) {
  require(k > 1.0 && m > 1.0, "psi regularity: needs k > 1 and m > 1");
  require(grid.lo >= 0.0, "psi regularity: needs t >= 0 so that psi(r) >= r");
  RegularityVerdict v = base_verdict("psi", grid);
  v.params["k"] = k;
  v.params["m"] = m;
  std::vector<double> t = grid.points();
  std::vector<PointCheck> checks = parallel_map(t.size(), jobs, [&](std::size_t i) {
    return make_check(t[i], g.phi_at(k * t[i]), scale(g.phi_at(t[i]), m * k));
  });
  finish_pointwise(v, checks, grid.coordinate);
  return v;
}

RegularityVerdict check_weak_sequence(const GrowthModel& g, double m, double k, double t_r,
                                      std::size_t horizon) {
  require(k > 1.0 && m > 1.0, "weak sequence: needs k > 1 and m > 1");
  RegularityVerdict v;
  v.criterion = "weak-sequence";
  v.params["m"] = m;
  v.params["k"] = k;
  v.params["t_R"] = t_r;
  v.params["N"] = static_cast<double>(horizon);
  OrbitSequence p = iterate_map(g, MapKind::phi, 1.0, td(t_r), horizon + 1);
  bool failed = false;
  bool checked_all = true;
  for (std::size_t n = 0; n < horizon; ++n) {
    if (n + 1 >= p.values.size()) {
      checked_all = false;
      break;
    }
    TowerReal s_n = scale(p.values[n], k);
    TowerReal s_next = scale(p.values[n + 1], k);
    TowerReal lhs;
    try {
      lhs = g.phi(s_n);
    } catch (const EvaluatorRefusal& e) {
      checked_all = false;
      v.notes.push_back(std::string("range-truncated: ") + e.what());
      break;
    }
    TowerReal rhs = scale(s_next, m);
    if (compare_resolved(lhs, rhs) == Resolved::less) {
      failed = true;
      v.witnesses.push_back(Witness{{{"n", static_cast<double>(n)}}, lhs, rhs});
      if (v.witnesses.size() >= kMaxWitnesses) break;
    }
  }
  if (failed) {
    v.status = VerdictStatus::violated;
  } else {
    v.status = checked_all ? VerdictStatus::consistent_to_horizon : VerdictStatus::inconclusive;
  }
  return v;
}

RegularityVerdict check_tower_lower_bound(const GrowthModel& g, unsigned n, double q,
                                          const Grid& grid, unsigned jobs) {
  require(n >= 1, "tower bound: n must be >= 1");
  require(q > 0.0 && q < 1.0, "tower bound: q must lie in (0, 1)");
  RegularityVerdict v = base_verdict("tower", grid);
  v.params["n"] = n;
  v.params["q"] = q;
  std::vector<double> t = grid.points();
  std::vector<PointCheck> checks = parallel_map(t.size(), jobs, [&](std::size_t i) {
    TowerReal x = td(t[i]);
    for (unsigned j = 1; j < n; ++j) x = apply_log(x);
    if (!x.is_positive()) throw DomainError("tower bound: iterated log must be positive");
    TowerReal rhs = scale_pow(x, q);
    for (unsigned j = 0; j < n; ++j) rhs = apply_exp(rhs);
    return make_check(t[i], g.phi_at(t[i]), rhs);
  });
  finish_pointwise(v, checks, grid.coordinate);
  return v;
}

double minmod_constant() { return 4.0 * std::log(4.0); }

RegularityVerdict check_minmod_criterion(const EntireFunction& f, const Grid& r_grid,
                                         unsigned jobs) {
  require(r_grid.lo > 1.0, "minmod: needs r > 1");
  RegularityVerdict v = base_verdict("minmod", r_grid);
  const double k_const = minmod_constant();
  v.params["K"] = k_const;
  std::vector<double> r = r_grid.points();
  std::vector<PointCheck> checks = parallel_map(r.size(), jobs, [&](std::size_t i) {
    double log_max = f.max_modulus(r[i]).log_value;
    ModulusResult mn = f.min_modulus(r[i]);
    TowerReal lhs = td((1.0 - k_const / std::log(r[i])) * log_max);
    if (mn.zero) return PointCheck{r[i], lhs, lhs, false, 0.0};
    return make_check(r[i], lhs, td(mn.log_value));
  });
  finish_pointwise(v, checks, r_grid.coordinate);
  // smallest grid radius from which every later point holds
  std::size_t from = checks.size();
  while (from > 0 && !checks[from - 1].violated) --from;
  if (from < checks.size()) v.results["holds_from"] = r[from];
  return v;
}

double beurling_constant() { return std::numbers::pi / (4.0 * std::numbers::sqrt2); }

BeurlingReport beurling_check(const EntireFunction& f, double r1, double r2, double mu,
                              std::size_t samples, unsigned jobs) {
  require(r1 >= 0.0 && r2 > r1 && std::isfinite(r2), "beurling: needs 0 <= r1 < r2");
  require(mu > 0.0, "beurling: needs mu > 0");
  require(samples >= 2, "beurling: needs >= 2 samples");
  BeurlingReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.mu = mu;
  const double log_mu = std::log(mu);
  double log_m2 = f.max_modulus(r2).log_value;
  require(log_mu < log_m2, "beurling: needs mu < M(r2)");
  double log_m1 = r1 > 0.0 ? f.max_modulus(r1).log_value : f.log_abs(Complex(0.0, 0.0));

  double lo = r1 > 0.0 ? r1 : r2 * 1e-12;
  Grid grid{lo, r2, samples, true, "r"};
  std::vector<double> pts = grid.points();
  std::vector<int> in_e = parallel_map(pts.size(), jobs, [&](std::size_t i) {
    ModulusResult m = f.min_modulus(pts[i]);
    return (m.zero || m.log_value <= log_mu) ? 1 : 0;
  });
  bool open = false;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    bool cell = in_e[i] && in_e[i + 1];
    if (cell) {
      rep.log_measure += std::log(pts[i + 1] / pts[i]);
      if (!open) ++rep.components;
    }
    open = cell;
  }
  const double c = beurling_constant();
  rep.lhs = log_m2 - log_mu;
  rep.rhs = c * std::exp(0.5 * rep.log_measure) * (log_m1 - log_mu);
  rep.trivial = log_mu >= log_m1;
  rep.confirmed = rep.lhs > rep.rhs;
  return rep;
}

double fr_threshold(double k, double alpha, double beta) {
  require(0.0 < alpha && alpha < beta && beta < 1.0 && k > 1.0,
          "F_r: needs 0 < alpha < beta < 1 < k");
  return 2.0 * std::log((k - alpha) / (beurling_constant() * (beta - alpha)));
}

double fr_log_measure(const EntireFunction& f, double r, double k, double alpha,
                      std::size_t samples) {
  require(r > 0.0 && k > 1.0, "F_r: needs r > 0 and k > 1");
  require(samples >= 2, "F_r: needs >= 2 samples");
  double rk = std::pow(r, k);
  if (!std::isfinite(rk)) throw EvaluatorRefusal("F_r: r^k beyond double range");
  TowerReal log_mu = scale(f.log_max_modulus(td(k * std::log(r))), alpha / k);
  Grid grid{r, rk, samples, true, "r"};
  std::vector<double> pts = grid.points();
  std::vector<int> in_f(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ModulusResult m = f.min_modulus(pts[i]);
    in_f[i] = (m.zero || !(td(m.log_value) > log_mu)) ? 1 : 0;
  }
  double measure = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (in_f[i] && in_f[i + 1]) measure += std::log(pts[i + 1] / pts[i]);
  }
  return measure;
}

RegularityVerdict check_Fr_criterion(const EntireFunction& f, double k, double alpha, double beta,
                                     const Grid& r_grid, unsigned jobs) {
  double threshold = fr_threshold(k, alpha, beta);
  RegularityVerdict v = base_verdict("fr", r_grid);
  v.params["k"] = k;
  v.params["alpha"] = alpha;
  v.params["beta"] = beta;
  v.results["threshold"] = threshold;
  std::vector<double> r = r_grid.points();
  std::vector<PointCheck> checks = parallel_map(r.size(), jobs, [&](std::size_t i) {
    return make_check(r[i], td(fr_log_measure(f, r[i], k, alpha)), td(threshold));
  });
  finish_pointwise(v, checks, r_grid.coordinate);
  return v;
}

CascadeConstants cascade_constants(double r, double k, double d) {
  require(r > 1.0 && k > 1.0, "cascade: needs r > 1 and k > 1");
  CascadeConstants c;
  c.r = r;
  c.k = k;
  const double log_r = std::log(r);
  c.delta = minmod_constant() / (k * log_r);
  require(c.delta < 1.0, "cascade: delta(r^k) >= 1, r too small");
  c.lambda = 16.0 / ((1.0 - c.delta) * (1.0 - c.delta));
  require(std::log(c.lambda) < (k - 1.0) * log_r, "cascade: lambda >= r^(k-1), r too small");
  c.a = 1.0 - 1.0 / (4.0 * beurling_constant());
  c.n = static_cast<long>(std::floor((k - 1.0) * log_r / std::log(c.lambda)));
  const double log_half_lambda = std::log(4.0 / (1.0 - c.delta));
  c.p = -std::log1p(-c.a * c.delta) / log_half_lambda;
  c.p_lower = c.a * c.delta / log_half_lambda;
  if (d > 0.0) {
    require(d > 1.0, "cascade: d must exceed 1");
    const double nn = static_cast<double>(c.n);
    c.has_d = true;
    c.d = d;
    c.suff_lhs = (nn / (nn + 1.0)) * (2.0 * c.a * minmod_constant() / (4.0 * log_half_lambda));
    c.suff_rhs = (k / (k - 1.0)) * std::log(k * d);
  }
  return c;
}

CascadeCheck cascade_check(const EntireFunction& f, double r, double k) {
  CascadeCheck out;
  out.constants = cascade_constants(r, k);
  const auto& c = out.constants;
  double log_m_r = f.max_modulus(r).log_value;
  require(log_m_r > 0.0, "cascade check: needs M(r) > 1");
  TowerReal log_m_rk = f.log_max_modulus(td(k * std::log(r)));
  const double nn = static_cast<double>(c.n);
  out.lhs = log_m_rk.log_value();
  out.rhs = c.p * nn / (nn + 1.0) * 0.5 * (k - 1.0) * std::log(r) + std::log(log_m_r);
  out.holds = out.lhs > out.rhs;
  return out;
}

DoublingStats doubling_stats(const EntireFunction& f, const std::vector<double>& r_grid) {
  require(!r_grid.empty(), "doubling: empty grid");
  DoublingStats s;
  s.inf_ratio = kInf;
  s.sup_ratio = -kInf;
  for (std::size_t i = r_grid.size() / 2; i < r_grid.size(); ++i) {
    double r = r_grid[i];
    require(r > 0.0, "doubling: grid must be positive");
    double l1 = f.max_modulus(r).log_value;
    if (!(l1 > 0.0)) {
      ++s.skipped;
      continue;
    }
    double ratio = f.max_modulus(2.0 * r).log_value / l1;
    s.inf_ratio = std::min(s.inf_ratio, ratio);
    s.sup_ratio = std::max(s.sup_ratio, ratio);
    ++s.used;
  }
  require(s.used > 0, "doubling: no usable grid point");
  return s;
}

}  // namespace qfast
