#include <algorithm>
#include <cmath>
#include <string>

#include "qfast/constructions.hpp"
#include "qfast/errors.hpp"

namespace qfast {

namespace {

std::vector<TowerReal> model_knots(const std::vector<TowerReal>& t) {
  std::vector<TowerReal> k{TowerReal()};
  k.insert(k.end(), t.begin(), t.end() - 1);
  return k;
}

std::vector<TowerReal> model_values(const std::vector<TowerReal>& t) {
  std::vector<TowerReal> v{TowerReal()};
  v.insert(v.end(), t.begin() + 1, t.end());
  return v;
}

bool at_least(const TowerReal& a, const TowerReal& b) {
  return compare_resolved(a, b) != Resolved::less;
}

}  // namespace

Example62Model::Example62Model(double a, double b, std::vector<TowerReal> t)
    : PiecewiseLinearModel("e62model", model_knots(t), model_values(t)), a_(a), b_(b),
      t_(std::move(t)) {}

Example62Model build_example62(double a, double b, std::size_t count) {
  if (!(a > 0.0 && a < b && b < 1.0)) throw DomainError("build_example62: need 0 < a < b < 1");
  if (count < 4) throw DomainError("build_example62: need at least 4 knots");
  const double c = (a + b) / 2;
  std::vector<TowerReal> t;
  t.reserve(count + 1);
  double tn = 1.0;
  double q = 2.0;
  double log_t = 0.0;
  double log_q = std::log(2.0);
  bool in_double = true;
  for (std::size_t n = 0; n <= count; ++n) {
    if (in_double) {
      t.push_back(TowerReal::from_double(tn));
      double next = tn * q;
      if (std::isfinite(next) && std::isfinite(q / c)) {
        tn = next;
        q /= c;
        continue;
      }
      in_double = false;
      log_t = std::log(tn) + std::log(q);
      log_q = std::log(q) - std::log(c);
      continue;
    }
    if (!std::isfinite(log_t)) throw DomainError("build_example62: knots beyond range");
    t.push_back(TowerReal::from_log(log_t));
    log_t += log_q;
    log_q -= std::log(c);
  }
  return Example62Model(a, b, std::move(t));
}

ConstructionReport verify_example62(const Example62Model& model, std::size_t lags,
                                    std::size_t horizon) {
  const auto& t = model.sequence();
  const std::size_t K = t.size() - 1;
  const double a = model.a();
  const double b = model.b();
  const double c = model.c();

  ConstructionReport rep;
  rep.construction = "e62model";
  rep.params = {{"a", a},         {"b", b},         {"c", c},
                {"alpha", model.alpha()}, {"beta", model.beta()}, {"L", double(lags)},
                {"N", double(horizon)},   {"knots", double(K + 1)}};

  {
    CheckLine line{"ratio_recurrence"};
    double worst = 0.0;
    for (std::size_t n = 0; n + 2 <= K; ++n) {
      double lhs = log_ratio(t[n + 2], t[n + 1]);
      double rhs = log_ratio(t[n + 1], t[n]) - std::log(c);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    line.values["max_rel_error"] = worst;
    line.passed = worst <= 1e-12;
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"knot_values"};
    std::size_t bad = 0;
    for (std::size_t n = 0; n < K; ++n) {
      if (!(model.phi(t[n]) == t[n + 1])) ++bad;
    }
    line.values["mismatches"] = double(bad);
    line.values["phi_at_zero"] = model.phi_at(0.0).to_double();
    line.passed = bad == 0 && model.phi_at(0.0) == TowerReal();
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"segment_bounds"};
    std::size_t samples = 0;
    std::size_t bad = 0;
    double worst_lower = INFINITY;
    double worst_upper = INFINITY;
    for (std::size_t n = 0; n + 2 <= K && t[n + 2].fits_double(); ++n) {
      double tn = t[n].to_double();
      double tn1 = t[n + 1].to_double();
      for (int i = 0; i <= 16; ++i) {
        double lam = i / 16.0;
        double x = (1 - lam) * tn + lam * tn1;
        double phi = model.phi_at(x).to_double();
        for (double s : {model.alpha(), model.beta()}) {
          double ratio = s * phi / tn1;
          double upper = (s / c) * (x / tn);
          double lower = upper - (1 - c) / c;
          double tol = 1e-12 * std::max(1.0, upper);
          worst_lower = std::min(worst_lower, ratio - lower);
          worst_upper = std::min(worst_upper, upper - ratio);
          if (ratio < lower - tol || ratio > upper + tol) ++bad;
          ++samples;
        }
      }
    }
    line.values["samples"] = double(samples);
    line.values["violations"] = double(bad);
    line.values["min_lower_margin"] = worst_lower;
    line.values["min_upper_margin"] = worst_upper;
    line.passed = bad == 0 && samples > 0;
    rep.checks.push_back(line);
  }

  const double window_ratio = 4 * (1 - c) / (b - c);
  std::optional<std::size_t> big_n;
  for (std::size_t n = 0; n < K; ++n) {
    if (log_ratio(t[n + 1], t[n]) > std::log(window_ratio)) {
      big_n = n;
      break;
    }
  }
  CheckLine window{"start_window"};
  window.values["threshold"] = window_ratio;
  window.passed = big_n.has_value();
  if (!big_n) {
    window.detail = "no knot ratio exceeds the threshold";
    rep.checks.push_back(window);
    return rep;
  }
  const std::size_t N = *big_n;
  const TowerReal lo = scale(t[N], window_ratio);
  const TowerReal hi = t[N + 1];
  window.values["N"] = double(N);
  window.values["ratio"] = std::exp(log_ratio(t[N + 1], t[N]));
  window.values["lo"] = lo.to_double();
  window.values["hi"] = hi.to_double();
  rep.checks.push_back(window);

  if (!lo.fits_double()) throw DomainError("verify_example62: start window beyond range");
  const double t_window = lo.to_double();

  {
    RegularityVerdict v = check_eps_regularity(model, b, t_window, lags, horizon);
    CheckLine line{"b_regular_from_window"};
    line.values["eps"] = b;
    line.values["t_R"] = t_window;
    line.passed = v.status == VerdictStatus::consistent_to_horizon;
    line.detail = to_string(v.status);
    rep.checks.push_back(line);
    rep.verdicts.push_back(std::move(v));
  }

  {
    // Start of the eps = a run: first knot t_n past which a Phi(t) > t,
    // i.e. a t_{n+1} > t_n with the segment slope of a Phi above 1.
    std::optional<std::size_t> start;
    for (std::size_t n = 0; n + 2 <= K && t[n + 2].fits_double(); ++n) {
      double tn = t[n].to_double();
      double tn1 = t[n + 1].to_double();
      double tn2 = t[n + 2].to_double();
      if (a * tn1 > tn && a * (tn2 - tn1) / (tn1 - tn) > 1.0) {
        start = n;
        break;
      }
    }
    CheckLine line{"a_not_regular"};
    line.values["eps"] = a;
    if (!start) {
      line.passed = false;
      line.detail = "no admissible start knot";
    } else {
      double t_start = t[*start].to_double();
      RegularityVerdict v = check_eps_regularity(model, a, t_start, lags, horizon);
      line.values["t_R"] = t_start;
      line.passed = v.status == VerdictStatus::violation_all_lags;
      line.detail = to_string(v.status);
      if (v.status == VerdictStatus::inconclusive) {
        line.detail += ": horizon too small to exhibit the drop for every lag";
      }
      rep.verdicts.push_back(std::move(v));
    }
    rep.checks.push_back(line);

    RegularityVerdict from_window = check_eps_regularity(model, a, t_window, lags, horizon);
    for (const auto& [key, value] : from_window.results) rep.data["a_from_window_" + key] = value;
    rep.notes.push_back("eps = a from the start window: " + to_string(from_window.status));
    rep.verdicts.push_back(std::move(from_window));
  }

  {
    CheckLine line{"psi_beta_descent"};
    std::size_t compared = 0;
    std::size_t bad = 0;
    for (int i = 0; i <= 8; ++i) {
      double x = t_window + (hi.to_double() - t_window) * i / 8.0;
      TowerReal u = TowerReal::from_double(x);
      for (std::size_t n = 1; n <= horizon && N + n < K; ++n) {
        u = scale(model.phi(u), model.beta());
        ++compared;
        if (!at_least(u, t[N + n])) ++bad;
      }
    }
    line.values["compared"] = double(compared);
    line.values["violations"] = double(bad);
    line.passed = bad == 0 && compared > 0;
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"phi_orbit_on_knots"};
    std::size_t bad = 0;
    std::size_t steps = 0;
    TowerReal u = t[N];
    for (std::size_t n = 1; n <= horizon && N + n <= K; ++n) {
      u = model.phi(u);
      ++steps;
      bool inside = u > t[N + n - 1] && u <= t[N + n];
      if (!(u == t[N + n]) || !inside) ++bad;
    }
    line.values["steps"] = double(steps);
    line.values["mismatches"] = double(bad);
    line.passed = bad == 0 && steps > 0;
    rep.checks.push_back(line);
  }

  // First k with (a Phi)^k(t) <= t_{N+k-l} from the start window.
  for (std::size_t l = 0; l <= lags; ++l) {
    double found = -1.0;
    TowerReal u = lo;
    for (std::size_t k = 1; k <= horizon; ++k) {
      try {
        u = scale(model.phi(u), a);
      } catch (const EvaluatorRefusal&) {
        break;
      }
      if (N + k < l) continue;
      std::size_t idx = N + k - l;
      if (idx > K) break;
      if (compare_resolved(u, t[idx]) != Resolved::greater) {
        found = double(k);
        break;
      }
    }
    rep.data["drop_k_lag_" + std::to_string(l)] = found;
  }
  return rep;
}

}  // namespace qfast
