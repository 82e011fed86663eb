#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfast/constructions.hpp"
#include "qfast/errors.hpp"

namespace qfast {

namespace {

TowerReal mu(const TowerReal& t) { return apply_exp(scale_pow(t, 0.5)); }

// 1/k_n = T^{-1/4}, zero once it underflows.
double inverse_k(const TowerReal& top) {
  TowerReal lt = apply_log(top);
  if (!lt.fits_double()) return 0.0;
  return std::exp(-0.25 * lt.to_double());
}

// log mu'(t) = sqrt t - log 2 - (log t)/2.
TowerReal log_mu_slope(const TowerReal& t) {
  TowerReal sq = scale_pow(t, 0.5);
  TowerReal half_log = scale(apply_log(t), 0.5);
  return difference_positive(sq, shift(half_log, std::numbers::ln2));
}

bool at_least(const TowerReal& a, const TowerReal& b) {
  return compare_resolved(a, b) != Resolved::less;
}

}  // namespace

Example61Model::Example61Model(double t0, std::size_t chords) : t0_(t0) {
  if (!(t0 >= 64.0 / 9.0)) throw DomainError("build_example61: t0 below 64/9");
  if (!(std::exp(0.75 * std::sqrt(t0)) > t0)) {
    throw DomainError("build_example61: exp(3/4 sqrt t0) <= t0");
  }
  if (chords == 0) throw DomainError("build_example61: need at least one chord");
  TowerReal t = TowerReal::from_double(t0);
  for (std::size_t n = 0; n < chords; ++n) {
    TowerReal top = mu(t);
    TowerReal bottom = scale_pow(top, 0.75);
    if (!(bottom > t) || !(top > bottom)) {
      throw EvaluatorRefusal("build_example61: chords no longer resolved at height " +
                             std::to_string(top.height()));
    }
    top_.push_back(top);
    bottom_.push_back(bottom);
    t = top;
  }
}

Example61Model build_example61(double t0, std::size_t chords) { return Example61Model(t0, chords); }

TowerReal Example61Model::log_k(std::size_t n) const { return scale(apply_log(top_.at(n)), 0.25); }

std::vector<TowerReal> Example61Model::knots() const {
  std::vector<TowerReal> k{TowerReal::from_double(t0_)};
  for (std::size_t n = 0; n < top_.size(); ++n) {
    k.push_back(bottom_[n]);
    k.push_back(top_[n]);
  }
  return k;
}

TowerReal Example61Model::log_phi_on_chord(std::size_t n, double s) const {
  if (!(s > 0.0)) throw DomainError("e61model: chord fraction must be positive");
  return log_phi_at_log_fraction(n, std::log(s));
}

TowerReal Example61Model::log_phi_at_log_fraction(std::size_t n, double log_s) const {
  const TowerReal& top = top_.at(n);
  TowerReal sq_top = scale_pow(top, 0.5);
  if (log_s >= 0.0) return sq_top;
  TowerReal lk = log_k(n);
  double lnk = lk.fits_double() ? lk.to_double() : INFINITY;
  TowerReal sq_bottom = scale_pow(bottom_[n], 0.5);
  if (log_s <= -lnk) return sq_bottom;
  // w = (s - 1/k) / (1 - 1/k), the weight of the top endpoint.
  double log_w = log_s + std::log1p(-std::exp(-lnk - log_s)) - std::log1p(-std::exp(-lnk));
  if (!(log_w > -INFINITY)) return sq_bottom;
  if (log_w >= 0.0) return sq_top;
  return log_add(shift(sq_top, log_w), shift(sq_bottom, std::log1p(-std::exp(log_w))));
}

double Example61Model::log_drop_on_chord(std::size_t n, double log_s) const {
  if (log_s >= 0.0) return 0.0;
  TowerReal lk = log_k(n);
  double lnk = lk.fits_double() ? lk.to_double() : INFINITY;
  if (log_s < -lnk) throw DomainError("e61model: fraction below the chord");
  double log_w = log_s + std::log1p(-std::exp(-lnk - log_s)) - std::log1p(-std::exp(-lnk));
  double w = std::exp(log_w);
  double d = difference(scale_pow(bottom_[n], 0.5), scale_pow(top_[n], 0.5));
  return -std::log(w + (1.0 - w) * std::exp(d));
}

TowerReal Example61Model::phi(const TowerReal& t) const {
  if (t.height() == 0 && t.base() < 1.0) {
    const double e = std::numbers::e;
    return TowerReal::from_double(e + 0.5 * e * (t.base() - 1.0));
  }
  if (t > top_.back()) throw EvaluatorRefusal("e61model: argument beyond last chord");
  auto it = std::lower_bound(top_.begin(), top_.end(), t);
  std::size_t n = static_cast<std::size_t>(it - top_.begin());
  if (t == top_[n] || t <= bottom_[n]) return mu(t);
  double ls = log_ratio(t, top_[n]);
  if (!std::isfinite(ls)) throw EvaluatorRefusal("e61model: chord position not resolved");
  return apply_exp(log_phi_at_log_fraction(n, ls));
}

ConstructionReport verify_example61(const Example61Model& model, double k, std::size_t n_lo,
                                    std::size_t n_hi) {
  if (!(k > 1.0)) throw DomainError("verify_example61: need k > 1");
  if (n_lo > n_hi || n_hi >= model.chords()) {
    throw DomainError("verify_example61: chord range outside the built model");
  }
  ConstructionReport rep;
  rep.construction = "e61model";
  rep.params = {{"t0", model.t0()},
                {"k", k},
                {"n_lo", double(n_lo)},
                {"n_hi", double(n_hi)},
                {"chords", double(model.chords())}};

  {
    CheckLine line{"convexity_at_knots"};
    std::size_t compared = 0;
    std::size_t bad = 0;
    std::size_t unresolved = 0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const TowerReal& top = model.chord_top(n);
      const TowerReal& bottom = model.chord_bottom(n);
      try {
        TowerReal sq_top = scale_pow(top, 0.5);
        double d = difference(scale_pow(bottom, 0.5), sq_top);
        TowerReal rise = shift(sq_top, std::log1p(-std::exp(d)));
        TowerReal run = shift(apply_log(top), std::log1p(-inverse_k(top)));
        TowerReal chord = difference_positive(rise, run);
        compared += 2;
        if (!at_least(chord, log_mu_slope(bottom))) ++bad;
        if (!at_least(log_mu_slope(top), chord)) ++bad;
      } catch (const DomainError&) {
        ++unresolved;
      }
    }
    line.values["compared"] = double(compared);
    line.values["violations"] = double(bad);
    line.values["unresolved"] = double(unresolved);
    line.passed = bad == 0 && compared > 0;
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"log_growth_on_chords"};
    std::size_t bad = 0;
    std::size_t chords = 0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const TowerReal& top = model.chord_top(n);
      TowerReal lt = apply_log(top);
      if (!lt.fits_double()) break;
      double log_k = 0.25 * lt.to_double();
      double worst = -INFINITY;
      for (int i = 0; i <= 64; ++i) {
        double ls = -log_k * (1.0 - i / 64.0);
        TowerReal t = scale_log(top, ls);
        worst = std::max(worst, log_ratio(model.log_phi_at_log_fraction(n, ls), t));
      }
      double bound = -0.25 * lt.to_double();
      rep.data["log_max_ratio_chord_" + std::to_string(n)] = worst;
      rep.data["log_bound_chord_" + std::to_string(n)] = bound;
      if (worst > bound + 1e-12 * std::max(1.0, std::abs(bound))) ++bad;
      ++chords;
    }
    line.values["chords"] = double(chords);
    line.values["violations"] = double(bad);
    line.passed = bad == 0 && chords > 0;
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"chord_ratio"};
    std::size_t bad_bound = 0;
    std::size_t bad_limit = 0;
    std::size_t limit_checked = 0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const TowerReal& top = model.chord_top(n);
      double inv_kn = inverse_k(top);
      if (!(1.0 / k > inv_kn)) continue;
      double ratio = std::exp(model.log_drop_on_chord(n, -std::log(k)));
      double closed = (1.0 - inv_kn) / (1.0 / k - inv_kn);
      rep.data["ratio_chord_" + std::to_string(n)] = ratio;
      rep.data["closed_form_chord_" + std::to_string(n)] = closed;
      if (ratio > closed * (1 + 1e-12)) ++bad_bound;
      if (inv_kn < 1.0 / 40.0) {
        ++limit_checked;
        if (std::abs(ratio / k - 1.0) > 0.05) ++bad_limit;
      }
    }
    line.values["above_closed_form"] = double(bad_bound);
    line.values["limit_checked"] = double(limit_checked);
    line.values["outside_5pct"] = double(bad_limit);
    line.passed = bad_bound == 0 && bad_limit == 0 && limit_checked > 0;
    rep.checks.push_back(line);
  }

  {
    CheckLine line{"tail_lower_bound"};
    std::size_t compared = 0;
    std::size_t bad = 0;
    auto test_point = [&](const TowerReal& t) {
      ++compared;
      if (!at_least(apply_log(model.phi(t)), scale_pow(t, 0.25))) ++bad;
    };
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const TowerReal& top = model.chord_top(n);
      const TowerReal& bottom = model.chord_bottom(n);
      TowerReal lk = model.log_k(n);
      double log_k = lk.fits_double() ? lk.to_double() : INFINITY;
      if (!std::isfinite(log_k)) continue;
      for (int i = 0; i <= 16; ++i) {
        double ls = -log_k * (1.0 - i / 16.0);
        ++compared;
        if (!at_least(model.log_phi_at_log_fraction(n, ls), scale_pow(scale_log(top, ls), 0.25))) {
          ++bad;
        }
      }
      TowerReal prev = n == 0 ? TowerReal::from_double(model.t0()) : model.chord_top(n - 1);
      TowerReal lp = apply_log(prev);
      TowerReal lb = apply_log(bottom);
      for (int i = 1; i < 8; ++i) {
        double th = i / 8.0;
        test_point(apply_exp(sum(scale(lp, 1.0 - th), scale(lb, th))));
      }
    }
    line.values["compared"] = double(compared);
    line.values["violations"] = double(bad);
    line.passed = bad == 0 && compared > 0;
    rep.checks.push_back(line);
  }
  return rep;
}

}  // namespace qfast
