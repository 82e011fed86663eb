#include "qfast/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qfast/errors.hpp"

namespace qfast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(e^x - 1) for x > 0.
double log_expm1(double x) {
  if (x > 30.0) return x + std::log(-std::expm1(-x));
  return std::log(std::expm1(x));
}

double softplus(double x) {
  if (x > 40.0) return x;
  return std::log1p(std::exp(x));
}

}  // namespace

std::string to_string(Provenance p) {
  return p == Provenance::derived_from_function ? "derived-from-function" : "synthetic-model";
}

std::string to_string(MapKind m) {
  switch (m) {
    case MapKind::phi:
      return "phi";
    case MapKind::psi_eps:
      return "psi_eps";
    case MapKind::eps_shift:
      return "eps_shift";
  }
  return "?";
}

PowerModel::PowerModel(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw PreconditionError("power model: exponent must be positive");
}

std::string PowerModel::name() const {
  std::ostringstream s;
  s << "t^" << p_;
  return s.str();
}

TowerReal PowerModel::phi(const TowerReal& t) const {
  if (t.height() == 0 && t.base() < 0.0) throw DomainError("power model: t must be >= 0");
  if (p_ == 1.0) return t;
  return scale_pow(t, p_);
}

PiecewiseLinearModel::PiecewiseLinearModel(std::string name, std::vector<TowerReal> knots,
                                           std::vector<TowerReal> values)
    : name_(std::move(name)), knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw PreconditionError("piecewise model: needs >= 2 knots with matching values");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1]) || !(values_[i] > values_[i - 1])) {
      throw PreconditionError("piecewise model: knots and values must increase");
    }
  }
}

TowerReal interpolate_linear(const TowerReal& x0, const TowerReal& y0, const TowerReal& x1,
                             const TowerReal& y1, const TowerReal& t) {
  if (t == x0) return y0;
  if (t == x1) return y1;
  bool small = x0.fits_double() && x1.fits_double() && y0.fits_double() && y1.fits_double() &&
               t.fits_double();
  if (small) {
    double a = x0.to_double();
    double b = x1.to_double();
    double fa = y0.to_double();
    double fb = y1.to_double();
    double v = fa + (fb - fa) * ((t.to_double() - a) / (b - a));
    if (std::isfinite(v)) return TowerReal::from_double(v);
  }
  // y0 * (1 + lambda * (y1/y0 - 1)) with lambda = (t - x0) / (x1 - x0)
  double d = log_ratio(t, x0);
  double big_d = log_ratio(x1, x0);
  double g = log_ratio(y1, y0);
  double log_lambda = log_expm1(d) - log_expm1(big_d);
  return scale_log(y0, softplus(log_lambda + log_expm1(g)));
}

TowerReal PiecewiseLinearModel::phi(const TowerReal& t) const {
  if (t > knots_.back()) throw EvaluatorRefusal(name_ + ": argument beyond last knot");
  if (t <= knots_.front()) {
    double a = knots_[0].to_double();
    double b = knots_[1].to_double();
    double fa = values_[0].to_double();
    double fb = values_[1].to_double();
    double slope = (fb - fa) / (b - a);
    return TowerReal::from_double(fa + slope * (t.to_double() - a));
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (*it == t) return values_[i];
  return interpolate_linear(knots_[i - 1], values_[i - 1], knots_[i], values_[i], t);
}

TowerReal apply_map(const GrowthModel& g, MapKind map, double eps, const TowerReal& t) {
  TowerReal v = g.phi(t);
  switch (map) {
    case MapKind::phi:
      return v;
    case MapKind::psi_eps:
      return scale(v, eps);
    case MapKind::eps_shift:
      return shift(v, std::log(eps));
  }
  return v;
}

OrbitSequence iterate_map(const GrowthModel& g, MapKind map, double eps, const TowerReal& t0,
                          std::size_t n) {
  if (map != MapKind::phi && !(eps > 0.0 && eps < 1.0)) {
    throw PreconditionError("iterate_map: epsilon must lie in (0, 1)");
  }
  OrbitSequence orbit;
  orbit.start = t0;
  orbit.map = map;
  orbit.epsilon = map == MapKind::phi ? 1.0 : eps;
  orbit.values.reserve(n + 1);
  orbit.values.push_back(t0);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      orbit.values.push_back(apply_map(g, map, eps, orbit.values.back()));
    } catch (const EvaluatorRefusal& e) {
      orbit.truncated = true;
      orbit.note = e.what();
      break;
    } catch (const DomainError& e) {
      orbit.truncated = true;
      orbit.note = e.what();
      break;
    }
  }
  return orbit;
}

namespace {

// eps phi(t) > t and the forward slope of eps phi exceeds 1. Throws what the
// evaluator throws.
bool expands(const GrowthModel& g, double eps, double t) {
  TowerReal tt = TowerReal::from_double(t);
  double h = 1e-6 * std::max(1.0, std::abs(t));
  TowerReal v = scale(g.phi(tt), eps);
  TowerReal v_next = scale(g.phi(TowerReal::from_double(t + h)), eps);
  if (compare_resolved(v, tt) != Resolved::greater) return false;
  return difference(v_next, v) / h > 1.0;
}

}  // namespace

double threshold_R_eps(const GrowthModel& g, double eps, const ThresholdWindow& w) {
  if (!(w.hi > w.lo) || w.probes < 2) throw PreconditionError("threshold_R: bad window");
  if (!(eps > 0.0 && eps <= 1.0)) throw PreconditionError("threshold_R: eps must lie in (0, 1]");
  const double span = std::log(w.hi - w.lo + 1.0);
  for (std::size_t i = 0; i < w.probes; ++i) {
    double u = span * static_cast<double>(i) / static_cast<double>(w.probes - 1);
    double t = w.lo + std::expm1(u);
    if (i + 1 == w.probes) t = w.hi;
    try {
      if (expands(g, eps, t)) return t;
    } catch (const DomainError&) {
      continue;
    } catch (const EvaluatorRefusal&) {
      break;
    }
  }
  throw PreconditionError(g.name() + ": no threshold with eps phi(t) > t found in window");
}

double threshold_R(const GrowthModel& g, const ThresholdWindow& w) { return threshold_R_eps(g, 1.0, w); }

bool psi_expands_at(const GrowthModel& g, double eps, double t) {
  try {
    return expands(g, eps, t);
  } catch (const DomainError&) {
    return false;
  } catch (const EvaluatorRefusal&) {
    return false;
  }
}

OrderEstimate order_estimates(const EntireFunction& f, const std::vector<double>& r_grid) {
  if (r_grid.size() < 10) throw PreconditionError("order_estimates: needs >= 10 grid points");
  OrderEstimate out;
  out.rho_hat = -kInf;
  out.lambda_hat = kInf;
  for (std::size_t i = r_grid.size() / 2; i < r_grid.size(); ++i) {
    double r = r_grid[i];
    if (!(r > 1.0)) {
      ++out.skipped;
      continue;
    }
    double log_m = f.max_modulus(r).log_value;
    if (!(log_m > 0.0)) {
      ++out.skipped;
      continue;
    }
    double v = std::log(log_m) / std::log(r);
    out.rho_hat = std::max(out.rho_hat, v);
    out.lambda_hat = std::min(out.lambda_hat, v);
    ++out.used;
  }
  if (out.used == 0) throw PreconditionError("order_estimates: no usable grid point");
  return out;
}

}  // namespace qfast
