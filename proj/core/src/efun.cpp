#include "qfast/efun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qfast/errors.hpp"

namespace qfast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kCircleSamples = 1024;
constexpr double kAngleTolerance = 1e-12;
// Zeros beyond 2^20 |z| are folded into the tail bound.
constexpr double kTruncationLog = 20.0 * std::numbers::ln2;
// softplus(x) = x to double precision once x exceeds this.
constexpr double kSoftplusLinear = 40.0;
constexpr double kMaxLacunaryT = 1e100;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double softplus(double x) {
  if (x > kSoftplusLinear) return x;
  return std::log1p(std::exp(x));
}

// log |1 - w|
double log_abs_one_minus(Complex w) {
  double a = std::abs(w);
  if (a < 0.5) return 0.5 * std::log1p(a * a - 2.0 * w.real());
  Complex d = 1.0 - w;
  return std::log(std::abs(d));
}

struct LogValue {
  double value;
  double err;
};

LogValue lacunary_log_abs(const LacunaryProduct& p, Complex z) {
  double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  double log_r = std::log(r);
  double acc = 0.0;
  std::size_t m = 1;
  for (; m <= p.zeros.size(); ++m) {
    acc += log_abs_one_minus(z / p.zeros[m - 1]);
  }
  if (!p.infinite()) return {acc, 0.0};
  double log_q = std::log(p.continuation_ratio);
  double log_rk = std::log(p.zeros.back());
  for (;;) {
    log_rk += log_q;
    if (log_rk > log_r + kTruncationLog) break;
    acc += log_abs_one_minus(z / std::exp(log_rk));
  }
  double tail = (4.0 / 3.0) * std::exp(log_r - log_rk);
  return {acc, tail / (1.0 - tail)};
}

// log M(e^t) for the product, maximum attained at z = -e^t.
LogValue lacunary_phi(const LacunaryProduct& p, double t) {
  if (!(t <= kMaxLacunaryT)) {
    throw EvaluatorRefusal("lacunary product: log-radius beyond evaluable range");
  }
  double acc = 0.0;
  for (double r : p.zeros) acc += softplus(t - std::log(r));
  if (!p.infinite()) return {acc, 0.0};
  double log_q = std::log(p.continuation_ratio);
  double last = std::log(p.zeros.back());
  // zeros L_j = last + j log q, j >= 1. Terms with t - L_j > kSoftplusLinear
  // are linear and sum in closed form.
  double span = t - last - kSoftplusLinear;
  double j_lin = span > 0.0 ? std::floor(span / log_q) : 0.0;
  double lin_err = 0.0;
  if (j_lin > 0.0) {
    acc += j_lin * (t - last) - log_q * j_lin * (j_lin + 1.0) / 2.0;
    lin_err = std::exp(-kSoftplusLinear) / (1.0 - 1.0 / p.continuation_ratio);
  }
  double log_rk = last + j_lin * log_q;
  for (;;) {
    log_rk += log_q;
    if (log_rk > t + kTruncationLog) break;
    acc += softplus(t - log_rk);
  }
  double tail = (4.0 / 3.0) * std::exp(t - log_rk);
  return {acc, tail / (1.0 - tail) + lin_err};
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

LogValue series_log_abs(const TruncatedSeries& s, Complex z) {
  double tb = s.tail_bound(std::abs(z));
  if (!std::isfinite(tb)) {
    throw EvaluatorRefusal("truncated series: radius outside validity range");
  }
  double v = std::abs(horner(s.coeffs, z));
  if (!std::isfinite(v)) throw EvaluatorRefusal("truncated series: overflow");
  if (tb > s.tolerance * v) {
    throw EvaluatorRefusal("truncated series: tail bound exceeds tolerance");
  }
  return {std::log(v), tb / v};
}

LogValue log_abs_with_err(const EntireFunction::Representation& rep, Complex z) {
  return std::visit(
      overloaded{
          [&](const ExpFamily& e) { return LogValue{std::log(e.lambda) + z.real(), 0.0}; },
          [&](const LacunaryProduct& p) { return lacunary_log_abs(p, z); },
          [&](const TruncatedSeries& s) { return series_log_abs(s, z); },
      },
      rep);
}

ModulusResult sample_extreme(const EntireFunction::Representation& rep, double r,
                             bool maximize) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("modulus: radius must be positive");
  const double sign = maximize ? 1.0 : -1.0;
  const double h = kTwoPi / static_cast<double>(kCircleSamples);
  double tail_err = 0.0;
  auto g = [&](double theta) {
    LogValue lv = log_abs_with_err(rep, std::polar(r, theta));
    tail_err = std::max(tail_err, lv.err);
    return lv.value;
  };
  std::vector<double> vals(kCircleSamples);
  for (std::size_t i = 0; i < kCircleSamples; ++i) {
    vals[i] = g(h * static_cast<double>(i));
    if (!maximize && vals[i] == -kInf) {
      return ModulusResult{-kInf, true, 0.0, ModulusMethod::circle_sample};
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < kCircleSamples; ++i) {
    if (sign * vals[i] > sign * vals[best]) best = i;
  }
  auto at = [&](std::size_t i) { return vals[i % kCircleSamples]; };
  double second = 0.0;
  for (std::size_t i = 0; i < kCircleSamples; ++i) {
    double d2 = std::abs(at(i + 1) - 2.0 * at(i) + at(i + kCircleSamples - 1));
    if (std::isfinite(d2)) second = std::max(second, d2);
  }

  // golden-section search on sign * g over the bracket around the best sample
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = h * (static_cast<double>(best) - 1.0);
  double b = h * (static_cast<double>(best) + 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = sign * g(c);
  double gd = sign * g(d);
  while (b - a > kAngleTolerance) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = sign * g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = sign * g(d);
    }
  }
  double refined = std::max(gc, gd);
  double extreme = std::max(sign * vals[best], refined);
  if (!maximize && -extreme == -kInf) {
    return ModulusResult{-kInf, true, 0.0, ModulusMethod::circle_sample};
  }

  // A competing local extremum in another bracket can hide a better value
  // by at most second / 8.
  double err = tail_err + second / (h * h) * kAngleTolerance * kAngleTolerance;
  double slack = second / 8.0;
  for (std::size_t i = 0; i < kCircleSamples; ++i) {
    if (i == best) continue;
    double v = sign * at(i);
    bool local = v >= sign * at(i + 1) && v >= sign * at(i + kCircleSamples - 1);
    if (local && v + slack > extreme) err = std::max(err, v + slack - extreme);
  }
  return ModulusResult{sign * extreme, false, err, ModulusMethod::circle_sample};
}

}  // namespace

void LacunaryProduct::validate() const {
  if (zeros.empty()) throw PreconditionError("lacunary product: no zeros");
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (!(zeros[i] > 0.0) || !std::isfinite(zeros[i])) {
      throw PreconditionError("lacunary product: zeros must be positive and finite");
    }
    if (i > 0 && !(zeros[i] > 4.0 * zeros[i - 1])) {
      throw PreconditionError("lacunary product: requires r_{m+1} > 4 r_m");
    }
  }
  if (continuation_ratio != 0.0 && !(continuation_ratio > 4.0)) {
    throw PreconditionError("lacunary product: continuation ratio must exceed 4");
  }
}

double LacunaryProduct::log_zero(std::size_t m) const {
  if (m == 0) throw DomainError("log_zero: index is 1-based");
  if (m <= zeros.size()) return std::log(zeros[m - 1]);
  if (!infinite()) return kInf;
  return std::log(zeros.back()) +
         static_cast<double>(m - zeros.size()) * std::log(continuation_ratio);
}

double TruncatedSeries::tail_bound(double r) const {
  const double n = static_cast<double>(coeffs.size());
  switch (tail) {
    case TailKind::none:
      return 0.0;
    case TailKind::geometric: {
      if (!(r < tail_rho)) return kInf;
      double x = r / tail_rho;
      return tail_a * std::pow(x, n) / (1.0 - x);
    }
    case TailKind::factorial: {
      if (!(r < n + 1.0)) return kInf;
      if (r == 0.0) return 0.0;
      double log_term = std::log(tail_a) + n * std::log(r) - std::lgamma(n + 1.0);
      return std::exp(log_term) / (1.0 - r / (n + 1.0));
    }
  }
  return kInf;
}

bool TruncatedSeries::nonnegative_real_coefficients() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](Complex c) { return c.imag() == 0.0 && c.real() >= 0.0; });
}

std::string to_string(ModulusMethod m) {
  switch (m) {
    case ModulusMethod::closed_form:
      return "closed-form";
    case ModulusMethod::circle_sample:
      return "circle-sample";
    case ModulusMethod::product_partial:
      return "product-partial";
  }
  return "?";
}

TowerReal ModulusResult::value() const {
  if (zero) return TowerReal{};
  return TowerReal::from_log(log_value);
}

EntireFunction::EntireFunction(std::string name, Representation rep)
    : name_(std::move(name)), rep_(std::move(rep)) {
  std::visit(overloaded{
                 [](const ExpFamily& e) {
                   if (!(e.lambda > 0.0) || !std::isfinite(e.lambda)) {
                     throw PreconditionError("exp family: lambda must be positive");
                   }
                 },
                 [](const LacunaryProduct& p) { p.validate(); },
                 [](const TruncatedSeries& s) {
                   if (s.coeffs.empty()) throw PreconditionError("series: no coefficients");
                 },
             },
             rep_);
}

EntireFunction EntireFunction::exp(double lambda) {
  return EntireFunction(lambda == 1.0 ? "exp" : "exp-family", ExpFamily{lambda});
}

EntireFunction EntireFunction::lacunary5() {
  LacunaryProduct p;
  double r = 1.0;
  for (int m = 1; m <= 20; ++m) {
    r *= 5.0;
    p.zeros.push_back(r);
  }
  p.continuation_ratio = 5.0;
  return EntireFunction("lacunary5", std::move(p));
}

EntireFunction EntireFunction::series(std::string name, TruncatedSeries s) {
  return EntireFunction(std::move(name), std::move(s));
}

std::string EntireFunction::variant_name() const {
  return std::visit(overloaded{
                        [](const ExpFamily&) { return std::string("exp"); },
                        [](const LacunaryProduct&) { return std::string("lacunary"); },
                        [](const TruncatedSeries&) { return std::string("series"); },
                    },
                    rep_);
}

Complex EntireFunction::evaluate(Complex z) const {
  return std::visit(
      overloaded{
          [&](const ExpFamily& e) { return e.lambda * std::exp(z); },
          [&](const LacunaryProduct& p) {
            double log_abs = lacunary_log_abs(p, z).value;
            if (log_abs == -kInf) return Complex(0.0, 0.0);
            // argument sum over the factors that matter at double precision
            double arg = 0.0;
            double log_r = std::log(std::abs(z));
            for (std::size_t m = 1;; ++m) {
              double lz = p.log_zero(m);
              if (lz > log_r + kTruncationLog) break;
              arg += std::arg(1.0 - z / std::exp(lz));
            }
            return std::polar(std::exp(log_abs), arg);
          },
          [&](const TruncatedSeries& s) {
            series_log_abs(s, z);
            return horner(s.coeffs, z);
          },
      },
      rep_);
}

double EntireFunction::log_abs(Complex z) const {
  return log_abs_with_err(rep_, z).value;
}

ModulusResult EntireFunction::max_modulus(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("max_modulus: radius must be positive");
  return std::visit(
      overloaded{
          [&](const ExpFamily& e) {
            return ModulusResult{std::log(e.lambda) + r, false, 0.0, ModulusMethod::closed_form};
          },
          [&](const LacunaryProduct& p) {
            LogValue lv = lacunary_phi(p, std::log(r));
            return ModulusResult{lv.value, false, lv.err,
                                 p.infinite() ? ModulusMethod::product_partial
                                              : ModulusMethod::closed_form};
          },
          [&](const TruncatedSeries& s) {
            if (s.nonnegative_real_coefficients()) {
              LogValue lv = series_log_abs(s, Complex(r, 0.0));
              return ModulusResult{lv.value, false, lv.err, ModulusMethod::closed_form};
            }
            return sample_extreme(rep_, r, true);
          },
      },
      rep_);
}

ModulusResult EntireFunction::min_modulus(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("min_modulus: radius must be positive");
  return std::visit(
      overloaded{
          [&](const ExpFamily& e) {
            return ModulusResult{std::log(e.lambda) - r, false, 0.0, ModulusMethod::closed_form};
          },
          [&](const LacunaryProduct& p) {
            LogValue lv = lacunary_log_abs(p, Complex(r, 0.0));
            bool zero = lv.value == -kInf;
            return ModulusResult{lv.value, zero, zero ? 0.0 : lv.err,
                                 p.infinite() ? ModulusMethod::product_partial
                                              : ModulusMethod::closed_form};
          },
          [&](const TruncatedSeries&) { return sample_extreme(rep_, r, false); },
      },
      rep_);
}

ModulusResult EntireFunction::sample_max_modulus(double r) const {
  return sample_extreme(rep_, r, true);
}

ModulusResult EntireFunction::sample_min_modulus(double r) const {
  return sample_extreme(rep_, r, false);
}

TowerReal EntireFunction::log_max_modulus(const TowerReal& t) const {
  return std::visit(
      overloaded{
          [&](const ExpFamily& e) { return shift(apply_exp(t), std::log(e.lambda)); },
          [&](const LacunaryProduct& p) {
            double td = t.to_double();
            if (!std::isfinite(td)) {
              throw EvaluatorRefusal("lacunary product: log-radius beyond evaluable range");
            }
            return TowerReal::from_double(lacunary_phi(p, td).value);
          },
          [&](const TruncatedSeries&) {
            double r = std::exp(t.to_double());
            if (!std::isfinite(r) || r == 0.0) {
              throw EvaluatorRefusal("truncated series: radius beyond evaluable range");
            }
            return TowerReal::from_double(max_modulus(r).log_value);
          },
      },
      rep_);
}

bool EntireFunction::positive_on_reals_is_max() const {
  return std::visit(overloaded{
                        [](const ExpFamily&) { return true; },
                        [](const LacunaryProduct&) { return false; },
                        [](const TruncatedSeries& s) { return s.nonnegative_real_coefficients(); },
                    },
                    rep_);
}

TowerReal EntireFunction::evaluate_positive(const TowerReal& x) const {
  if (!positive_on_reals_is_max()) {
    throw EvaluatorRefusal("tower evaluation needs nonnegative coefficients");
  }
  if (!x.is_positive()) throw DomainError("evaluate_positive: argument must be positive");
  if (const auto* e = std::get_if<ExpFamily>(&rep_)) {
    return scale_log(apply_exp(x), std::log(e->lambda));
  }
  const auto& s = std::get<TruncatedSeries>(rep_);
  double xd = x.to_double();
  if (!std::isfinite(xd)) throw EvaluatorRefusal("truncated series: argument out of range");
  return TowerReal::from_log(series_log_abs(s, Complex(xd, 0.0)).value);
}

double log_window_constant_plus(double q) {
  double acc = 0.0;
  for (int j = 0; j < 200; ++j) acc += std::log1p(0.5 * std::pow(q, -j));
  return acc;
}

double log_window_constant_minus(double q) {
  double acc = 0.0;
  for (int j = 0; j < 200; ++j) acc += std::log1p(-0.5 * std::pow(q, -j));
  return acc;
}

double sandwich_ratio_bound(double min_gap_ratio) {
  if (!(min_gap_ratio > 4.0)) throw PreconditionError("sandwich bound: gap ratio must exceed 4");
  return std::exp(2.0 * (log_window_constant_plus(min_gap_ratio) -
                         log_window_constant_minus(min_gap_ratio)));
}

SandwichReport modulus_sandwich_check(const EntireFunction& f, std::size_t m,
                                      std::size_t samples) {
  const auto* p = std::get_if<LacunaryProduct>(&f.representation());
  if (p == nullptr) throw PreconditionError("sandwich check: needs a lacunary product");
  if (m == 0 || samples == 0) throw PreconditionError("sandwich check: m and samples must be >= 1");
  double log_lo = p->log_zero(m);
  double log_hi = p->log_zero(m + 1);
  if (!std::isfinite(log_hi)) throw PreconditionError("sandwich check: no zero after r_m");
  double r_m = std::exp(log_lo);
  double r_next = std::exp(log_hi);
  if (!(r_next > 4.0 * r_m)) throw PreconditionError("sandwich check: requires r_{m+1} > 4 r_m");
  double lo = 2.0 * r_m;
  double hi = 0.5 * r_next;
  if (!(hi > lo)) throw PreconditionError("sandwich check: empty window");

  double min_gap = p->infinite() ? p->continuation_ratio : kInf;
  for (std::size_t i = 1; i < p->zeros.size(); ++i) {
    min_gap = std::min(min_gap, p->zeros[i] / p->zeros[i - 1]);
  }

  SandwichReport rep;
  rep.m = m;
  rep.window_lo = lo;
  rep.window_hi = hi;
  double log_min = kInf;
  double log_max = -kInf;
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double rho = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / n;
    double log_rho_m = static_cast<double>(m) * std::log(rho);
    for (std::size_t j = 0; j < samples; ++j) {
      double theta = kTwoPi * static_cast<double>(j) / n;
      double lg = f.log_abs(std::polar(rho, theta)) - log_rho_m;
      log_min = std::min(log_min, lg);
      log_max = std::max(log_max, lg);
    }
  }
  rep.min_g = std::exp(log_min);
  rep.max_g = std::exp(log_max);
  rep.ratio = std::exp(log_max - log_min);
  rep.bound = std::isfinite(min_gap) ? sandwich_ratio_bound(min_gap) : kInf;
  rep.within_bound = std::isfinite(rep.ratio) && rep.ratio <= rep.bound;
  return rep;
}

}  // namespace qfast
