#pragma once

// Entire functions with evaluation and maximum/minimum modulus oracles.

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qfast/xreal.hpp"

namespace qfast {

using Complex = std::complex<double>;

/// lambda * e^z.
struct ExpFamily {
  double lambda = 1.0;
};

/// prod_m (1 - z / r_m) over positive zeros with r_{m+1} > 4 r_m.
///
/// `zeros` are the explicit zeros. If `continuation_ratio` is nonzero the
/// sequence continues geometrically, r_{K+j} = r_K * q^j, and is infinite;
/// otherwise the product is the finite polynomial on the explicit zeros.
struct LacunaryProduct {
  std::vector<double> zeros;
  double continuation_ratio = 0.0;

  /// Throws PreconditionError unless zeros are positive with r_{m+1} > 4 r_m
  /// and any continuation ratio exceeds 4.
  void validate() const;

  /// m-th zero, 1-based, including the continuation. log-valued so that the
  /// continuation never overflows.
  double log_zero(std::size_t m) const;
  bool infinite() const { return continuation_ratio > 0.0; }
};

enum class TailKind { none, geometric, factorial };

/// sum_{n <= K} a_n z^n with a certified bound on the neglected tail.
///
/// geometric: |a_n| <= A rho^{-n} for n > K, valid for r < rho.
/// factorial: |a_n| <= A / n! for n > K.
struct TruncatedSeries {
  std::vector<Complex> coeffs;
  TailKind tail = TailKind::none;
  double tail_a = 0.0;
  double tail_rho = 0.0;
  /// Evaluations whose tail bound exceeds tolerance * |value| are refused.
  double tolerance = 1e-8;

  /// Upper bound on |sum_{n > K} a_n z^n| for |z| = r, +inf outside validity.
  double tail_bound(double r) const;
  bool nonnegative_real_coefficients() const;
};

enum class ModulusMethod { closed_form, circle_sample, product_partial };

std::string to_string(ModulusMethod m);

/// A maximum or minimum modulus value held in log form.
///
/// `abs_err_bound` bounds the absolute error of log_value, i.e. the relative
/// error of the modulus itself to first order.
struct ModulusResult {
  double log_value = 0.0;
  bool zero = false;
  double abs_err_bound = 0.0;
  ModulusMethod method = ModulusMethod::closed_form;

  /// The modulus; nullopt-like zero is reported as TowerReal 0.
  TowerReal value() const;
};

class EntireFunction {
 public:
  using Representation = std::variant<ExpFamily, LacunaryProduct, TruncatedSeries>;

  EntireFunction(std::string name, Representation rep);

  static EntireFunction exp(double lambda = 1.0);
  /// Zeros 5^m, m >= 1.
  static EntireFunction lacunary5();
  static EntireFunction series(std::string name, TruncatedSeries s);

  const std::string& name() const { return name_; }
  const Representation& representation() const { return rep_; }
  std::string variant_name() const;

  Complex evaluate(Complex z) const;

  /// log |f(z)|, -inf at a zero. Throws EvaluatorRefusal out of range.
  double log_abs(Complex z) const;

  /// Modulus oracles: closed form where one exists, circle sampling otherwise.
  ModulusResult max_modulus(double r) const;
  ModulusResult min_modulus(double r) const;

  /// Circle sampling for any representation; used to cross-check closed forms.
  ModulusResult sample_max_modulus(double r) const;
  ModulusResult sample_min_modulus(double r) const;

  /// phi(t) = log M(e^t). Tower magnitudes are accepted only by closed forms;
  /// other representations throw EvaluatorRefusal.
  TowerReal log_max_modulus(const TowerReal& t) const;

  /// True when f(x) = M(x) for x > 0 (nonnegative power-series coefficients),
  /// which enables tower-mode orbits.
  bool positive_on_reals_is_max() const;

  /// f(x) for positive TowerReal x, for functions with
  /// positive_on_reals_is_max(). Throws EvaluatorRefusal otherwise.
  TowerReal evaluate_positive(const TowerReal& x) const;

 private:
  std::string name_;
  Representation rep_;
};

/// g(z) = |f(z)| / |z|^m sampled over a window of moduli and angles.
struct SandwichReport {
  std::size_t m = 0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double min_g = 0.0;
  double max_g = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  bool within_bound = false;
};

/// Bound on max g / min g implied by the constants derived for the window
/// estimate, (P+/P-)^2 where P+- = prod_{j>=0} (1 +- q^{-j}/2) and q is the
/// smallest gap ratio r_{k+1}/r_k of the product.
double sandwich_ratio_bound(double min_gap_ratio);

/// P+- for gap ratio q, in log form.
double log_window_constant_plus(double q);
double log_window_constant_minus(double q);

/// Samples `samples` x `samples` points on 2 r_m < |z| < r_{m+1} / 2
/// (midpoint radii, uniform angles). Throws PreconditionError when
/// r_{m+1} <= 4 r_m or the window is empty.
SandwichReport modulus_sandwich_check(const EntireFunction& f, std::size_t m,
                                      std::size_t samples = 64);

}  // namespace qfast
