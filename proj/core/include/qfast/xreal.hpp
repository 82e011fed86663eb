#pragma once

// Extended-range reals of tower magnitude.
//
// A TowerReal (h, x) denotes exp applied h times to x. Iterated maximum
// modulus sequences M^n(R) leave the double range after a handful of steps;
// in this representation each further application of exp only bumps h.
//
// Normal form, with cap C = 700:
//   h = 0:  x in (-inf, C]
//   h >= 1: x in (log C, C]
// so every normalized value with h >= 1 exceeds C and the order on normalized
// values is lexicographic in (h, x). Every value of height <= 1 fits in a
// double. Bases at height 0 may be negative so that growth models can be
// evaluated on the whole line; the remaining operations expect positives.
//
// Precision contract: a multiplicative perturbation of a height-h value only
// moves its base through an additive term computed at height h-1; for h >= 3
// such perturbations are below the resolution of the base and are absorbed.
// compare_resolved() reports bases within 1e-9 (relative to max(1,|x|)) at
// equal height as indistinguishable.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace qfast {

enum class Resolved { less, indistinguishable, greater };

std::string to_string(Resolved r);

class TowerReal {
 public:
  static constexpr double kCap = 700.0;
  static const double kLogCap;
  static constexpr double kResolution = 1e-9;

  /// Zero at height 0.
  constexpr TowerReal() = default;

  /// Unique normal form of exp^height(base). Throws DomainError when base is
  /// not finite.
  static TowerReal normalize(std::uint32_t height, double base);

  /// As normalize, but additionally rejects denoted values <= 0.
  static TowerReal positive(std::uint32_t height, double base);

  static TowerReal from_double(double v) { return normalize(0, v); }

  /// e^{log_value}.
  static TowerReal from_log(double log_value) { return normalize(1, log_value); }

  std::uint32_t height() const { return height_; }
  double base() const { return base_; }

  bool fits_double() const { return height_ <= 1; }

  /// Denoted value as a double, +inf on overflow.
  double to_double() const;

  /// log of the denoted value as a double; +inf when height >= 3, -inf at 0.
  /// Throws DomainError for negative values.
  double log_value() const;

  bool is_positive() const { return height_ > 0 || base_ > 0.0; }

  friend bool operator==(const TowerReal&, const TowerReal&) = default;
  friend std::strong_ordering operator<=>(const TowerReal& a, const TowerReal& b);

 private:
  constexpr TowerReal(std::uint32_t h, double x) : height_(h), base_(x) {}

  std::uint32_t height_ = 0;
  double base_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const TowerReal& v);

/// Comparison at the representation's resolution.
Resolved compare_resolved(const TowerReal& a, const TowerReal& b,
                          double tolerance = TowerReal::kResolution);

TowerReal apply_exp(const TowerReal& a);

/// Natural log; throws DomainError unless a > 0.
TowerReal apply_log(const TowerReal& a);

/// a^p for p > 0 and a >= 0.
TowerReal scale_pow(const TowerReal& a, double p);

/// a * factor for factor > 0. At height 0 any sign of a is accepted.
TowerReal scale(const TowerReal& a, double factor);

/// a * e^{log_factor}, the form used when the factor itself is out of range.
TowerReal scale_log(const TowerReal& a, double log_factor);

/// a + c. Constants far below the resolution of a are absorbed.
TowerReal shift(const TowerReal& a, double c);

/// a + b for a, b >= 0.
TowerReal sum(const TowerReal& a, const TowerReal& b);

/// a - b for a > b >= 0. Throws DomainError when the difference is below the
/// representation's resolution.
TowerReal difference_positive(const TowerReal& a, const TowerReal& b);

/// log(a / b) for positive a, b as a double; +-inf when out of range.
double log_ratio(const TowerReal& a, const TowerReal& b);

/// a - b as a double; +-inf when the difference is out of double range.
double difference(const TowerReal& a, const TowerReal& b);

/// log(e^{la} + e^{lb}) with la, lb in log coordinates.
TowerReal log_add(const TowerReal& la, const TowerReal& lb);

}  // namespace qfast
