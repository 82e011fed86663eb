#include "qfast/xreal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "qfast/errors.hpp"

namespace qfast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const TowerReal& a, const char* op) {
  if (!a.is_positive()) {
    throw DomainError(std::string(op) + ": argument must be positive");
  }
}

}  // namespace

const double TowerReal::kLogCap = std::log(TowerReal::kCap);

std::string to_string(Resolved r) {
  switch (r) {
    case Resolved::less:
      return "less";
    case Resolved::indistinguishable:
      return "indistinguishable";
    case Resolved::greater:
      return "greater";
  }
  return "?";
}

TowerReal TowerReal::normalize(std::uint32_t height, double base) {
  if (!std::isfinite(base)) {
    throw DomainError("TowerReal: base must be finite");
  }
  double x = base + 0.0;
  std::uint32_t h = height;
  while (x > kCap) {
    x = std::log(x);
    ++h;
  }
  while (h >= 1 && x <= kLogCap) {
    x = std::min(std::exp(x), kCap);
    --h;
  }
  return TowerReal(h, x);
}

TowerReal TowerReal::positive(std::uint32_t height, double base) {
  TowerReal v = normalize(height, base);
  if (!v.is_positive()) {
    throw DomainError("TowerReal: value must be positive");
  }
  return v;
}

double TowerReal::to_double() const {
  switch (height_) {
    case 0:
      return base_;
    case 1:
      return std::exp(base_);
    case 2:
      return std::exp(std::exp(base_));
    default:
      return kInf;
  }
}

double TowerReal::log_value() const {
  switch (height_) {
    case 0:
      if (base_ < 0.0) throw DomainError("log_value: negative value");
      return base_ == 0.0 ? -kInf : std::log(base_);
    case 1:
      return base_;
    case 2:
      return std::exp(base_);
    default:
      return kInf;
  }
}

std::strong_ordering operator<=>(const TowerReal& a, const TowerReal& b) {
  if (a.height_ != b.height_) return a.height_ <=> b.height_;
  if (a.base_ < b.base_) return std::strong_ordering::less;
  if (a.base_ > b.base_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const TowerReal& v) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << v.height() << ", " << v.base() << ")";
  return os << s.str();
}

Resolved compare_resolved(const TowerReal& a, const TowerReal& b, double tolerance) {
  std::uint32_t ha = a.height();
  std::uint32_t hb = b.height();
  double xa = a.base();
  double xb = b.base();
  if (ha > hb + 1) return Resolved::greater;
  if (hb > ha + 1) return Resolved::less;
  if (ha == hb + 1) {
    xa = std::exp(xa);
  } else if (hb == ha + 1) {
    xb = std::exp(xb);
  }
  double scale = std::max({1.0, std::abs(xa), std::abs(xb)});
  if (std::abs(xa - xb) <= tolerance * scale) return Resolved::indistinguishable;
  return xa < xb ? Resolved::less : Resolved::greater;
}

TowerReal apply_exp(const TowerReal& a) {
  return TowerReal::normalize(a.height() + 1, a.base());
}

TowerReal apply_log(const TowerReal& a) {
  require_positive(a, "apply_log");
  if (a.height() == 0) return TowerReal::from_double(std::log(a.base()));
  return TowerReal::normalize(a.height() - 1, a.base());
}

TowerReal scale_log(const TowerReal& a, double log_factor) {
  if (std::isnan(log_factor)) throw DomainError("scale_log: NaN factor");
  if (a.height() == 0) {
    double x = a.base();
    if (x == 0.0) return a;
    if (x < 0.0) {
      double v = x * std::exp(log_factor);
      if (!std::isfinite(v)) throw DomainError("scale_log: negative value overflow");
      return TowerReal::from_double(v);
    }
    return TowerReal::normalize(1, std::log(x) + log_factor);
  }
  if (log_factor == 0.0) return a;
  return apply_exp(shift(apply_log(a), log_factor));
}

TowerReal scale(const TowerReal& a, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DomainError("scale: factor must be positive and finite");
  }
  if (a.height() == 0) {
    double v = a.base() * factor;
    if (std::isfinite(v) && std::abs(v) <= TowerReal::kCap) {
      return TowerReal::from_double(v);
    }
  }
  return scale_log(a, std::log(factor));
}

TowerReal scale_pow(const TowerReal& a, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("scale_pow: exponent must be positive and finite");
  }
  if (a.height() == 0) {
    if (a.base() < 0.0) throw DomainError("scale_pow: negative base");
    if (a.base() == 0.0) return a;
    return TowerReal::normalize(1, p * std::log(a.base()));
  }
  return apply_exp(scale(apply_log(a), p));
}

TowerReal shift(const TowerReal& a, double c) {
  if (!std::isfinite(c)) throw DomainError("shift: constant must be finite");
  if (c == 0.0) return a;
  if (a.height() == 0) return TowerReal::from_double(a.base() + c);
  // a + c = a * (1 + c / a)
  double tau = c * std::exp(-a.log_value());
  if (tau == 0.0) return a;
  if (tau <= -1.0) return TowerReal::from_double(a.to_double() + c);
  return scale_log(a, std::log1p(tau));
}

double difference(const TowerReal& a, const TowerReal& b) {
  if (a == b) return 0.0;
  double da = a.to_double();
  double db = b.to_double();
  if (std::isfinite(da) && std::isfinite(db)) return da - db;
  bool a_hi = a > b;
  const TowerReal& hi = a_hi ? a : b;
  const TowerReal& lo = a_hi ? b : a;
  double sign = a_hi ? 1.0 : -1.0;
  if (!lo.is_positive()) return sign * kInf;
  double lr = log_ratio(lo, hi);
  if (lr == 0.0) return 0.0;
  double log_gap = hi.log_value() + std::log(-std::expm1(lr));
  return sign * std::exp(log_gap);
}

double log_ratio(const TowerReal& a, const TowerReal& b) {
  require_positive(a, "log_ratio");
  require_positive(b, "log_ratio");
  if (a == b) return 0.0;
  if (a.height() == 0 && b.height() == 0) {
    double r = a.base() / b.base();
    if (std::isfinite(r) && std::isnormal(r)) return std::log(r);
    return std::log(a.base()) - std::log(b.base());
  }
  return difference(apply_log(a), apply_log(b));
}

TowerReal sum(const TowerReal& a, const TowerReal& b) {
  if (a.height() == 0 && b.height() == 0) {
    return TowerReal::from_double(a.base() + b.base());
  }
  const TowerReal& hi = a > b ? a : b;
  const TowerReal& lo = a > b ? b : a;
  if (lo.height() == 0 && lo.base() == 0.0) return hi;
  require_positive(lo, "sum");
  return scale_log(hi, std::log1p(std::exp(log_ratio(lo, hi))));
}

TowerReal difference_positive(const TowerReal& a, const TowerReal& b) {
  if (!(a > b) || (b.height() == 0 && b.base() < 0.0)) {
    throw DomainError("difference_positive: requires a > b >= 0");
  }
  if (b.height() == 0 && b.base() == 0.0) return a;
  if (a.height() == 0) return TowerReal::from_double(a.base() - b.base());
  double lr = log_ratio(b, a);
  if (!(lr < 0.0)) {
    throw DomainError("difference_positive: difference below resolution");
  }
  return scale_log(a, std::log(-std::expm1(lr)));
}

TowerReal log_add(const TowerReal& la, const TowerReal& lb) {
  const TowerReal& hi = la > lb ? la : lb;
  const TowerReal& lo = la > lb ? lb : la;
  double d = difference(lo, hi);
  return shift(hi, std::log1p(std::exp(d)));
}

}  // namespace qfast
