#pragma once

// Finite orbits of points and their classification against the iterated
// threshold orbits M^n(R), mu_eps^n(R) and (eps M)^n(R).
//
// Certificates say "certified through horizon": a lag l such that the
// defining inequality holds for every n with n + l inside the record.
// Membership of the escaping sets themselves is never claimed.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qfast/efun.hpp"
#include "qfast/growth.hpp"
#include "qfast/xreal.hpp"

namespace qfast {

struct OrbitRecord {
  Complex z0;
  std::size_t horizon = 0;
  /// |f^n(z0)| for n = 0..; nullopt marks an exact zero.
  std::vector<std::optional<TowerReal>> moduli;
  /// First index computed on the positive axis in TowerReal, or
  /// moduli.size() when the whole orbit stayed in double range.
  std::size_t tower_from = 0;
  bool truncated = false;
  std::string note;
};

/// Complex iteration while the iterates stay finite. On overflow, a real
/// nonnegative iterate of a function with f(x) = M(x) on the positive axis
/// continues in TowerReal; otherwise the record is range-truncated.
OrbitRecord compute_orbit(const EntireFunction& f, Complex z0, std::size_t n);

/// Orbit of a positive real start given in TowerReal form.
OrbitRecord compute_tower_orbit(const EntireFunction& f, const TowerReal& x0, std::size_t n);

enum class ThresholdKind { fast, quite_fast, eps_max };

std::string to_string(ThresholdKind k);

struct Certificate {
  ThresholdKind kind = ThresholdKind::fast;
  double epsilon = 1.0;
  /// Minimal lag certified through the horizon, if any.
  std::optional<std::size_t> lag;
  /// Largest n compared for the certified lag (or for lag 0 otherwise).
  std::size_t checked_through = 0;
  bool threshold_truncated = false;
};

struct Classification {
  double t_r = 0.0;
  std::size_t max_lag = 0;
  /// fast first, then one quite_fast and one eps_max entry per epsilon.
  std::vector<Certificate> certificates;
  /// Strictly increasing moduli whose last value exceeds escape_bound.
  bool escaping_proxy = false;
  bool record_truncated = false;

  const Certificate* find(ThresholdKind kind, double eps = 1.0) const;
};

/// Threshold orbits run from t_R in log coordinates: phi, eps * phi and
/// phi + log eps. Throws PreconditionError unless phi(t_R) > t_R.
Classification classify(const OrbitRecord& record, const GrowthModel& g, double t_r,
                        const std::vector<double>& eps_list, std::size_t max_lag,
                        double escape_bound = 1e6);

}  // namespace qfast
