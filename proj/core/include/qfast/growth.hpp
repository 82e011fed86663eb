#pragma once

// Growth functions in log coordinates, phi(t) = log M(e^t), and the orbits of
// the maps built from them.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "qfast/efun.hpp"
#include "qfast/xreal.hpp"

namespace qfast {

enum class Provenance { derived_from_function, synthetic_model };

std::string to_string(Provenance p);

class GrowthModel {
 public:
  virtual ~GrowthModel() = default;

  virtual std::string name() const = 0;
  virtual Provenance provenance() const { return Provenance::synthetic_model; }

  /// phi(t). Throws DomainError outside the domain and EvaluatorRefusal at
  /// magnitudes the evaluator cannot certify.
  virtual TowerReal phi(const TowerReal& t) const = 0;

  /// Breakpoints of a piecewise model, empty for closed forms.
  virtual std::vector<TowerReal> knots() const { return {}; }

  TowerReal phi_at(double t) const { return phi(TowerReal::from_double(t)); }
};

using GrowthPtr = std::shared_ptr<const GrowthModel>;

/// phi(t) = log M(e^t) of an entire function.
class FunctionGrowth final : public GrowthModel {
 public:
  explicit FunctionGrowth(EntireFunction f) : f_(std::move(f)) {}

  std::string name() const override { return f_.name(); }
  Provenance provenance() const override { return Provenance::derived_from_function; }
  TowerReal phi(const TowerReal& t) const override { return f_.log_max_modulus(t); }

  const EntireFunction& function() const { return f_; }

 private:
  EntireFunction f_;
};

/// phi(t) = t^p for t >= 0.
class PowerModel final : public GrowthModel {
 public:
  explicit PowerModel(double p);

  std::string name() const override;
  TowerReal phi(const TowerReal& t) const override;
  double exponent() const { return p_; }

 private:
  double p_;
};

/// Linear interpolation through (knot_i, value_i), extended linearly to the
/// left of the first knot with the first slope. Evaluation right of the last
/// knot is refused.
class PiecewiseLinearModel : public GrowthModel {
 public:
  PiecewiseLinearModel(std::string name, std::vector<TowerReal> knots,
                       std::vector<TowerReal> values);

  std::string name() const override { return name_; }
  TowerReal phi(const TowerReal& t) const override;
  std::vector<TowerReal> knots() const override { return knots_; }

  const std::vector<TowerReal>& values() const { return values_; }

 private:
  std::string name_;
  std::vector<TowerReal> knots_;
  std::vector<TowerReal> values_;
};

/// Value at t of the line through (x0, y0), (x1, y1), x0 < t <= x1 and
/// 0 < y0 < y1 when any coordinate leaves double range.
TowerReal interpolate_linear(const TowerReal& x0, const TowerReal& y0, const TowerReal& x1,
                             const TowerReal& y1, const TowerReal& t);

enum class MapKind { phi, psi_eps, eps_shift };

std::string to_string(MapKind m);

/// One step of the chosen map: phi(t), eps * phi(t), or phi(t) + log eps.
TowerReal apply_map(const GrowthModel& g, MapKind map, double eps, const TowerReal& t);

struct OrbitSequence {
  TowerReal start;
  std::vector<TowerReal> values;
  MapKind map = MapKind::phi;
  double epsilon = 1.0;
  bool truncated = false;
  std::string note;
};

/// values[0] = t0 and values[n+1] = map(values[n]) for n < N, stopping early
/// with `truncated` set if the evaluator refuses.
OrbitSequence iterate_map(const GrowthModel& g, MapKind map, double eps, const TowerReal& t0,
                          std::size_t n);

struct ThresholdWindow {
  double lo = -10.0;
  double hi = 1e6;
  std::size_t probes = 10000;
};

/// First probe t with phi(t) > t and right slope > 1, which by convexity
/// gives phi(t) > t on [t, inf). Probes are log-spaced in t - lo + 1.
/// Throws PreconditionError when no probe qualifies.
double threshold_R(const GrowthModel& g, const ThresholdWindow& window = {});

/// The same search for eps * phi: eps phi(t) > t with right slope of eps phi
/// above 1, so that the psi_eps orbit from the result escapes as well.
double threshold_R_eps(const GrowthModel& g, double eps, const ThresholdWindow& window = {});

/// Whether eps phi(t) > t with right slope of eps phi above 1 at t.
bool psi_expands_at(const GrowthModel& g, double eps, double t);

struct OrderEstimate {
  double rho_hat = 0.0;
  double lambda_hat = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Sup and inf of log log M(r) / log r over the tail half of the grid.
/// Points with M(r) <= 1 or r <= 1 are skipped.
OrderEstimate order_estimates(const EntireFunction& f, const std::vector<double>& r_grid);

}  // namespace qfast
