#include "qfast/escape.hpp"

#include <cmath>

#include "qfast/errors.hpp"

namespace qfast {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::optional<TowerReal> modulus_of(Complex z) {
  double a = std::abs(z);
  if (a == 0.0) return std::nullopt;
  return TowerReal::from_double(a);
}

// Continues `rec` in TowerReal from the positive value x.
void continue_in_tower(const EntireFunction& f, TowerReal x, OrbitRecord& rec) {
  while (rec.moduli.size() <= rec.horizon) {
    try {
      x = f.evaluate_positive(x);
    } catch (const EvaluatorRefusal& e) {
      rec.truncated = true;
      rec.note = std::string("range-truncated: ") + e.what();
      return;
    }
    rec.moduli.emplace_back(x);
  }
}

// log of a modulus, nullopt for zero.
std::optional<TowerReal> log_modulus(const std::optional<TowerReal>& m) {
  if (!m || !m->is_positive()) return std::nullopt;
  return apply_log(*m);
}

bool dominates(const std::optional<TowerReal>& lhs, const TowerReal& rhs) {
  if (!lhs) return false;
  if (*lhs == rhs) return true;
  return compare_resolved(*lhs, rhs) == Resolved::greater;
}

Certificate certify(const std::vector<std::optional<TowerReal>>& logmod,
                    const OrbitSequence& threshold, ThresholdKind kind, double eps,
                    std::size_t max_lag) {
  Certificate c;
  c.kind = kind;
  c.epsilon = eps;
  c.threshold_truncated = threshold.truncated;
  const std::size_t last = logmod.size() - 1;
  for (std::size_t l = 0; l <= max_lag && l <= last; ++l) {
    bool ok = true;
    std::size_t checked = 0;
    for (std::size_t n = 0; n + l <= last && n < threshold.values.size(); ++n) {
      if (!dominates(logmod[n + l], threshold.values[n])) {
        ok = false;
        break;
      }
      checked = n;
    }
    if (ok) {
      c.lag = l;
      c.checked_through = checked;
      return c;
    }
  }
  return c;
}

}  // namespace

std::string to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::fast:
      return "A";
    case ThresholdKind::quite_fast:
      return "Q_eps";
    case ThresholdKind::eps_max:
      return "eps_M";
  }
  return "?";
}

OrbitRecord compute_orbit(const EntireFunction& f, Complex z0, std::size_t n) {
  if (!finite(z0)) throw DomainError("compute_orbit: start must be finite");
  OrbitRecord rec;
  rec.z0 = z0;
  rec.horizon = n;
  rec.moduli.push_back(modulus_of(z0));
  Complex z = z0;
  while (rec.moduli.size() <= n) {
    Complex next;
    bool ok = true;
    try {
      next = f.evaluate(z);
      ok = finite(next);
    } catch (const EvaluatorRefusal&) {
      ok = false;
    }
    if (!ok) {
      rec.tower_from = rec.moduli.size();
      if (z.imag() == 0.0 && z.real() > 0.0 && f.positive_on_reals_is_max()) {
        continue_in_tower(f, TowerReal::from_double(z.real()), rec);
      } else {
        rec.truncated = true;
        rec.note = "range-truncated: complex iterate left double range";
      }
      return rec;
    }
    z = next;
    rec.moduli.push_back(modulus_of(z));
  }
  rec.tower_from = rec.moduli.size();
  return rec;
}

OrbitRecord compute_tower_orbit(const EntireFunction& f, const TowerReal& x0, std::size_t n) {
  if (!x0.is_positive()) throw DomainError("compute_tower_orbit: start must be positive");
  if (!f.positive_on_reals_is_max()) {
    throw PreconditionError("compute_tower_orbit: needs nonnegative coefficients");
  }
  OrbitRecord rec;
  rec.z0 = Complex(x0.to_double(), 0.0);
  rec.horizon = n;
  rec.tower_from = 1;
  rec.moduli.emplace_back(x0);
  continue_in_tower(f, x0, rec);
  return rec;
}

const Certificate* Classification::find(ThresholdKind kind, double eps) const {
  for (const auto& c : certificates) {
    if (c.kind == kind && (kind == ThresholdKind::fast || c.epsilon == eps)) return &c;
  }
  return nullptr;
}

Classification classify(const OrbitRecord& record, const GrowthModel& g, double t_r,
                        const std::vector<double>& eps_list, std::size_t max_lag,
                        double escape_bound) {
  if (record.moduli.empty()) throw PreconditionError("classify: empty record");
  TowerReal start = TowerReal::from_double(t_r);
  if (compare_resolved(g.phi(start), start) != Resolved::greater) {
    throw PreconditionError("classify: needs phi(t_R) > t_R");
  }
  Classification out;
  out.t_r = t_r;
  out.max_lag = max_lag;
  out.record_truncated = record.truncated;

  std::vector<std::optional<TowerReal>> logmod;
  logmod.reserve(record.moduli.size());
  for (const auto& m : record.moduli) logmod.push_back(log_modulus(m));
  const std::size_t len = record.moduli.size() - 1;

  out.certificates.push_back(certify(logmod, iterate_map(g, MapKind::phi, 1.0, start, len),
                                     ThresholdKind::fast, 1.0, max_lag));
  for (double eps : eps_list) {
    out.certificates.push_back(certify(logmod, iterate_map(g, MapKind::psi_eps, eps, start, len),
                                       ThresholdKind::quite_fast, eps, max_lag));
    out.certificates.push_back(certify(logmod, iterate_map(g, MapKind::eps_shift, eps, start, len),
                                       ThresholdKind::eps_max, eps, max_lag));
  }

  bool increasing = record.moduli.size() >= 2;
  for (std::size_t i = 1; i < record.moduli.size() && increasing; ++i) {
    const auto& a = record.moduli[i - 1];
    const auto& b = record.moduli[i];
    increasing = b && (!a || *b > *a);
  }
  const auto& final_mod = record.moduli.back();
  out.escaping_proxy =
      increasing && final_mod && *final_mod > TowerReal::from_double(escape_bound);
  return out;
}

}  // namespace qfast
