#include "qfast/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "qfast/errors.hpp"

namespace qfast {

namespace {

Json map_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = number_json(v);
  return j;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw PreconditionError("descriptor: expected a number");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json to_json(const TowerReal& v) { return Json{{"h", v.height()}, {"x", number_json(v.base())}}; }

TowerReal tower_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("h") || !j.contains("x")) {
    throw PreconditionError("expected {\"h\", \"x\"}");
  }
  return TowerReal::normalize(j.at("h").get<std::uint32_t>(), number_from_json(j.at("x")));
}

Json to_json(const Grid& g) {
  return Json{{"lo", number_json(g.lo)},
              {"hi", number_json(g.hi)},
              {"n", g.n},
              {"log_spaced", g.log_spaced},
              {"coordinate", g.coordinate}};
}

Json to_json(const Witness& w) {
  return Json{{"where", map_json(w.where)}, {"lhs", to_json(w.lhs)}, {"rhs", to_json(w.rhs)}};
}

Json to_json(const RegularityVerdict& v) {
  Json j{{"criterion", v.criterion}, {"params", map_json(v.params)}, {"status", to_string(v.status)}};
  Json w = Json::array();
  for (const auto& x : v.witnesses) w.push_back(to_json(x));
  j["witnesses"] = w;
  j["grid"] = v.has_grid ? to_json(v.grid) : Json(nullptr);
  if (!v.results.empty()) j["results"] = map_json(v.results);
  if (!v.notes.empty()) j["notes"] = v.notes;
  if (!v.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : v.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
  }
  return j;
}

Json to_json(const ModulusResult& m) {
  return Json{{"log_value", number_json(m.log_value)},
              {"zero", m.zero},
              {"abs_err_bound", number_json(m.abs_err_bound)},
              {"method", to_string(m.method)},
              {"value", to_json(m.value())}};
}

Json to_json(const OrbitSequence& o) {
  Json vals = Json::array();
  for (const auto& v : o.values) vals.push_back(to_json(v));
  Json j{{"start", to_json(o.start)},
         {"values", vals},
         {"map", to_string(o.map)},
         {"epsilon", number_json(o.epsilon)},
         {"truncated", o.truncated}};
  if (!o.note.empty()) j["note"] = o.note;
  return j;
}

Json to_json(const OrbitRecord& r) {
  Json moduli = Json::array();
  for (const auto& m : r.moduli) moduli.push_back(m ? to_json(*m) : Json(nullptr));
  Json j{{"z0", Json::array({number_json(r.z0.real()), number_json(r.z0.imag())})},
         {"horizon", r.horizon},
         {"moduli", moduli},
         {"tower_from", r.tower_from},
         {"truncated", r.truncated}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const Certificate& c) {
  Json j{{"criterion", to_string(c.kind)},
         {"lag", c.lag ? Json(*c.lag) : Json(nullptr)},
         {"status", c.lag ? "certified through horizon" : "none"},
         {"checked_through", c.checked_through},
         {"threshold_truncated", c.threshold_truncated}};
  if (c.kind != ThresholdKind::fast) j["eps"] = number_json(c.epsilon);
  return j;
}

Json to_json(const Classification& c) {
  Json certs = Json::array();
  for (const auto& x : c.certificates) certs.push_back(to_json(x));
  return Json{{"t_R", number_json(c.t_r)},
              {"L", c.max_lag},
              {"certificates", certs},
              {"escaping_proxy", c.escaping_proxy},
              {"record_truncated", c.record_truncated}};
}

Json to_json(const BeurlingReport& b) {
  return Json{{"r1", number_json(b.r1)},
              {"r2", number_json(b.r2)},
              {"mu", number_json(b.mu)},
              {"log_measure", number_json(b.log_measure)},
              {"components", b.components},
              {"lhs", number_json(b.lhs)},
              {"rhs", number_json(b.rhs)},
              {"trivial", b.trivial},
              {"status", b.confirmed ? "confirmed" : "violated"}};
}

Json to_json(const CascadeConstants& c) {
  Json j{{"r", number_json(c.r)},     {"k", number_json(c.k)},
         {"delta", number_json(c.delta)}, {"lambda", number_json(c.lambda)},
         {"a", number_json(c.a)},     {"n", c.n},
         {"p", number_json(c.p)},     {"p_lower", number_json(c.p_lower)}};
  if (c.has_d) {
    j["d"] = number_json(c.d);
    j["suff_lhs"] = number_json(c.suff_lhs);
    j["suff_rhs"] = number_json(c.suff_rhs);
    j["suff_holds"] = c.suff_lhs > c.suff_rhs;
  }
  return j;
}

Json to_json(const CascadeCheck& c) {
  return Json{{"constants", to_json(c.constants)},
              {"lhs", number_json(c.lhs)},
              {"rhs", number_json(c.rhs)},
              {"status", c.holds ? "holds" : "violated"}};
}

Json to_json(const SandwichReport& s) {
  return Json{{"m", s.m},
              {"window_lo", number_json(s.window_lo)},
              {"window_hi", number_json(s.window_hi)},
              {"min_g", number_json(s.min_g)},
              {"max_g", number_json(s.max_g)},
              {"ratio", number_json(s.ratio)},
              {"bound", number_json(s.bound)},
              {"within_bound", s.within_bound}};
}

Json to_json(const CheckLine& c) {
  Json j{{"name", c.name}, {"passed", c.passed}, {"values", map_json(c.values)}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json to_json(const ConstructionReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  Json j{{"construction", r.construction},
         {"params", map_json(r.params)},
         {"checks", checks},
         {"verdicts", verdicts},
         {"data", map_json(r.data)},
         {"all_passed", r.all_passed()}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const LacunaryRecipe& r) {
  Json zeros = Json::array();
  for (std::size_t m = 1; m <= r.log_zeros.size(); ++m) zeros.push_back(to_json(r.zero(m)));
  Json markers = Json::array();
  for (std::size_t m = 1; m <= r.log_markers.size(); ++m) markers.push_back(to_json(r.marker(m)));
  return Json{{"eps", number_json(r.eps)},
              {"eps_prime", number_json(r.eps_prime)},
              {"m_max", r.m_max},
              {"log_p_plus", number_json(r.log_p_plus)},
              {"log_p_minus", number_json(r.log_p_minus)},
              {"zeros", zeros},
              {"markers", markers},
              {"counts", r.counts}};
}

Json model_json(const GrowthModel& g) {
  Json knots = Json::array();
  Json values = Json::array();
  for (const auto& k : g.knots()) {
    knots.push_back(to_json(k));
    try {
      values.push_back(to_json(g.phi(k)));
    } catch (const EvaluatorRefusal&) {
      values.push_back(nullptr);
    }
  }
  return Json{{"name", g.name()},
              {"provenance", to_string(g.provenance())},
              {"knots", knots},
              {"values", values}};
}

EntireFunction function_from_json(const Json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("variant")) {
    throw PreconditionError("descriptor: expected an object with \"variant\"");
  }
  try {
    const std::string variant = j.at("variant").get<std::string>();
    const std::string fname = j.value("name", name);
    if (variant == "exp") {
      return EntireFunction(fname, ExpFamily{number_from_json(j.value("lambda", Json(1.0)))});
    }
    if (variant == "lacunary") {
      LacunaryProduct p;
      for (const auto& z : j.at("zeros")) p.zeros.push_back(number_from_json(z));
      if (j.contains("continuation_ratio")) {
        p.continuation_ratio = number_from_json(j.at("continuation_ratio"));
      }
      return EntireFunction(fname, p);
    }
    if (variant == "series") {
      TruncatedSeries s;
      for (const auto& c : j.at("coeffs")) {
        if (c.is_array()) {
          if (c.size() != 2) throw PreconditionError("descriptor: coefficient must be [re, im]");
          s.coeffs.emplace_back(number_from_json(c[0]), number_from_json(c[1]));
        } else {
          s.coeffs.emplace_back(number_from_json(c), 0.0);
        }
      }
      const std::string tail = j.value("tail", std::string("none"));
      if (tail == "none") {
        s.tail = TailKind::none;
      } else if (tail == "geometric") {
        s.tail = TailKind::geometric;
      } else if (tail == "factorial") {
        s.tail = TailKind::factorial;
      } else {
        throw PreconditionError("descriptor: unknown tail kind " + tail);
      }
      s.tail_a = number_from_json(j.value("tail_a", Json(0.0)));
      s.tail_rho = number_from_json(j.value("tail_rho", Json(0.0)));
      return EntireFunction::series(fname, s);
    }
    throw PreconditionError("descriptor: unknown variant " + variant);
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("descriptor: ") + e.what());
  }
}

Json function_to_json(const EntireFunction& f) {
  Json j{{"name", f.name()}, {"variant", f.variant_name()}};
  std::visit(
      [&](const auto& rep) {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ExpFamily>) {
          j["lambda"] = number_json(rep.lambda);
        } else if constexpr (std::is_same_v<T, LacunaryProduct>) {
          Json zeros = Json::array();
          for (double z : rep.zeros) zeros.push_back(number_json(z));
          j["zeros"] = zeros;
          if (rep.infinite()) j["continuation_ratio"] = number_json(rep.continuation_ratio);
        } else {
          Json coeffs = Json::array();
          for (const auto& c : rep.coeffs) {
            coeffs.push_back(Json::array({number_json(c.real()), number_json(c.imag())}));
          }
          j["coeffs"] = coeffs;
          j["tail"] = rep.tail == TailKind::none       ? "none"
                      : rep.tail == TailKind::geometric ? "geometric"
                                                        : "factorial";
          j["tail_a"] = number_json(rep.tail_a);
          j["tail_rho"] = number_json(rep.tail_rho);
        }
      },
      f.representation());
  return j;
}

EntireFunction load_function_descriptor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read descriptor " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw PreconditionError("descriptor " + path + ": " + e.what());
  }
  return function_from_json(j, path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_orbit_csv(std::ostream& os, const OrbitSequence& o) {
  os << "n,h,x,map,epsilon\n";
  for (std::size_t n = 0; n < o.values.size(); ++n) {
    os << n << ',' << o.values[n].height() << ',' << format_double(o.values[n].base()) << ','
       << to_string(o.map) << ',' << format_double(o.epsilon) << '\n';
  }
}

void write_orbit_record_csv(std::ostream& os, const OrbitRecord& r) {
  os << "n,h,x,zero\n";
  for (std::size_t n = 0; n < r.moduli.size(); ++n) {
    const auto& m = r.moduli[n];
    if (m) {
      os << n << ',' << m->height() << ',' << format_double(m->base()) << ",0\n";
    } else {
      os << n << ",0,0,1\n";
    }
  }
}

}  // namespace qfast
