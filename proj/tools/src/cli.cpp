#include "qfast/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/errors.hpp"
#include "qfast/escape.hpp"
#include "qfast/growth.hpp"
#include "qfast/parallel.hpp"
#include "qfast/regularity.hpp"
#include "qfast/report.hpp"

namespace qfast::cli {

namespace {

const std::vector<double> kEpsGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

Grid to_grid(const GridSpec& g, const std::string& coordinate) {
  Grid out;
  out.lo = g.lo;
  out.hi = g.hi;
  out.n = g.n;
  out.log_spaced = g.log_spaced;
  out.coordinate = coordinate;
  return out;
}

Grid require_grid(const RunConfig& c, const std::string& coordinate) {
  if (!c.grid) throw std::invalid_argument(c.subcommand + ": --grid is required");
  return to_grid(*c.grid, coordinate);
}

double require(const std::optional<double>& v, const char* flag, const std::string& what) {
  if (!v) throw std::invalid_argument(what + ": " + flag + " is required");
  return *v;
}

EntireFunction resolve_function(const RunConfig& c) {
  if (!c.descriptor.empty()) return load_function_descriptor(c.descriptor);
  if (c.function == "exp") return EntireFunction::exp();
  if (c.function == "lacunary5") return EntireFunction::lacunary5();
  if (c.function == "e62model" || c.function == "e61model") {
    throw std::invalid_argument(c.function + " is a growth model; " + c.subcommand +
                                " needs an entire function");
  }
  if (c.function.empty()) throw std::invalid_argument("--function or --descriptor is required");
  throw std::invalid_argument("unknown function '" + c.function + "'");
}

GrowthPtr resolve_growth(const RunConfig& c) {
  if (c.descriptor.empty() && c.function == "e62model") {
    return std::make_shared<Example62Model>(build_example62(c.a.value_or(0.25), c.b.value_or(0.75)));
  }
  if (c.descriptor.empty() && c.function == "e61model") {
    return std::make_shared<Example61Model>(build_example61());
  }
  return std::make_shared<FunctionGrowth>(resolve_function(c));
}

Json growth_descriptor(const GrowthModel& g) {
  if (const auto* fg = dynamic_cast<const FunctionGrowth*>(&g)) return function_to_json(fg->function());
  return Json{{"name", g.name()}, {"provenance", to_string(g.provenance())}};
}

// t_R from --r1, else the smallest threshold valid for phi and for eps phi
// at every eps in use.
double resolve_t_r(const RunConfig& c, const GrowthModel& g, const std::vector<double>& eps = {}) {
  if (c.r1) {
    if (!(*c.r1 > 0.0)) throw std::invalid_argument("--r1 must be positive");
    return std::log(*c.r1);
  }
  double t = threshold_R(g);
  for (double e : eps) t = std::max(t, threshold_R_eps(g, e));
  return t;
}

bool has_violation(const Json& j) {
  if (j.is_object()) {
    auto it = j.find("status");
    if (it != j.end() && it->is_string()) {
      const auto& s = it->get_ref<const std::string&>();
      if (s == "violated" || s == "violation-all-lags") return true;
    }
    for (const auto& [key, value] : j.items()) {
      if (has_violation(value)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (has_violation(v)) return true;
    }
  }
  return false;
}

struct Artifact {
  Json json;
  std::string csv;
  bool has_csv = false;
};

Artifact run_modulus(const RunConfig& c) {
  EntireFunction f = resolve_function(c);
  Grid grid = require_grid(c, "r");
  auto pts = grid.points();
  for (double r : pts) {
    if (!(r > 0.0)) throw std::invalid_argument("modulus: radii must be positive");
  }
  auto rows = parallel_map(pts.size(), c.jobs, [&](std::size_t i) {
    return std::make_pair(f.max_modulus(pts[i]), f.min_modulus(pts[i]));
  });
  Artifact a;
  Json jr = Json::array();
  std::ostringstream csv;
  csv << "r,M,m,log_M,log_m\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& [mx, mn] = rows[i];
    jr.push_back(Json{{"r", number_json(pts[i])}, {"M", to_json(mx)}, {"m", to_json(mn)}});
    double big_m = mx.zero ? 0.0 : std::exp(mx.log_value);
    double small_m = mn.zero ? 0.0 : std::exp(mn.log_value);
    csv << format_double(pts[i]) << ',' << format_double(big_m) << ',' << format_double(small_m)
        << ',' << format_double(mx.zero ? -INFINITY : mx.log_value) << ','
        << format_double(mn.zero ? -INFINITY : mn.log_value) << '\n';
  }
  a.json = Json{{"command", "modulus"}, {"function", function_to_json(f)}, {"rows", jr}};
  a.csv = csv.str();
  a.has_csv = true;
  return a;
}

std::vector<Complex> load_seeds(const RunConfig& c) {
  std::vector<Complex> seeds;
  if (!c.seeds.empty()) {
    std::ifstream in(c.seeds);
    if (!in) throw std::invalid_argument("cannot read seeds file " + c.seeds);
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw std::invalid_argument("seeds file: " + std::string(e.what()));
    }
    if (!j.is_array()) throw std::invalid_argument("seeds file: expected a JSON list");
    for (const auto& s : j) {
      if (s.is_number()) {
        seeds.emplace_back(s.get<double>(), 0.0);
      } else if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number()) {
        seeds.emplace_back(s[0].get<double>(), s[1].get<double>());
      } else {
        throw std::invalid_argument("seeds file: entries must be x or [re, im]");
      }
    }
    return seeds;
  }
  if (!c.grid) throw std::invalid_argument("orbit: give a seeds file or --grid");
  for (double x : to_grid(*c.grid, "z").points()) seeds.emplace_back(x, 0.0);
  return seeds;
}

Artifact run_orbit(const RunConfig& c) {
  EntireFunction f = resolve_function(c);
  FunctionGrowth g(f);
  const double t_r = resolve_t_r(c, g);
  const std::vector<double> eps = c.eps.empty() ? std::vector<double>{0.5} : c.eps;
  auto seeds = load_seeds(c);
  auto results = parallel_map(seeds.size(), c.jobs, [&](std::size_t i) {
    OrbitRecord rec = compute_orbit(f, seeds[i], c.depth);
    Classification cls = classify(rec, g, t_r, eps, c.lags);
    return std::make_pair(std::move(rec), std::move(cls));
  });
  Artifact a;
  Json records = Json::array();
  std::ostringstream csv;
  csv << "seed,n,h,x,zero\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [rec, cls] = results[i];
    records.push_back(Json{{"record", to_json(rec)}, {"classification", to_json(cls)}});
    for (std::size_t n = 0; n < rec.moduli.size(); ++n) {
      const auto& m = rec.moduli[n];
      csv << i << ',' << n << ',';
      if (m) {
        csv << m->height() << ',' << format_double(m->base()) << ",0\n";
      } else {
        csv << "0,0,1\n";
      }
    }
  }
  Json eps_json = Json::array();
  for (double e : eps) eps_json.push_back(number_json(e));
  a.json = Json{{"command", "orbit"},        {"function", function_to_json(f)},
                {"t_R", number_json(t_r)},   {"eps", eps_json},
                {"L", c.lags},               {"N", c.depth},
                {"records", records}};
  a.csv = csv.str();
  a.has_csv = true;
  return a;
}

Artifact run_regularity(const RunConfig& c) {
  const std::string& id = c.criterion;
  if (id.empty()) throw std::invalid_argument("regularity: --criterion is required");
  Json out;
  Json descriptor;
  const bool function_level = id == "minmod" || id == "fr" || id == "doubling" || id == "order";
  if (function_level) {
    EntireFunction f = resolve_function(c);
    descriptor = function_to_json(f);
    Grid grid = require_grid(c, "r");
    if (id == "minmod") {
      out = to_json(check_minmod_criterion(f, grid, c.jobs));
    } else if (id == "fr") {
      out = to_json(check_Fr_criterion(f, require(c.k, "--k", id), require(c.alpha, "--alpha", id),
                                       require(c.beta, "--beta", id), grid, c.jobs));
    } else if (id == "doubling") {
      DoublingStats s = doubling_stats(f, grid.points());
      out = Json{{"criterion", "doubling"},
                 {"inf_ratio", number_json(s.inf_ratio)},
                 {"sup_ratio", number_json(s.sup_ratio)},
                 {"used", s.used},
                 {"skipped", s.skipped},
                 {"grid", to_json(grid)}};
    } else {
      OrderEstimate e = order_estimates(f, grid.points());
      out = Json{{"criterion", "order"},
                 {"rho_hat", number_json(e.rho_hat)},
                 {"lambda_hat", number_json(e.lambda_hat)},
                 {"used", e.used},
                 {"skipped", e.skipped},
                 {"grid", to_json(grid)}};
    }
  } else {
    GrowthPtr g = resolve_growth(c);
    descriptor = growth_descriptor(*g);
    if (id == "convexity") {
      out = to_json(check_convexity(*g, require_grid(c, "t"), c.jobs));
    } else if (id == "logreg") {
      double c_min = (c.k && c.d) ? constants_c_from_kd(*c.k, *c.d) : 0.0;
      out = to_json(check_log_regular_derivative(*g, require_grid(c, "t"), c_min, c.jobs));
    } else if (id == "hadamard") {
      out = to_json(check_log_regular_hadamard(*g, require(c.k, "--k", id), require(c.d, "--d", id),
                                               require_grid(c, "t"), c.jobs));
    } else if (id == "eps") {
      double eps = c.eps.empty() ? 0.5 : c.eps.front();
      out = to_json(check_eps_regularity(*g, eps, resolve_t_r(c, *g, {eps}), c.lags, c.depth));
    } else if (id == "weak") {
      const auto& eps = c.eps.empty() ? kEpsGrid : c.eps;
      out = to_json(check_weak_regularity(*g, eps, resolve_t_r(c, *g, eps), c.lags, c.depth, c.jobs));
    } else if (id == "psi") {
      out = to_json(check_psi_regularity(*g, require(c.k, "--k", id), require(c.m, "--m", id),
                                         require_grid(c, "t"), c.jobs));
    } else if (id == "sequence") {
      out = to_json(check_weak_sequence(*g, require(c.m, "--m", id), require(c.k, "--k", id),
                                        resolve_t_r(c, *g), c.depth));
    } else if (id == "tower") {
      double n = require(c.m, "--m", id);
      if (!(n >= 1.0 && n == std::floor(n))) throw std::invalid_argument("tower: --m must be a positive integer");
      out = to_json(check_tower_lower_bound(*g, static_cast<unsigned>(n), require(c.k, "--k", id),
                                            require_grid(c, "t"), c.jobs));
    } else {
      throw std::invalid_argument("unknown criterion '" + id + "'");
    }
  }
  out["function"] = descriptor;
  Artifact a;
  a.json = out;
  return a;
}

Artifact run_beurling(const RunConfig& c) {
  EntireFunction f = resolve_function(c);
  BeurlingReport r = beurling_check(f, require(c.r1, "--r1", "beurling"), require(c.r2, "--r2", "beurling"),
                                    require(c.mu, "--mu", "beurling"), 256, c.jobs);
  Json j = to_json(r);
  j["function"] = function_to_json(f);
  j["constant"] = number_json(beurling_constant());
  return Artifact{j, {}, false};
}

Artifact run_cascade(const RunConfig& c) {
  EntireFunction f = resolve_function(c);
  double r = require(c.r1, "--r1", "cascade");
  double k = require(c.k, "--k", "cascade");
  CascadeCheck chk = cascade_check(f, r, k);
  if (c.d) chk.constants = cascade_constants(r, k, *c.d);
  Json j = to_json(chk);
  j["function"] = function_to_json(f);
  return Artifact{j, {}, false};
}

std::string knots_csv(const GrowthModel& g) {
  std::ostringstream csv;
  csv << "n,h,x,phi_h,phi_x\n";
  auto knots = g.knots();
  for (std::size_t n = 0; n < knots.size(); ++n) {
    csv << n << ',' << knots[n].height() << ',' << format_double(knots[n].base()) << ',';
    try {
      TowerReal v = g.phi(knots[n]);
      csv << v.height() << ',' << format_double(v.base()) << '\n';
    } catch (const EvaluatorRefusal&) {
      csv << ",\n";
    }
  }
  return csv.str();
}

Artifact run_example(const RunConfig& c) {
  Artifact a;
  if (c.which == "6.2") {
    Example62Model model = build_example62(c.a.value_or(0.25), c.b.value_or(0.75));
    ConstructionReport rep = verify_example62(model, c.lags, c.depth);
    a.json = Json{{"command", "example"}, {"which", c.which}, {"model", model_json(model)},
                  {"report", to_json(rep)}};
    a.csv = knots_csv(model);
    a.has_csv = true;
  } else if (c.which == "6.1") {
    Example61Model model = build_example61();
    ConstructionReport rep = verify_example61(model, c.k.value_or(2.0), 0, model.chords() - 1);
    a.json = Json{{"command", "example"}, {"which", c.which}, {"model", model_json(model)},
                  {"report", to_json(rep)}};
    a.csv = knots_csv(model);
    a.has_csv = true;
  } else if (c.which == "lacunary") {
    double eps = c.eps.size() >= 1 ? c.eps[0] : 0.5;
    double eps_prime = c.eps.size() >= 2 ? c.eps[1] : 0.8;
    std::size_t m_max = 12;
    if (c.m) {
      if (!(*c.m >= 1.0 && *c.m == std::floor(*c.m))) {
        throw std::invalid_argument("lacunary: --m must be a positive integer");
      }
      m_max = static_cast<std::size_t>(*c.m);
    }
    LacunaryRecipe recipe = build_lacunary_recipe(eps, eps_prime, m_max);
    std::optional<double> t_r;
    if (c.r1) t_r = std::log(*c.r1);
    a.json = Json{{"command", "example"},
                  {"which", c.which},
                  {"recipe", to_json(recipe)},
                  {"report", to_json(verify_lacunary_recipe(recipe))},
                  {"nonregularity", to_json(verify_nonregularity(recipe, t_r, c.lags, c.depth))}};
  } else {
    throw std::invalid_argument("example: --which must be 6.1, 6.2 or lacunary");
  }
  return a;
}

Artifact run_thm43(const RunConfig& c) {
  GrowthPtr g = resolve_growth(c);
  Thm43Input in;
  in.k = c.k.value_or(2.0);
  in.d = c.d;
  if (!c.d) in.c = c.m;
  ConstructionReport rep = thm43_equivalence_test(*g, in, require_grid(c, "t"), c.jobs);
  Json j{{"command", "thm43"}, {"function", growth_descriptor(*g)}, {"report", to_json(rep)}};
  return Artifact{j, {}, false};
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("--grid must be lo:hi:n or lo:hi:n:log");
  }
  GridSpec g;
  g.lo = parse_number(parts[0]);
  g.hi = parse_number(parts[1]);
  double n = parse_number(parts[2]);
  if (!(n >= 1.0 && n == std::floor(n) && n < 1e8)) {
    throw std::invalid_argument("--grid count must be a positive integer");
  }
  g.n = static_cast<std::size_t>(n);
  if (parts.size() == 4) {
    if (parts[3] != "log") throw std::invalid_argument("--grid suffix must be 'log'");
    g.log_spaced = true;
  }
  return g;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void RunConfig::validate() const {
  if (grid) {
    // A single-point grid may have lo == hi.
    bool ordered = grid->hi > grid->lo || (grid->n == 1 && grid->hi == grid->lo);
    if (!(grid->lo > 0.0 && ordered && std::isfinite(grid->hi))) {
      throw std::invalid_argument("--grid must be positive and increasing");
    }
  }
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("--eps values must lie in (0, 1)");
  }
  if (depth < 1) throw std::invalid_argument("--depth must be >= 1");
  if (lags < 1) throw std::invalid_argument("--lags must be >= 1");
  if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  if (format != "json" && format != "csv") throw std::invalid_argument("--format must be json or csv");
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                     std::ostream& err, int& status) {
  RunConfig cfg;
  CLI::App app{"Growth, regularity and escape classification for entire functions"};
  app.name("qfast");
  app.require_subcommand(1);

  std::string eps_text;
  std::string grid_text;
  double k = 0, d = 0, m = 0, alpha = 0, beta = 0, mu = 0, r1 = 0, r2 = 0, a = 0, b = 0;
  app.add_option("--function", cfg.function, "builtin: exp, lacunary5, e62model, e61model");
  app.add_option("--descriptor", cfg.descriptor, "function descriptor JSON file");
  app.add_option("--criterion", cfg.criterion, "regularity criterion id");
  app.add_option("--eps", eps_text, "comma-separated epsilon list");
  app.add_option("--grid", grid_text, "lo:hi:n[:log]");
  app.add_option("--depth", cfg.depth, "orbit horizon N");
  app.add_option("--lags", cfg.lags, "lag bound L");
  auto* ok = app.add_option("--k", k);
  auto* od = app.add_option("--d", d);
  auto* om = app.add_option("--m", m);
  auto* oalpha = app.add_option("--alpha", alpha);
  auto* obeta = app.add_option("--beta", beta);
  auto* omu = app.add_option("--mu", mu);
  auto* or1 = app.add_option("--r1", r1);
  auto* or2 = app.add_option("--r2", r2);
  app.add_option("--which", cfg.which, "example: 6.1, 6.2 or lacunary");
  auto* oa = app.add_option("--a", a);
  auto* ob = app.add_option("--b", b);
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_flag("--strict", cfg.strict, "exit 2 on any violated verdict");

  const char* names[][2] = {{"modulus", "maximum and minimum modulus on a radius grid"},
                            {"orbit", "orbit classification against the escape thresholds"},
                            {"regularity", "run a regularity criterion"},
                            {"beurling", "Beurling-type minimum modulus inequality"},
                            {"cascade", "growth cascade constants and check"},
                            {"example", "build and verify an explicit construction"},
                            {"thm43", "equivalent forms of log-regularity"}};
  for (const auto& [name, desc] : names) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    if (std::string(name) == "orbit") sub->add_option("seeds", cfg.seeds, "JSON list of seed points");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    status = code == 0 ? 0 : 1;
    return std::nullopt;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  auto take = [](CLI::Option* o, double v, std::optional<double>& dst) {
    if (o->count() > 0) dst = v;
  };
  take(ok, k, cfg.k);
  take(od, d, cfg.d);
  take(om, m, cfg.m);
  take(oalpha, alpha, cfg.alpha);
  take(obeta, beta, cfg.beta);
  take(omu, mu, cfg.mu);
  take(or1, r1, cfg.r1);
  take(or2, r2, cfg.r2);
  take(oa, a, cfg.a);
  take(ob, b, cfg.b);
  try {
    if (!eps_text.empty()) cfg.eps = parse_list(eps_text);
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
  } catch (const std::invalid_argument& e) {
    err << "qfast: " << e.what() << "\n";
    status = 1;
    return std::nullopt;
  }
  status = 0;
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Artifact a;
  try {
    config.validate();
    const std::string& s = config.subcommand;
    if (s == "modulus") {
      a = run_modulus(config);
    } else if (s == "orbit") {
      a = run_orbit(config);
    } else if (s == "regularity") {
      a = run_regularity(config);
    } else if (s == "beurling") {
      a = run_beurling(config);
    } else if (s == "cascade") {
      a = run_cascade(config);
    } else if (s == "example") {
      a = run_example(config);
    } else if (s == "thm43") {
      a = run_thm43(config);
    } else {
      throw std::invalid_argument("unknown subcommand '" + s + "'");
    }
    if (config.format == "csv" && !a.has_csv) {
      throw std::invalid_argument(s + ": csv output is not available");
    }
  } catch (const std::exception& e) {
    err << "qfast: " << e.what() << "\n";
    return 1;
  }

  const std::string body = config.format == "csv" ? a.csv : dump(a.json);
  if (config.out.empty()) {
    out << body;
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f || !(f << body)) {
      err << "qfast: cannot write " << config.out << "\n";
      return 1;
    }
  }
  return config.strict && has_violation(a.json) ? 2 : 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int status = 0;
  auto cfg = parse_args(argc, argv, out, err, status);
  if (!cfg) return status;
  return run(*cfg, out, err);
}

}  // namespace qfast::cli
