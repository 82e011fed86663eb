#pragma once

// JSON and CSV serialization of results, and function descriptors.
//
// Objects keep keys sorted and doubles use the shortest round-trip form, so
// equal results always serialize to identical bytes. Non-finite doubles are
// written as the strings "inf", "-inf" and "nan".

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/escape.hpp"
#include "qfast/growth.hpp"
#include "qfast/regularity.hpp"
#include "qfast/xreal.hpp"

namespace qfast {

using Json = nlohmann::json;

Json number_json(double v);
Json to_json(const TowerReal& v);
Json to_json(const Grid& g);
Json to_json(const Witness& w);
Json to_json(const RegularityVerdict& v);
Json to_json(const ModulusResult& m);
Json to_json(const OrbitSequence& o);
Json to_json(const OrbitRecord& r);
Json to_json(const Certificate& c);
Json to_json(const Classification& c);
Json to_json(const BeurlingReport& b);
Json to_json(const CascadeConstants& c);
Json to_json(const CascadeCheck& c);
Json to_json(const SandwichReport& s);
Json to_json(const CheckLine& c);
Json to_json(const ConstructionReport& r);
Json to_json(const LacunaryRecipe& r);
/// Name, provenance and knots with their values.
Json model_json(const GrowthModel& g);

TowerReal tower_from_json(const Json& j);

/// {"variant": "exp", "lambda": ...}, {"variant": "lacunary", "zeros": [...],
/// "continuation_ratio": q} or {"variant": "series", "coeffs": [[re, im], ...],
/// "tail": "none" | "geometric" | "factorial", "tail_a", "tail_rho"}.
/// Throws PreconditionError on malformed input.
EntireFunction function_from_json(const Json& j, const std::string& name = "descriptor");
Json function_to_json(const EntireFunction& f);
EntireFunction load_function_descriptor(const std::string& path);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

/// Header n,h,x,map,epsilon then one row per orbit value.
void write_orbit_csv(std::ostream& os, const OrbitSequence& o);
/// Header n,h,x,zero for the moduli of a point orbit.
void write_orbit_record_csv(std::ostream& os, const OrbitRecord& r);

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

}  // namespace qfast
