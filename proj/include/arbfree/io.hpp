#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arbfree/cones.hpp"
#include "arbfree/counterexample.hpp"
#include "arbfree/ftap.hpp"
#include "arbfree/market.hpp"

namespace arbfree {

using Json = nlohmann::ordered_json;

/// {"r": x, "assets": [...], "pi": [...], "scenarios": [{"p": x, "S": [...]}, ...]}
/// Syntax errors carry line:column. NaN/Inf and out-of-range numbers are
/// ParseErrors; semantic problems surface as the Market validation codes.
Market parse_market_json(std::string_view text);

/// r=<x>
/// p,<asset names...>
/// pi,<prices...>
/// <p>,<S...>          one row per scenario
Market parse_market_csv(std::string_view text);

std::string emit_market_json(const Market& market);
std::string emit_market_csv(const Market& market);

/// Dispatches on extension: ".csv" is CSV, anything else JSON.
Market load_market(const std::filesystem::path& path);

/// {"dim": n, "generators": [[...], ...]}
PolyhedralCone parse_cone_json(std::string_view text);
std::string emit_cone_json(const PolyhedralCone& cone);
PolyhedralCone load_cone(const std::filesystem::path& path);

/// A JSON array, {"claim": [...]}, or (for ".csv") comma separated values.
std::vector<double> load_claim(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Doubles become JSON numbers; rationals become "p/q" strings.
Json to_json(double x);
Json to_json(const Rational& x);

template <class T>
Json to_json(const Vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

template <class T>
Json to_json(const StatePriceMeasure<T>& m) {
  return Json{{"q", to_json(m.q)}, {"density", to_json(m.density)}, {"margin", to_json(m.margin)}};
}

template <class T>
Json to_json(const EquivalenceReport<T>& r) {
  return Json{{"free", r.arbitrage.free},
              {"witness", r.arbitrage.witness ? to_json(*r.arbitrage.witness) : Json(nullptr)},
              {"measure", r.measure ? to_json(*r.measure) : Json(nullptr)},
              {"xor_holds", r.xor_holds},
              {"mode", std::string(to_string(r.mode))},
              {"p_independent", r.p_independent}};
}

Json to_json(const PolyhedralCone& cone);
Json to_json(const TotalityVerdict& v);
Json to_json(const NonannihilatingResult& r);
Json to_json(const PointednessResult& r);
Json to_json(const UniquenessReport& r);
Json to_json(const std::vector<DecayRow>& rows);

std::string decay_csv(const std::vector<DecayRow>& rows);

/// The payload of an error report: {"error": code, "detail": message}.
Json error_json(const Error& e);

} // namespace arbfree
