#include "arbfree/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace arbfree {

namespace {

[[noreturn]] void parse_fail(const std::string& detail) { throw Error(ErrorCode::ParseError, detail); }

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    if (auto pos = what.find(": ", what.find("parse error")); pos != std::string::npos) what = what.substr(pos + 2);
    parse_fail("line " + line_col(text, at) + ": " + what);
  } catch (const Json::out_of_range& e) {
    // Raised for numbers that overflow a double.
    std::string what = e.what();
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    parse_fail(what);
  }
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) parse_fail(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path + ": missing key \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) parse_fail(path + ": number is not finite");
  return x;
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string emit_double(double x) { return Json(x).dump(); }

struct CsvField {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::vector<CsvField> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<CsvField> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    std::size_t lead = 0;
    while (lead < field.size() && (field[lead] == ' ' || field[lead] == '\t')) ++lead;
    field.remove_prefix(lead);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.push_back({field, line_no, start + lead + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double csv_number(const CsvField& f) {
  const auto where = [&] { return "line " + std::to_string(f.line) + ":" + std::to_string(f.column) + ": "; };
  if (f.text.empty()) parse_fail(where() + "empty field");
  std::string_view s = f.text;
  if (s.front() == '+') s.remove_prefix(1);
  double x = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec == std::errc::result_out_of_range) parse_fail(where() + "number out of range: " + std::string(f.text));
  if (ec != std::errc() || end != s.data() + s.size())
    parse_fail(where() + "not a number: " + std::string(f.text));
  if (!std::isfinite(x)) parse_fail(where() + "number is not finite: " + std::string(f.text));
  return x;
}

std::vector<std::pair<std::size_t, std::string_view>> csv_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

bool has_csv_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv";
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return buf.str();
}

Market parse_market_json(std::string_view text) {
  const Json j = parse_json(text);
  MarketData raw;
  raw.rate = number(member(j, "r", "market"), "r");
  if (auto it = j.find("assets"); it != j.end()) {
    if (!it->is_array()) parse_fail("assets: expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) parse_fail("assets[" + std::to_string(i) + "]: expected a string");
      raw.assets.push_back((*it)[i].get<std::string>());
    }
  }
  raw.prices = numbers(member(j, "pi", "market"), "pi");
  const Json& scenarios = member(j, "scenarios", "market");
  if (!scenarios.is_array()) parse_fail("scenarios: expected an array");
  for (std::size_t w = 0; w < scenarios.size(); ++w) {
    const std::string path = "scenarios[" + std::to_string(w) + "]";
    raw.probabilities.push_back(number(member(scenarios[w], "p", path), path + ".p"));
    raw.scenario_prices.push_back(numbers(member(scenarios[w], "S", path), path + ".S"));
  }
  return validate_market(raw);
}

Market parse_market_csv(std::string_view text) {
  const auto lines = csv_lines(text);
  if (lines.size() < 3) parse_fail("CSV market needs an r= line, a header line and a pi line");
  MarketData raw;

  const auto [r_line, r_text] = lines[0];
  const auto first = split_fields(r_text, r_line);
  if (first.size() != 1 || !first[0].text.starts_with("r="))
    parse_fail("line " + std::to_string(r_line) + ":1: expected r=<number>");
  CsvField rate = first[0];
  rate.text.remove_prefix(2);
  rate.column += 2;
  raw.rate = csv_number(rate);

  const auto [h_line, h_text] = lines[1];
  const auto header = split_fields(h_text, h_line);
  if (header[0].text != "p") parse_fail("line " + std::to_string(h_line) + ":1: header must start with p");
  for (std::size_t i = 1; i < header.size(); ++i) raw.assets.emplace_back(header[i].text);
  const std::size_t d = raw.assets.size();

  auto row_values = [&](std::size_t index, std::string_view label_expected) {
    const auto [line_no, line] = lines[index];
    const auto fields = split_fields(line, line_no);
    if (fields.size() != d + 1)
      parse_fail("line " + std::to_string(line_no) + ":1: expected " + std::to_string(d + 1) + " fields, found " +
                 std::to_string(fields.size()));
    if (!label_expected.empty() && fields[0].text != label_expected)
      parse_fail("line " + std::to_string(line_no) + ":1: expected row label " + std::string(label_expected));
    return fields;
  };

  const auto pi = row_values(2, "pi");
  for (std::size_t i = 1; i <= d; ++i) raw.prices.push_back(csv_number(pi[i]));
  for (std::size_t k = 3; k < lines.size(); ++k) {
    const auto fields = row_values(k, "");
    raw.probabilities.push_back(csv_number(fields[0]));
    std::vector<double> row;
    for (std::size_t i = 1; i <= d; ++i) row.push_back(csv_number(fields[i]));
    raw.scenario_prices.push_back(std::move(row));
  }
  return validate_market(raw);
}

std::string emit_market_json(const Market& market) {
  Json j;
  j["r"] = market.rate();
  j["assets"] = market.assets();
  j["pi"] = market.prices();
  Json scenarios = Json::array();
  for (std::size_t w = 0; w < market.num_scenarios(); ++w) {
    const auto row = market.scenario_prices().row(w);
    scenarios.push_back(
        Json{{"p", market.probabilities()[w]}, {"S", std::vector<double>(row.begin(), row.end())}});
  }
  j["scenarios"] = std::move(scenarios);
  return j.dump(2) + "\n";
}

std::string emit_market_csv(const Market& market) {
  std::string out = "r=" + emit_double(market.rate()) + "\np";
  for (const auto& a : market.assets()) out += "," + a;
  out += "\npi";
  for (double x : market.prices()) out += "," + emit_double(x);
  out += "\n";
  for (std::size_t w = 0; w < market.num_scenarios(); ++w) {
    out += emit_double(market.probabilities()[w]);
    for (double x : market.scenario_prices().row(w)) out += "," + emit_double(x);
    out += "\n";
  }
  return out;
}

Market load_market(const std::filesystem::path& path) {
  const auto text = read_file(path);
  return has_csv_extension(path) ? parse_market_csv(text) : parse_market_json(text);
}

PolyhedralCone parse_cone_json(std::string_view text) {
  const Json j = parse_json(text);
  const Json& dim = member(j, "dim", "cone");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) parse_fail("dim: expected a positive integer");
  const Json& gens = member(j, "generators", "cone");
  if (!gens.is_array()) parse_fail("generators: expected an array");
  std::vector<Vector<double>> rows;
  for (std::size_t k = 0; k < gens.size(); ++k)
    rows.push_back(numbers(gens[k], "generators[" + std::to_string(k) + "]"));
  return PolyhedralCone(static_cast<std::size_t>(dim.get<long long>()), rows);
}

std::string emit_cone_json(const PolyhedralCone& cone) { return to_json(cone).dump(2) + "\n"; }

PolyhedralCone load_cone(const std::filesystem::path& path) { return parse_cone_json(read_file(path)); }

std::vector<double> load_claim(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (has_csv_extension(path)) {
    const auto lines = csv_lines(text);
    if (lines.size() != 1) parse_fail("claim CSV must have exactly one line");
    std::vector<double> out;
    for (const auto& f : split_fields(lines[0].second, lines[0].first)) out.push_back(csv_number(f));
    return out;
  }
  const Json j = parse_json(text);
  if (j.is_object()) return numbers(member(j, "claim", "claim file"), "claim");
  return numbers(j, "claim");
}

Json to_json(double x) { return Json(x); }

Json to_json(const Rational& x) { return Json(x.get_str()); }

Json to_json(const PolyhedralCone& cone) {
  Json gens = Json::array();
  for (const auto& g : cone.generators()) gens.push_back(g);
  return Json{{"dim", cone.dim()}, {"generators", std::move(gens)}};
}

Json to_json(const TotalityVerdict& v) {
  return Json{{"status", std::string(to_string(v.status))},
              {"witness", v.witness ? Json(*v.witness) : Json(nullptr)},
              {"witness_distance", v.witness_distance ? Json(*v.witness_distance) : Json(nullptr)},
              {"samples_used", v.samples_used}};
}

Json to_json(const NonannihilatingResult& r) {
  Json witness = nullptr;
  if (r.witness) witness = Json{{"functional", r.witness->first}, {"generator", r.witness->second}};
  return Json{{"nonannihilating", r.nonannihilating}, {"witness", std::move(witness)}};
}

Json to_json(const PointednessResult& r) {
  return Json{{"pointed", r.pointed}, {"witness", r.witness ? Json(*r.witness) : Json(nullptr)}};
}

Json to_json(const UniquenessReport& r) {
  return Json{{"nonannihilating", to_json(r.nonannihilating)},
              {"all_generators_interior", r.all_generators_interior},
              {"boundary_generator", r.boundary_generator ? Json(*r.boundary_generator) : Json(nullptr)},
              {"totality", to_json(r.totality)},
              {"interior_consequence", {{"applies", r.interior_consequence_applies},
                                        {"holds", r.interior_consequence_holds}}},
              {"totality_consequence", {{"applies", r.totality_consequence_applies},
                                        {"holds", r.totality_consequence_holds}}},
              {"consistent", r.consistent()}};
}

Json to_json(const std::vector<DecayRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back(Json{{"N", r.n}, {"margin", r.margin}, {"analytic", r.analytic}, {"arbitrage_free", r.arbitrage_free}});
  return out;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::string out = "N,margin,analytic,arbitrage_free\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + emit_double(r.margin) + "," + emit_double(r.analytic) + "," +
           (r.arbitrage_free ? "true" : "false") + "\n";
  return out;
}

Json error_json(const Error& e) { return Json{{"error", std::string(e.code_name())}, {"detail", e.what()}}; }

} // namespace arbfree
