#include "arbfree/cli.hpp"

#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "arbfree/io.hpp"

namespace arbfree {

namespace {

struct Outcome {
  int code = kExitFree;
  Json report;
  std::optional<Json> error;
};

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

// Flattens a report into (dotted key, values) rows shared by the text and
// CSV renderings.
void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
    return;
  }
  std::vector<std::string> row{prefix};
  if (j.is_array()) {
    for (const auto& e : j) row.push_back(e.is_primitive() ? scalar_text(e) : e.dump());
  } else if (!j.is_null()) {
    row.push_back(scalar_text(j));
  }
  rows.push_back(std::move(row));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_rows(const Json& report, OutputFormat format) {
  std::vector<std::vector<std::string>> rows;
  flatten(report, "", rows);
  std::string out;
  for (const auto& row : rows) {
    if (format == OutputFormat::Csv) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(row[i]);
    } else {
      out += row[0] + ":";
      for (std::size_t i = 1; i < row.size(); ++i) out += " " + row[i];
    }
    out += "\n";
  }
  return out;
}

void require_tolerance(double tol) {
  if (!(tol > 0) || !std::isfinite(tol)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
}

template <class T>
Outcome check_market(const Market& market, double tol) {
  const auto report = ftap_equivalence<T>(market, tol);
  return {report.arbitrage.free ? kExitFree : kExitArbitrage, to_json(report), std::nullopt};
}

template <class T>
Outcome measure_market(const Market& market, double tol) {
  const auto measure = martingale_measure<T>(market, tol);
  if (!measure) return {kExitArbitrage, Json{{"measure", nullptr}, {"mode", std::string(to_string(ScalarTraits<T>::mode))}}, std::nullopt};
  Json j = to_json(*measure);
  j["residual"] = to_json(verify_martingale(market, *measure));
  j["mode"] = std::string(to_string(ScalarTraits<T>::mode));
  return {kExitFree, std::move(j), std::nullopt};
}

template <class T>
Outcome price_market(const Market& market, double tol, const std::vector<double>& claim) {
  const auto measure = martingale_measure<T>(market, tol);
  const Json mode = std::string(to_string(ScalarTraits<T>::mode));
  if (!measure) return {kExitArbitrage, Json{{"price", nullptr}, {"mode", mode}}, std::nullopt};
  return {kExitFree, Json{{"price", to_json(price_claim(market, *measure, claim))}, {"mode", mode}}, std::nullopt};
}

Outcome market_outcome(const RunConfig& config, const std::filesystem::path& path,
                       const std::optional<std::vector<double>>& claim) {
  try {
    const Market market = load_market(path);
    const bool exact = config.mode == Mode::Exact;
    switch (config.subcommand) {
    case Subcommand::Check:
      return exact ? check_market<Rational>(market, config.tolerance) : check_market<double>(market, config.tolerance);
    case Subcommand::Measure:
      return exact ? measure_market<Rational>(market, config.tolerance)
                   : measure_market<double>(market, config.tolerance);
    case Subcommand::Price:
      return exact ? price_market<Rational>(market, config.tolerance, *claim)
                   : price_market<double>(market, config.tolerance, *claim);
    default:
      break;
    }
    throw Error(ErrorCode::InvalidParameter, "not a market subcommand");
  } catch (const Error& e) {
    return {kExitError, nullptr, error_json(e)};
  }
}

template <class F>
Json structural(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPointed && e.code() != ErrorCode::DimensionCapExceeded) throw;
    return error_json(e);
  }
}

Json cone_report(const RunConfig& config) {
  if (config.inputs.empty() || config.inputs.size() > 2)
    throw Error(ErrorCode::InvalidParameter, "cone expects a cone file and an optional test cone file");
  const auto k = load_cone(config.inputs[0]);
  Json report;
  report["dim"] = k.dim();
  report["pointed"] = to_json(is_pointed(k));
  report["dual"] = structural([&] { return to_json(dual_cone(k)); });
  if (config.inputs.size() == 2) {
    const auto test = load_cone(config.inputs[1]);
    if (test.dim() != k.dim()) throw Error(ErrorCode::DimensionMismatch, "test cone dimension differs from K");
    bool in_dual = true;
    for (const auto& x : test.generators()) in_dual = in_dual && dual_membership(k, x);
    Json t;
    t["in_dual"] = in_dual;
    t["total"] = to_json(is_total(test, k, config.sample_budget, config.seed));
    t["nonannihilating"] = structural([&] { return to_json(is_nonannihilating(test, k)); });
    t["uniqueness"] = structural([&] { return to_json(uniqueness_probe(k, test)); });
    report["test"] = std::move(t);
  }
  return report;
}

std::string decay_text(const std::vector<DecayRow>& rows) {
  std::ostringstream out;
  out << "N  margin  analytic  arbitrage_free\n";
  for (const auto& r : rows)
    out << r.n << "  " << to_json(r.margin).dump() << "  " << to_json(r.analytic).dump() << "  "
        << (r.arbitrage_free ? "true" : "false") << "\n";
  return out.str();
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (!config.output_path) {
    out << text;
    return;
  }
  std::ofstream file(*config.output_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + config.output_path->string());
  file << text;
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + config.output_path->string());
}

int run_markets(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.empty()) throw Error(ErrorCode::InvalidParameter, "no input file given");
  std::optional<std::vector<double>> claim;
  if (config.subcommand == Subcommand::Price) {
    if (!config.claim_path) throw Error(ErrorCode::InvalidParameter, "price needs --claim <file>");
    claim = load_claim(*config.claim_path);
  }

  std::vector<std::future<Outcome>> jobs;
  for (const auto& path : config.inputs)
    jobs.push_back(std::async(std::launch::async, [&, path] { return market_outcome(config, path, claim); }));
  std::vector<Outcome> outcomes;
  for (auto& job : jobs) outcomes.push_back(job.get());

  const bool multiple = config.inputs.size() > 1;
  const OutputFormat format = config.format == OutputFormat::Auto ? OutputFormat::Json : config.format;
  int code = kExitFree;
  std::string text;
  Json all = Json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.error) {
      Json e = *o.error;
      if (multiple) e["input"] = config.inputs[i].string();
      err << e.dump() << "\n";
      code = kExitError;
      continue;
    }
    if (code != kExitError) code = std::max(code, o.code);
    if (format == OutputFormat::Json) {
      if (!multiple) {
        text = o.report.dump(2) + "\n";
      } else {
        Json tagged{{"input", config.inputs[i].string()}};
        for (const auto& [key, value] : o.report.items()) tagged[key] = value;
        all.push_back(std::move(tagged));
      }
    } else {
      if (multiple) {
        Json header{{"input", config.inputs[i].string()}};
        text += render_rows(header, format);
      }
      text += render_rows(o.report, format);
    }
  }
  if (format == OutputFormat::Json && multiple) text = all.dump(2) + "\n";
  if (!text.empty()) emit(config, text, out);
  return code;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    require_tolerance(config.tolerance);
    switch (config.subcommand) {
    case Subcommand::Check:
    case Subcommand::Measure:
    case Subcommand::Price:
      return run_markets(config, out, err);
    case Subcommand::Cone: {
      const Json report = cone_report(config);
      const auto format = config.format == OutputFormat::Auto ? OutputFormat::Json : config.format;
      emit(config, format == OutputFormat::Json ? report.dump(2) + "\n" : render_rows(report, format), out);
      return kExitFree;
    }
    case Subcommand::Counterexample: {
      const auto rows = decay_report(config.n, config.mode);
      std::string text;
      switch (config.format) {
      case OutputFormat::Auto:
      case OutputFormat::Csv: text = decay_csv(rows); break;
      case OutputFormat::Json: text = to_json(rows).dump(2) + "\n"; break;
      case OutputFormat::Text: text = decay_text(rows); break;
      }
      emit(config, text, out);
      return kExitFree;
    }
    }
    throw Error(ErrorCode::InvalidParameter, "unknown subcommand");
  } catch (const Error& e) {
    err << error_json(e).dump() << "\n";
    return kExitError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arbitrage and martingale-measure checker for one-period markets", "arbfree"};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> inputs;
  std::string output_path, claim_path;
  bool exact = false;
  const std::map<std::string, OutputFormat> formats{
      {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}, {"text", OutputFormat::Text}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", config.tolerance, "Positivity threshold for float verdicts")->capture_default_str();
    sub->add_flag("--exact", exact, "Solve in exact rational arithmetic");
    sub->add_option("--out", output_path, "Write the report to this file");
    sub->add_option("--format", config.format, "Output format: json, csv or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  auto* check = app.add_subcommand("check", "Arbitrage verdict, witness and state-price measure");
  check->add_option("inputs", inputs, "Market files (.json or .csv)")->required();
  common(check);

  auto* measure = app.add_subcommand("measure", "Strictly positive martingale measure");
  measure->add_option("inputs", inputs, "Market files (.json or .csv)")->required();
  common(measure);

  auto* price = app.add_subcommand("price", "Arbitrage-free price of a contingent claim");
  price->add_option("inputs", inputs, "Market files (.json or .csv)")->required();
  price->add_option("--claim", claim_path, "Claim payoff per scenario (JSON array or one CSV line)")->required();
  common(price);

  auto* cone = app.add_subcommand("cone", "Pointedness, dual cone, totality and nonannihilation verdicts");
  cone->add_option("inputs", inputs, "Cone K, then optionally a test cone (cone JSON)")->required()->expected(1, 2);
  cone->add_option("--budget", config.sample_budget, "Samples for totality above the exact dimension cap")
      ->capture_default_str();
  cone->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
  common(cone);

  auto* counter = app.add_subcommand("counterexample", "Separation margin decay of the truncated l1 example");
  counter->add_option("--n", config.n, "Largest truncation N")->required();
  common(counter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << Json{{"error", "InvalidParameter"}, {"detail", e.what()}}.dump() << "\n";
    return kExitError;
  }

  if (check->parsed()) config.subcommand = Subcommand::Check;
  else if (measure->parsed()) config.subcommand = Subcommand::Measure;
  else if (price->parsed()) config.subcommand = Subcommand::Price;
  else if (cone->parsed()) config.subcommand = Subcommand::Cone;
  else config.subcommand = Subcommand::Counterexample;

  config.inputs.assign(inputs.begin(), inputs.end());
  config.mode = exact ? Mode::Exact : Mode::Float;
  if (!output_path.empty()) config.output_path = output_path;
  if (!claim_path.empty()) config.claim_path = claim_path;
  return run(config, out, err);
}

} // namespace arbfree
