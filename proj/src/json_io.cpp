#include "mermin/json_io.hpp"

#include "mermin/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mermin {

namespace {

/// SAX handler building a Json document in which floating-point literals are
/// kept verbatim as strings.
class ExactNumberBuilder : public nlohmann::json_sax<Json> {
 public:
  explicit ExactNumberBuilder(Json& root) : root_(root) {}

  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(v); }
  bool number_unsigned(number_unsigned_t v) override { return put(v); }
  bool number_float(number_float_t, string_t const& literal) override { return put(literal); }
  bool string(string_t& v) override { return put(v); }
  bool binary(binary_t& v) override { return put(Json::binary(v)); }

  bool start_object(std::size_t) override {
    stack_.push_back(insert(Json::object()));
    return true;
  }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    stack_.push_back(insert(Json::array()));
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, std::string const&, nlohmann::detail::exception const& ex) override {
    throw ParseError("JSON parse error at byte " + std::to_string(position) + ": " + ex.what());
  }

 private:
  template <typename T>
  bool put(T&& v) {
    insert(Json(std::forward<T>(v)));
    return true;
  }

  Json* insert(Json v) {
    if (stack_.empty()) {
      root_ = std::move(v);
      return &root_;
    }
    Json& parent = *stack_.back();
    if (parent.is_array()) {
      parent.push_back(std::move(v));
      return &parent.back();
    }
    parent[key_] = std::move(v);
    return &parent[key_];
  }

  Json& root_;
  std::vector<Json*> stack_;
  std::string key_;
};

Json const& require(Json const& j, char const* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing JSON field '") + key + "'");
  return j.at(key);
}

Json outcome_pair_json(Marginal const& m) { return Json{{"+1", to_json(m.green)}, {"-1", to_json(m.red)}}; }

Json optional_rational(std::optional<Rational> const& r) { return r ? to_json(*r) : Json(nullptr); }

}  // namespace

Json parse_json_exact(std::string_view text) {
  Json root;
  ExactNumberBuilder builder(root);
  Json::sax_parse(text.begin(), text.end(), &builder);
  return root;
}

std::string read_text_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(std::filesystem::path const& path, std::string const& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Json load_json_file(std::filesystem::path const& path) { return parse_json_exact(read_text_file(path)); }

Rational rational_from_json(Json const& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(Integer(j.get<std::uint64_t>()));
  throw ParseError("expected a rational, got " + j.dump());
}

Json to_json(Rational const& r) { return to_string(r); }

ProbabilityVector8 parse_probability_spec(std::string_view spec) {
  if (spec == "uniform") return ProbabilityVector8::uniform();
  if (spec.starts_with("point:")) return ProbabilityVector8::point_mass(InstructionSet::parse(spec.substr(6)));
  std::vector<Rational> raw;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto const comma = spec.find(',', start);
    auto const end = comma == std::string_view::npos ? spec.size() : comma;
    raw.push_back(parse_rational(spec.substr(start, end - start)));
    start = end + 1;
  }
  return ProbabilityVector8::validate(raw);
}

ProbabilityVector8 probability_vector_from_json(Json const& j) {
  if (j.is_string()) return parse_probability_spec(j.get<std::string>());
  if (j.is_object() && j.contains("p")) return probability_vector_from_json(j.at("p"));
  std::vector<Rational> raw;
  if (j.is_array()) {
    for (auto const& entry : j) raw.push_back(rational_from_json(entry));
  } else if (j.is_object()) {
    for (auto lambda : all_instruction_sets()) {
      raw.push_back(j.contains(lambda.name()) ? rational_from_json(j.at(lambda.name())) : Rational(0));
    }
    for (auto const& [k, v] : j.items()) InstructionSet::parse(k);
  } else {
    throw ParseError("probability vector must be an array, an object or a spec string");
  }
  return ProbabilityVector8::validate(raw);
}

Json to_json(ProbabilityVector8 const& p) {
  Json out = Json::object();
  for (auto lambda : all_instruction_sets()) out[lambda.name()] = to_json(p[lambda]);
  return out;
}

NineDistributions nine_from_json(Json const& j) {
  Json const& tables = j.is_object() && j.contains("tables") ? j.at("tables") : j;
  if (!tables.is_object()) throw InvalidTables("expected an object of nine tables");
  NineDistributions nine;
  for (int i = 0; i < kPairCount; ++i) {
    auto const pair = SettingPair::from_index(i);
    auto const name = to_string(pair);
    if (!tables.contains(name)) throw InvalidTables("missing table for pair " + name);
    Json const& t = tables.at(name);
    auto& table = nine[pair];
    if (t.is_array()) {
      if (t.size() != 2 || !t[0].is_array() || !t[1].is_array() || t[0].size() != 2 || t[1].size() != 2) {
        throw InvalidTables("table " + name + " must be a 2x2 array");
      }
      for (int cell = 0; cell < 4; ++cell) {
        table.probs(cell) = rational_from_json(t[static_cast<std::size_t>(cell / 2)][static_cast<std::size_t>(cell % 2)]);
      }
    } else if (t.is_object()) {
      for (int cell = 0; cell < 4; ++cell) {
        std::string const label(cell_label(cell));
        if (!t.contains(label)) throw InvalidTables("table " + name + " is missing cell " + label);
        table.probs(cell) = rational_from_json(t.at(label));
      }
    } else {
      throw InvalidTables("table " + name + " must be an object or a 2x2 array");
    }
  }
  for (auto const& [k, v] : tables.items()) {
    try {
      parse_pair(k);
    } catch (ParseError const&) {
      throw InvalidTables("unknown table key '" + k + "'");
    }
  }
  nine.validate();
  return nine;
}

Json to_json(NineDistributions const& nine) {
  Json tables = Json::object();
  for (auto const& table : nine.tables) {
    Json cells = Json::object();
    for (int cell = 0; cell < 4; ++cell) cells[std::string(cell_label(cell))] = to_json(table.probs(cell));
    tables[to_string(table.pair)] = std::move(cells);
  }
  return tables;
}

Json product_table_json() {
  auto const table = product_table();
  Json columns = Json::array();
  for (int i = 0; i < kPairCount; ++i) columns.push_back(to_string(SettingPair::from_index(i)));
  Json rows = Json::array();
  for (auto lambda : all_instruction_sets()) {
    Json products = Json::array();
    int plus = 0;
    for (int i = 0; i < kPairCount; ++i) {
      products.push_back(table(lambda.row(), i));
      plus += table(lambda.row(), i) > 0 ? 1 : 0;
    }
    rows.push_back(Json{{"instruction_set", lambda.name()},
                        {"products", std::move(products)},
                        {"plus_entries", plus},
                        {"minus_entries", kPairCount - plus}});
  }
  return Json{{"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

std::string product_table_text() {
  auto const table = product_table();
  std::ostringstream out;
  out << "L  ";
  for (int i = 0; i < kPairCount; ++i) {
    auto const p = SettingPair::from_index(i);
    out << " A" << to_char(p.left) << "B" << to_char(p.right);
  }
  out << '\n';
  for (auto lambda : all_instruction_sets()) {
    out << lambda.name();
    for (int i = 0; i < kPairCount; ++i) out << (table(lambda.row(), i) > 0 ? "   +1" : "   -1");
    out << '\n';
  }
  return out.str();
}

std::string product_table_csv() {
  auto const table = product_table();
  std::ostringstream out;
  out << "instruction_set";
  for (int i = 0; i < kPairCount; ++i) out << ',' << to_string(SettingPair::from_index(i));
  out << '\n';
  for (auto lambda : all_instruction_sets()) {
    out << lambda.name();
    for (int i = 0; i < kPairCount; ++i) out << ',' << table(lambda.row(), i);
    out << '\n';
  }
  return out.str();
}

Json to_json(BoundReport const& report, Rational const& average_eq2) {
  Json rows = Json::array();
  for (auto lambda : report.equality_rows) rows.push_back(lambda.name());
  return Json{{"average", to_json(report.average)},
              {"bound", to_json(report.bound)},
              {"satisfied", report.satisfied},
              {"margin", to_json(report.margin)},
              {"equality", report.equality()},
              {"equality_rows", std::move(rows)},
              {"average_square_sum", to_json(average_eq2)}};
}

Json to_json(MarginalReport const& report) {
  Json checks = Json::array();
  for (auto const& check : report.checks) {
    Json marginals = Json::object();
    Json discrepancies = Json::object();
    for (auto remote : kSettings) {
      auto const k = static_cast<std::size_t>(index(remote));
      marginals[std::string(1, to_char(remote))] = outcome_pair_json(check.marginals[k]);
      discrepancies[std::string(1, to_char(remote))] = to_json(check.discrepancies[k]);
    }
    checks.push_back(Json{{"station", check.station},
                          {"setting", std::string(1, to_char(check.setting))},
                          {"consistent", check.consistent},
                          {"marginals_by_remote_setting", std::move(marginals)},
                          {"discrepancies", std::move(discrepancies)}});
  }
  return Json{{"consistent", report.consistent}, {"checks", std::move(checks)}};
}

Json to_json(RealizabilityResult const& result) {
  Json out{{"status", result.feasible() ? "feasible" : "infeasible"}};
  out["witness"] = result.witness ? to_json(*result.witness) : Json(nullptr);
  if (result.certificate) {
    Json coefficients = Json::object();
    auto const& y = result.certificate->coefficients;
    for (int i = 0; i < y.size(); ++i) {
      coefficients[to_string(SettingPair::from_index(i / 4)) + std::string(cell_label(i % 4))] = to_json(y(i));
    }
    out["certificate"] = std::move(coefficients);
  } else {
    out["certificate"] = nullptr;
  }
  return out;
}

Json to_json(RealizabilityGap const& gap) {
  return Json{{"gap", to_json(gap.gap)}, {"gap_decimal", to_double(gap.gap)}, {"nearest", to_json(gap.nearest)}};
}

namespace {

Json agreement_json(AgreementCounts const& c) {
  return Json{{"runs", c.runs},
              {"agreements", c.agreements},
              {"agreement_rate", optional_rational(c.rate())},
              {"equal_time_runs", c.equal_time_runs},
              {"equal_time_agreements", c.equal_time_agreements},
              {"equal_time_agreement_rate", optional_rational(c.equal_time_rate())}};
}

}  // namespace

Json to_json(PerfectCorrelationReport const& report) {
  Json per_setting = Json::object();
  for (auto s : kSettings) {
    per_setting[std::string(1, to_char(s))] = agreement_json(report.per_setting[static_cast<std::size_t>(index(s))]);
  }
  return Json{{"overall", agreement_json(report.overall)}, {"per_setting", std::move(per_setting)}};
}

Json to_json(SettingIndependenceResult const& result) {
  Json out{{"passed", result.passed}, {"probes_run", result.probes_run}};
  if (result.witness) {
    auto const& w = *result.witness;
    Json messages = Json::object();
    for (auto s : kSettings) messages[std::string(1, to_char(s))] = w.messages[static_cast<std::size_t>(index(s))].bits;
    out["witness"] = Json{{"probe_id", w.probe_id},
                          {"time", to_string(w.time)},
                          {"history_length", w.history.size()},
                          {"messages_by_setting", std::move(messages)}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(Estimate const& e) {
  return Json{{"value", e.value}, {"std_error", e.std_error}, {"n", e.n}};
}

Json to_json(ModelReport const& report) {
  Json counts = Json::object();
  for (int i = 0; i < kPairCount; ++i) {
    auto const pair = SettingPair::from_index(i);
    Json cells = Json::object();
    for (int cell = 0; cell < 4; ++cell) {
      cells[std::string(cell_label(cell))] = report.stats.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(cell)];
    }
    counts[to_string(pair)] = std::move(cells);
  }
  Json empty = Json::array();
  for (auto p : report.empty_pairs) empty.push_back(to_string(p));

  Json out{{"model", report.model_name}, {"runs", report.runs}, {"seed", report.seed}};
  out["per_pair_counts"] = std::move(counts);
  out["empty_pairs"] = std::move(empty);
  out["per_pair_tables"] = report.empirical ? to_json(*report.empirical) : Json(nullptr);
  out["overall_average_uniform"] = optional_rational(report.average_uniform);
  out["overall_average_runweighted"] = to_json(report.average_runweighted);
  out["estimate"] = to_json(report.estimate);
  out["realizability"] = report.realizability ? to_json(*report.realizability) : Json(nullptr);
  out["realizability_gap"] = report.realizability_gap ? to_json(*report.realizability_gap) : Json(nullptr);
  out["marginals"] = report.marginals ? to_json(*report.marginals) : Json(nullptr);
  out["perfect_correlation"] = to_json(report.perfect_correlation);
  out["message_audit"] = report.message_audit ? to_json(*report.message_audit) : Json(nullptr);
  return out;
}

Json to_json(AuditResult const& result) {
  return Json{{"ok", result.ok},
              {"counted", result.counted},
              {"runs", result.runs},
              {"overcount_factor", optional_rational(result.overcount_factor)}};
}

Json to_json(CountLedger const& ledger) {
  Json entries = Json::array();
  for (auto const& e : ledger.entries) entries.push_back(Json{{"label", e.label}, {"count", e.count}});
  return Json{{"declared_run_count", ledger.declared_run_count}, {"entries", std::move(entries)}};
}

CountLedger ledger_from_json(Json const& j) {
  CountLedger ledger;
  if (j.contains("declared_run_count")) ledger.declared_run_count = j.at("declared_run_count").get<std::uint64_t>();
  for (auto const& e : require(j, "entries")) {
    auto const& count = require(e, "count");
    if (!count.is_number_integer() || count.get<std::int64_t>() < 0) {
      throw ParseError("ledger counts must be non-negative integers");
    }
    ledger.entries.push_back({e.value("label", std::string{}), count.get<std::uint64_t>()});
  }
  return ledger;
}

ExtendedModel model_from_json(Json const& j) {
  auto const kind = require(j, "model").get<std::string>();
  ExtendedModel model;
  if (kind == "static") {
    model = static_classical(j.contains("p") ? probability_vector_from_json(j.at("p")) : ProbabilityVector8::uniform());
  } else if (kind.starts_with("static:") || kind == "timeslot" || kind == "desync") {
    model = builtin_model(kind);
  } else {
    throw ParseError("unknown model '" + kind + "' in model config");
  }
  if (j.contains("message") && !j.at("message").is_null()) {
    model.message = messages::by_name(j.at("message").get<std::string>());
    model.name += "+" + model.message->name + "-message";
  }
  if (j.contains("name")) model.name = j.at("name").get<std::string>();
  return model;
}

void write_run_log_csv(std::ostream& out, std::span<RunRecord const> records) {
  out << "run_id,pair,t1,t2,outcome1,outcome2,product\n";
  for (auto const& r : records) {
    out << r.run_id << ',' << to_string(r.pair) << ',' << to_string(r.t1) << ',' << to_string(r.t2) << ','
        << value(r.outcome1) << ',' << value(r.outcome2) << ',' << r.product() << '\n';
  }
}

std::string run_log_csv(std::span<RunRecord const> records) {
  std::ostringstream out;
  write_run_log_csv(out, records);
  return out.str();
}

std::vector<RunRecord> read_run_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "run_id,pair,t1,t2,outcome1,outcome2,product") {
    throw ParseError("run log must start with header run_id,pair,t1,t2,outcome1,outcome2,product");
  }
  auto parse_sign = [](std::string const& s) {
    if (s == "1") return Outcome::green;
    if (s == "-1") return Outcome::red;
    throw ParseError("outcome must be 1 or -1, got '" + s + "'");
  };
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 7) throw ParseError("run log row needs 7 fields: '" + line + "'");
    RunRecord r;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.run_id);
    if (ec != std::errc{}) throw ParseError("bad run_id '" + fields[0] + "'");
    r.pair = parse_pair(fields[1]);
    r.t1 = parse_time(fields[2]);
    r.t2 = parse_time(fields[3]);
    r.outcome1 = parse_sign(fields[4]);
    r.outcome2 = parse_sign(fields[5]);
    if (std::to_string(r.product()) != fields[6]) throw ParseError("product column disagrees with outcomes: '" + line + "'");
    out.push_back(r);
  }
  return out;
}

std::string format_double(double x) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

}  // namespace mermin
