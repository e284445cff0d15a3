#include "mermin/cli.hpp"

#include "mermin/errors.hpp"
#include "mermin/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

namespace mermin::cli {

namespace {

constexpr std::array<std::string_view, 6> kSubcommands{"table", "bound", "realize", "simulate", "coin", "audit"};

bool is_subcommand(std::string const& s) {
  return std::find(kSubcommands.begin(), kSubcommands.end(), s) != kSubcommands.end();
}

std::string json_scalar_text(Json const& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string joined;
    for (auto const& e : v) joined += (joined.empty() ? "" : ",") + json_scalar_text(e);
    return joined;
  }
  return v.dump();
}

/// Replaces "--config file" by the flags stored in the file. The subcommand
/// may come from the file ("subcommand" key) or the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config_path) return args;

  Json const config = load_json_file(*config_path);
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");

  std::vector<std::string> expanded;
  std::vector<std::string> rest = args;
  if (!rest.empty() && is_subcommand(rest.front())) {
    expanded.push_back(rest.front());
    rest.erase(rest.begin());
  } else if (config.contains("subcommand")) {
    expanded.push_back(config.at("subcommand").get<std::string>());
  } else {
    throw UsageError("no subcommand on the command line or in the config file");
  }

  for (auto const& [key, v] : config.items()) {
    if (key == "subcommand") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (v.is_boolean()) {
      if (v.get<bool>()) expanded.push_back(flag);
      continue;
    }
    if (v.is_null()) continue;
    expanded.push_back(flag);
    expanded.push_back(json_scalar_text(v));
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

void emit(std::ostream& out, Json const& j) { out << j.dump(2) << '\n'; }

void write_or_print(std::optional<std::string> const& path, std::string const& content, std::ostream& out) {
  if (path && !path->empty()) {
    write_text_file(*path, content);
  } else {
    out << content;
  }
}

PairSchedule parse_schedule(std::string const& s) {
  if (s == "random") return PairSchedule::random;
  if (s == "balanced") return PairSchedule::balanced;
  throw UsageError("--schedule must be random or balanced");
}

ExtendedModel resolve_model(std::string const& spec) {
  if (std::filesystem::is_regular_file(spec)) return model_from_json(load_json_file(spec));
  return builtin_model(spec);
}

std::string format_rational_line(char const* label, Rational const& r) {
  return std::string(label) + " " + to_string(r) + " (" + format_double(to_double(r)) + ")\n";
}

//---------------------------------------------------------------------------//

struct TableOptions {
  std::string format = "text";
};

int run_table(TableOptions const& o, std::ostream& out) {
  if (o.format == "json") {
    emit(out, product_table_json());
  } else if (o.format == "csv") {
    out << product_table_csv();
  } else {
    out << product_table_text();
  }
  return kSuccess;
}

struct BoundOptions {
  std::string p;
  std::string p_file;
  std::string format = "json";
};

int run_bound(BoundOptions const& o, std::ostream& out) {
  if (o.p.empty() == o.p_file.empty()) throw UsageError("bound needs exactly one of --p or --p-file");
  ProbabilityVector8 const p = o.p.empty() ? probability_vector_from_json(load_json_file(o.p_file))
                                           : parse_probability_spec(o.p);
  BoundReport const report = average_eq1(p);
  Rational const eq2 = average_eq2(p);
  if (o.format == "text") {
    out << format_rational_line("average", report.average) << "bound   " << to_string(report.bound) << '\n'
        << "satisfied " << (report.satisfied ? "yes" : "no") << (report.equality() ? " (equality)" : "") << '\n'
        << format_rational_line("margin", report.margin);
  } else {
    emit(out, to_json(report, eq2));
  }
  return kSuccess;
}

struct RealizeOptions {
  std::string in;
  std::optional<std::string> out_path;
  std::string format = "json";
};

int run_realize(RealizeOptions const& o, std::ostream& out) {
  NineDistributions const nine =
      nine_from_json(o.in == "-" ? parse_json_exact(std::string(std::istreambuf_iterator<char>(std::cin), {}))
                                 : load_json_file(o.in));
  RealizabilityResult const result = joint_realizability(nine);
  Json doc = to_json(result);
  doc["certificate_verified"] = result.certificate ? Json(verify_certificate(*result.certificate, nine)) : Json(nullptr);
  doc["realizability_gap"] = to_json(realizability_gap(nine));
  doc["average"] = to_json(average_from_nine(nine));
  doc["marginals"] = to_json(marginal_consistency(nine));

  if (o.format == "text") {
    std::ostringstream text;
    text << "status " << doc["status"].get<std::string>() << '\n'
         << format_rational_line("average", average_from_nine(nine))
         << "marginals " << (doc["marginals"]["consistent"].get<bool>() ? "consistent" : "inconsistent") << '\n';
    if (result.witness) {
      text << "witness";
      for (auto lambda : all_instruction_sets()) text << ' ' << lambda.name() << '=' << to_string((*result.witness)[lambda]);
      text << '\n';
    }
    if (result.certificate) text << "certificate verified " << (doc["certificate_verified"].get<bool>() ? "yes" : "no") << '\n';
    write_or_print(o.out_path, text.str(), out);
  } else {
    write_or_print(o.out_path, doc.dump(2) + "\n", out);
  }
  return kSuccess;
}

struct SimulateOptions {
  std::string model = "static:uniform";
  std::uint64_t runs = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_log;
  std::optional<std::string> out_stats;
  std::string schedule = "random";
  unsigned threads = 1;
  std::uint64_t audit_probes = 1000;
  std::string format = "json";
};

int run_simulate(SimulateOptions const& o, std::ostream& out) {
  if (!o.seed) throw UsageError("simulate requires --seed");
  ExtendedModel const model = resolve_model(o.model);
  ReportConfig config;
  config.runs = o.runs;
  config.seed = *o.seed;
  config.schedule = parse_schedule(o.schedule);
  config.threads = o.threads;
  config.audit_probes = o.audit_probes;
  config.keep_log = o.out_log.has_value();

  ModelReport const report = model_report(model, config);
  if (o.out_log) write_text_file(*o.out_log, run_log_csv(report.log));

  Json const stats = to_json(report);
  if (o.out_stats) write_text_file(*o.out_stats, stats.dump(2) + "\n");

  if (o.format == "text") {
    out << "model " << report.model_name << "\nruns " << report.runs << "\nseed " << report.seed << '\n'
        << format_rational_line("average (run weighted)", report.average_runweighted);
    if (report.average_uniform) out << format_rational_line("average (uniform pairs)", *report.average_uniform);
    out << "estimate " << format_double(report.estimate.value) << " +- " << format_double(report.estimate.std_error)
        << '\n';
    if (report.realizability) out << "realizable " << (report.realizability->feasible() ? "yes" : "no") << '\n';
  } else if (!o.out_stats) {
    emit(out, stats);
  }
  return kSuccess;
}

struct CoinOptions {
  std::string bias_n = "7/10";
  std::string bias_s = "3/10";
  std::string choices;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  std::optional<std::string> out_log;
};

int run_coin(CoinOptions const& o, std::ostream& out) {
  if (!o.seed) throw UsageError("coin requires --seed");
  CoinConfig cfg{parse_rational(o.bias_n), parse_rational(o.bias_s)};
  cfg.validate();
  std::string const choice_text =
      std::filesystem::is_regular_file(o.choices) ? read_text_file(o.choices) : o.choices;
  auto const choices = parse_magnet_choices(choice_text);
  TossLog const log = run_coin_experiment(cfg, choices, *o.seed);

  std::uint64_t heads = 0;
  for (auto const& t : log) heads += t.head ? 1 : 0;
  Rational const honest = honest_frequency(log);
  Json doc{{"tosses", log.size()},
           {"seed", *o.seed},
           {"bias_n", to_json(cfg.bias_n)},
           {"bias_s", to_json(cfg.bias_s)},
           {"heads", heads},
           {"honest_frequency", to_json(honest)},
           {"honest_frequency_decimal", to_double(honest)},
           {"naive_estimate", to_json(naive_double_count(log))}};
  doc["audit"] = Json{{"actual", to_json(audit_counts(actual_ledger(log), log.size()))},
                      {"double_count", to_json(audit_counts(double_count_ledger(log), log.size()))}};

  if (o.out_log) {
    std::ostringstream csv;
    csv << "index,magnet,face\n";
    for (auto const& t : log) csv << t.index << ',' << to_char(t.magnet) << ',' << (t.head ? 'H' : 'T') << '\n';
    write_text_file(*o.out_log, csv.str());
  }
  write_or_print(o.out_path, doc.dump(2) + "\n", out);
  return kSuccess;
}

struct AuditOptions {
  std::optional<std::string> ledger;
  std::optional<std::string> log;
  std::optional<std::uint64_t> runs;
  std::string counting = "both";
};

int run_audit(AuditOptions const& o, std::ostream& out) {
  if (o.ledger.has_value() == o.log.has_value()) throw UsageError("audit needs exactly one of --ledger or --log");
  if (o.ledger) {
    CountLedger const ledger = ledger_from_json(load_json_file(*o.ledger));
    std::uint64_t const runs = o.runs.value_or(ledger.declared_run_count);
    if (runs == 0) throw UsageError("audit --ledger needs --runs or a declared_run_count in the ledger");
    emit(out, Json{{"ledger", to_json(ledger)}, {"audit", to_json(audit_counts(ledger, runs))}});
    return kSuccess;
  }

  std::ifstream in(*o.log, std::ios::binary);
  if (!in) throw IoError("cannot open '" + *o.log + "' for reading");
  auto const records = read_run_log_csv(in);
  if (records.empty()) throw PreconditionError("run log has no runs");
  std::uint64_t const runs = o.runs.value_or(records.size());

  Json doc{{"runs", runs}};
  if (o.counting == "actual" || o.counting == "both") {
    doc["actual"] = to_json(audit_counts(run_log_ledger(records), runs));
  }
  if (o.counting == "nine-settings" || o.counting == "both") {
    doc["nine_settings"] = to_json(audit_counts(nine_settings_ledger(records), runs));
  }
  if (doc.size() == 1) throw UsageError("--counting must be actual, nine-settings or both");
  emit(out, doc);
  return kSuccess;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  try {
    args = expand_config(std::move(args));
  } catch (UsageError const& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (Error const& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }

  CLI::App app{"Instruction-set bound, realizability and extended-model simulation for the three-setting gadget",
               "mermin"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string unused_config;
  app.add_option("--config", unused_config, "JSON file with flags for the subcommand");

  TableOptions table_opts;
  auto* table = app.add_subcommand("table", "Print the 8x9 product table");
  table->add_option("--format", table_opts.format)->check(CLI::IsMember({"text", "json", "csv"}));

  BoundOptions bound_opts;
  auto* bound = app.add_subcommand("bound", "Evaluate the instruction-set bound for a weight vector");
  bound->add_option("--p", bound_opts.p, "uniform | point:GGR | eight comma separated rationals");
  bound->add_option("--p-file", bound_opts.p_file, "JSON file with the weight vector");
  bound->add_option("--format", bound_opts.format)->check(CLI::IsMember({"json", "text"}));

  RealizeOptions realize_opts;
  auto* realize = app.add_subcommand("realize", "Decide joint realizability of nine pair tables");
  realize->add_option("--in", realize_opts.in, "JSON file with nine tables, or - for stdin")->required();
  realize->add_option("--out", realize_opts.out_path, "write the result here instead of stdout");
  realize->add_option("--format", realize_opts.format)->check(CLI::IsMember({"json", "text"}));

  SimulateOptions sim_opts;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a model and report its statistics");
  simulate_cmd->add_option("--model", sim_opts.model, "static:uniform | static:point:RRG | static:<p> | timeslot | desync | config.json");
  simulate_cmd->add_option("--runs", sim_opts.runs)->required();
  simulate_cmd->add_option("--seed", sim_opts.seed, "master seed (required)");
  simulate_cmd->add_option("--out-log", sim_opts.out_log, "CSV run log");
  simulate_cmd->add_option("--out-stats", sim_opts.out_stats, "stats JSON");
  simulate_cmd->add_option("--schedule", sim_opts.schedule)->check(CLI::IsMember({"random", "balanced"}));
  simulate_cmd->add_option("--threads", sim_opts.threads)->check(CLI::Range(1u, 256u));
  simulate_cmd->add_option("--audit-probes", sim_opts.audit_probes)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
  simulate_cmd->add_option("--format", sim_opts.format)->check(CLI::IsMember({"json", "text"}));

  CoinOptions coin_opts;
  auto* coin = app.add_subcommand("coin", "Coin-and-magnet counting demonstration");
  coin->add_option("--bias-n", coin_opts.bias_n, "P(head) with the magnet at N");
  coin->add_option("--bias-s", coin_opts.bias_s, "P(head) with the magnet at S");
  coin->add_option("--choices", coin_opts.choices, "file or pattern such as N*70000,S*30000")->required();
  coin->add_option("--seed", coin_opts.seed, "master seed (required)");
  coin->add_option("--out", coin_opts.out_path, "write the JSON report here instead of stdout");
  coin->add_option("--out-log", coin_opts.out_log, "CSV toss log");

  AuditOptions audit_opts;
  auto* audit = app.add_subcommand("audit", "Check that counted elements match the number of runs");
  audit->add_option("--ledger", audit_opts.ledger, "JSON count ledger");
  audit->add_option("--log", audit_opts.log, "CSV run log from simulate");
  audit->add_option("--runs", audit_opts.runs, "number of experimental runs");
  audit->add_option("--counting", audit_opts.counting)->check(CLI::IsMember({"actual", "nine-settings", "both"}));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*table) return run_table(table_opts, out);
    if (*bound) return run_bound(bound_opts, out);
    if (*realize) return run_realize(realize_opts, out);
    if (*simulate_cmd) return run_simulate(sim_opts, out);
    if (*coin) return run_coin(coin_opts, out);
    if (*audit) return run_audit(audit_opts, out);
  } catch (UsageError const& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (Error const& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace mermin::cli
