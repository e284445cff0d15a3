#pragma once

#include "mermin/extended_models.hpp"
#include "mermin/fallacy_audit.hpp"
#include "mermin/instruction_engine.hpp"
#include "mermin/realizability.hpp"
#include "mermin/stats_harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mermin {

/// Insertion-ordered JSON so emitted documents have a stable, readable layout.
using Json = nlohmann::ordered_json;

/// Parses JSON, keeping every floating-point literal as its original text
/// (a JSON string) so rationals can be read from the digits exactly.
Json parse_json_exact(std::string_view text);
Json load_json_file(std::filesystem::path const& path);
std::string read_text_file(std::filesystem::path const& path);
void write_text_file(std::filesystem::path const& path, std::string const& content);

/// Accepts "num/den" or decimal strings and JSON integers.
Rational rational_from_json(Json const& j);
Json to_json(Rational const& r);

/// "uniform", "point:GGR", or eight comma separated rationals.
ProbabilityVector8 parse_probability_spec(std::string_view spec);
/// An array of eight rationals, {"p": [...]}, or an object keyed by row name.
ProbabilityVector8 probability_vector_from_json(Json const& j);
Json to_json(ProbabilityVector8 const& p);

/// {"tables": {"aa": {"++": r, "+-": r, "-+": r, "--": r}, ...}}; each table
/// may instead be a 2x2 array [[++, +-], [-+, --]]. The "tables" wrapper is
/// optional. Throws InvalidTables for missing pairs or cells.
NineDistributions nine_from_json(Json const& j);
Json to_json(NineDistributions const& nine);

Json product_table_json();
std::string product_table_text();
std::string product_table_csv();

Json to_json(BoundReport const& report, Rational const& average_eq2);
Json to_json(MarginalReport const& report);
Json to_json(RealizabilityResult const& result);
Json to_json(RealizabilityGap const& gap);
Json to_json(PerfectCorrelationReport const& report);
Json to_json(SettingIndependenceResult const& result);
Json to_json(Estimate const& e);
/// The stats.json document.
Json to_json(ModelReport const& report);
Json to_json(AuditResult const& result);
Json to_json(CountLedger const& ledger);
CountLedger ledger_from_json(Json const& j);

/// {"model": "static"|"timeslot"|"desync", "p": ..., "message": "constant"|"time"|"setting"}
ExtendedModel model_from_json(Json const& j);

/// Header run_id,pair,t1,t2,outcome1,outcome2,product with LF line endings.
void write_run_log_csv(std::ostream& out, std::span<RunRecord const> records);
std::string run_log_csv(std::span<RunRecord const> records);
std::vector<RunRecord> read_run_log_csv(std::istream& in);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace mermin
