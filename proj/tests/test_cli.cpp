#include "mermin/cli.hpp"
#include "mermin/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace mermin;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int const code = cli::dispatch(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string golden(std::string const& name) { return read_text_file(fs::path(MERMIN_GOLDEN_DIR) / name); }

fs::path scratch() {
  auto const dir = fs::temp_directory_path() / "mermin_cli_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("table goldens") {
  CHECK(run({"table"}).out == golden("table.txt"));
  CHECK(run({"table", "--format", "csv"}).out == golden("table.csv"));
  CHECK(run({"table", "--format", "json"}).out == golden("table.json"));
}

TEST_CASE("bound") {
  auto const r = run({"bound", "--p", "uniform"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("bound_uniform.json"));
  auto const j = parse_json_exact(r.out);
  CHECK(j["average"] == "1/3");

  auto const point = parse_json_exact(run({"bound", "--p", "point:RRG"}).out);
  CHECK(point["average"] == "1/9");

  auto const bad = run({"bound", "--p", "1/2,1/2,1/2,0,0,0,0,0"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("deficit -1/2") != std::string::npos);
  CHECK(run({"bound"}).code == 2);
}

TEST_CASE("realize the quantum tables") {
  auto const in = scratch() / "quantum.json";
  write_text_file(in, to_json(quantum_target_tables()).dump(2));
  auto const r = run({"realize", "--in", in.string()});
  CHECK(r.code == 0);
  CHECK(r.out == golden("realize_quantum.json"));
  auto const j = parse_json_exact(r.out);
  CHECK(j["status"] == "infeasible");
  CHECK(j["certificate_verified"] == true);
}

TEST_CASE("realize reports malformed tables as domain errors") {
  auto const in = scratch() / "bad.json";
  write_text_file(in, R"({"tables": {"aa": {"++": 1}}})");
  CHECK(run({"realize", "--in", in.string()}).code == 1);
  CHECK(run({"realize", "--in", (scratch() / "missing.json").string()}).code == 1);
}

TEST_CASE("simulate") {
  auto const dir = scratch();
  auto const stats = dir / "stats.json";
  auto const log = dir / "log.csv";
  auto const r = run({"simulate", "--model", "static:uniform", "--runs", "900", "--seed", "7", "--schedule",
                      "balanced", "--out-stats", stats.string(), "--out-log", log.string()});
  CHECK(r.code == 0);
  CHECK(read_text_file(stats) == golden("simulate_static_900_seed7.json"));
  CHECK(read_text_file(log).starts_with("run_id,pair,t1,t2,outcome1,outcome2,product\n"));

  auto const again = run({"simulate", "--model", "static:uniform", "--runs", "900", "--seed", "7", "--schedule",
                          "balanced", "--threads", "3"});
  CHECK(again.out == golden("simulate_static_900_seed7.json"));
}

TEST_CASE("simulate without a seed is a usage error") {
  auto const r = run({"simulate", "--runs", "100"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--seed") != std::string::npos);
}

TEST_CASE("leaky model is refused") {
  auto const cfg = scratch() / "leaky.json";
  write_text_file(cfg, R"({"model": "timeslot", "message": "setting"})");
  auto const r = run({"simulate", "--model", cfg.string(), "--runs", "100", "--seed", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("refused") != std::string::npos);
}

TEST_CASE("coin") {
  auto const r = run({"coin", "--choices", "N*70,S*30", "--seed", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("coin_100_seed5.json"));
  CHECK(run({"coin", "--choices", "N*10"}).code == 2);
  CHECK(run({"coin", "--choices", "NQ", "--seed", "1"}).code == 1);
  CHECK(run({"coin", "--choices", "N", "--seed", "1", "--bias-n", "2"}).code == 1);
}

TEST_CASE("audit") {
  auto const dir = scratch();
  auto const log = dir / "audit_log.csv";
  CHECK(run({"simulate", "--runs", "90", "--seed", "2", "--out-log", log.string(), "--out-stats",
             (dir / "audit_stats.json").string()})
            .code == 0);
  auto const r = run({"audit", "--log", log.string(), "--counting", "both"});
  CHECK(r.code == 0);
  CHECK(r.out == golden("audit_90.json"));

  auto const ledger = dir / "ledger.json";
  write_text_file(ledger, R"({"entries": [{"label": "x", "count": 18}]})");
  auto const j = parse_json_exact(run({"audit", "--ledger", ledger.string(), "--runs", "9"}).out);
  CHECK(j["audit"]["ok"] == false);
  CHECK(j["audit"]["overcount_factor"] == "2/1");
  CHECK(run({"audit"}).code == 2);
}

TEST_CASE("config files supply flags") {
  auto const cfg = scratch() / "bound.json";
  write_text_file(cfg, R"({"subcommand": "bound", "p": "point:GGG", "format": "json"})");
  auto const j = parse_json_exact(run({"--config", cfg.string()}).out);
  CHECK(j["average"] == "1/1");
  // The command line wins over the file.
  auto const k = parse_json_exact(run({"--config", cfg.string(), "bound", "--p", "uniform"}).out);
  CHECK(k["average"] == "1/3");
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"table", "--format", "xml"}).code == 2);
  CHECK(run({"simulate", "--runs", "ten", "--seed", "1"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

}
