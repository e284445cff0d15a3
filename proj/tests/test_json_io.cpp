#include "mermin/errors.hpp"
#include "mermin/json_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace mermin;

TEST_SUITE("json_io") {

TEST_CASE("float literals keep their digits") {
  auto const j = parse_json_exact(R"({"x": 0.1, "y": 3, "z": "1/3", "w": 1e-2})");
  CHECK(rational_from_json(j["x"]) == Rational(1, 10));
  CHECK(rational_from_json(j["y"]) == 3);
  CHECK(rational_from_json(j["z"]) == Rational(1, 3));
  CHECK(rational_from_json(j["w"]) == Rational(1, 100));
  CHECK_THROWS_AS(parse_json_exact("{"), ParseError);
}

TEST_CASE("probability vector forms") {
  CHECK(parse_probability_spec("uniform") == ProbabilityVector8::uniform());
  CHECK(parse_probability_spec("point:GGR") == ProbabilityVector8::point_mass(InstructionSet::parse("GGR")));
  CHECK(parse_probability_spec("0,1/2,0,0,0,0,1/2,0")[1] == Rational(1, 2));
  auto const arr = parse_json_exact("[0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]");
  CHECK(probability_vector_from_json(arr) == ProbabilityVector8::uniform());
  auto const keyed = parse_json_exact(R"({"RGR": "1/2", "GRG": 0.5})");
  auto const p = probability_vector_from_json(keyed);
  CHECK(p[InstructionSet::parse("RGR")] == Rational(1, 2));
  CHECK(p[0] == 0);
  CHECK(probability_vector_from_json(to_json(p)) == p);
  CHECK_THROWS_AS(parse_probability_spec("0.5,0.5,0.5,0,0,0,0,0"), SumNotOne);
}

TEST_CASE("nine tables in both layouts") {
  auto const quantum = quantum_target_tables();
  CHECK(nine_from_json(to_json(quantum)) == quantum);
  CHECK(nine_from_json(Json{{"tables", to_json(quantum)}}) == quantum);

  Json arrays = Json::object();
  for (auto const& t : quantum.tables) {
    arrays[to_string(t.pair)] = Json::array({Json::array({to_json(t.probs(0)), to_json(t.probs(1))}),
                                             Json::array({to_json(t.probs(2)), to_json(t.probs(3))})});
  }
  CHECK(nine_from_json(arrays) == quantum);
}

TEST_CASE("bad tables") {
  auto j = to_json(quantum_target_tables());
  j.erase("bc");
  CHECK_THROWS_AS(nine_from_json(j), InvalidTables);
  j = to_json(quantum_target_tables());
  j["ab"].erase("--");
  CHECK_THROWS_AS(nine_from_json(j), InvalidTables);
  j = to_json(quantum_target_tables());
  j["ab"]["++"] = "1/2";
  CHECK_THROWS_AS(nine_from_json(j), InvalidTables);
  j = to_json(quantum_target_tables());
  j["zz"] = j["aa"];
  CHECK_THROWS_AS(nine_from_json(j), InvalidTables);
}

TEST_CASE("product table renderings") {
  auto const csv = product_table_csv();
  CHECK(csv.starts_with("instruction_set,aa,ab,ac,ba,bb,bc,ca,cb,cc\nRRR,1,1,1,1,1,1,1,1,1\nRRG,1,1,-1,1,1,-1,-1,-1,1\n"));
  auto const j = product_table_json();
  CHECK(j["rows"][3]["instruction_set"] == "GRR");
  CHECK(j["rows"][3]["plus_entries"] == 5);
  CHECK(product_table_text().find("GGG   +1   +1") != std::string::npos);
}

TEST_CASE("run log csv round trip") {
  SimulationConfig cfg;
  cfg.runs = 500;
  cfg.seed = 3;
  auto const log = simulate(builtin_model("desync"), cfg);
  std::istringstream in(run_log_csv(log));
  CHECK(read_run_log_csv(in) == log);
  auto const text = run_log_csv(log);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.starts_with("run_id,pair,t1,t2,outcome1,outcome2,product\n0,"));
}

TEST_CASE("run log csv errors") {
  std::istringstream no_header("0,aa,0.00000000000000000000,0.00000000000000000000,1,1,1\n");
  CHECK_THROWS_AS(read_run_log_csv(no_header), ParseError);
  std::istringstream wrong_product(
      "run_id,pair,t1,t2,outcome1,outcome2,product\n0,aa,0.00000000000000000000,0.00000000000000000000,1,-1,1\n");
  CHECK_THROWS_AS(read_run_log_csv(wrong_product), ParseError);
}

TEST_CASE("model configs") {
  auto const m = model_from_json(parse_json_exact(R"({"model": "static", "p": "point:RRG"})"));
  CHECK(run_once(m, parse_pair("ac"), RunSeed{1, 1}).product() == -1);
  auto const msg = model_from_json(parse_json_exact(R"({"model": "timeslot", "message": "time"})"));
  REQUIRE(msg.message.has_value());
  CHECK(msg.message->name == "time");
  CHECK_THROWS_AS(model_from_json(parse_json_exact(R"({"model": "oracle"})")), ParseError);
}

TEST_CASE("ledgers") {
  auto const ledger = ledger_from_json(parse_json_exact(
      R"({"declared_run_count": 4, "entries": [{"label": "x", "count": 3}, {"label": "y", "count": 1}]})"));
  CHECK(ledger.total() == 4);
  CHECK(ledger_from_json(to_json(ledger)).total() == 4);
  CHECK_THROWS_AS(ledger_from_json(parse_json_exact(R"({"entries": [{"count": -1}]})")), ParseError);
}

TEST_CASE("double formatting round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

}
