#include "mermin/errors.hpp"
#include "mermin/extended_models.hpp"
#include "mermin/instruction_engine.hpp"

#include <doctest.h>

#include <cmath>

using namespace mermin;

namespace {

std::vector<ExtendedModel> builtins() {
  return {builtin_model("static:uniform"), builtin_model("static:point:RRG"),
          builtin_model("static:0,0,1/2,0,0,1/2,0,0"), builtin_model("timeslot"), builtin_model("desync")};
}

ExtendedModel with_message(ExtendedModel model, MessageFunction msg) {
  model.message = std::move(msg);
  return model;
}

}  // namespace

TEST_SUITE("extended_models") {

TEST_CASE("static point mass reproduces its row") {
  auto const model = builtin_model("static:point:RRG");
  auto const r = run_once(model, parse_pair("ac"), RunSeed{1, 0});
  CHECK(r.outcome1 == Outcome::red);
  CHECK(r.outcome2 == Outcome::green);
  CHECK(r.product() == -1);
}

TEST_CASE("time slot model: equal settings give equal outcomes") {
  auto const model = time_slot_model();
  for (std::uint64_t id = 0; id < 200; ++id) {
    auto const r = run_once(model, parse_pair("bb"), RunSeed{3, id});
    REQUIRE(r.t1 == r.t2);
    REQUIRE(r.outcome1 == r.outcome2);
  }
}

TEST_CASE("unknown model names") {
  CHECK_THROWS_AS(builtin_model("quantum"), ParseError);
  CHECK_THROWS_AS(builtin_model("static:1,2"), PreconditionError);
  CHECK_THROWS_AS(messages::by_name("nope"), ParseError);
}

TEST_CASE("runs are pure functions of (model, pair, seed)") {
  for (auto const& model : builtins()) {
    for (std::uint64_t id = 0; id < 50; ++id) {
      auto const pair = SettingPair::from_index(static_cast<int>(id % 9));
      REQUIRE(run_once(model, pair, RunSeed{77, id}) == run_once(model, pair, RunSeed{77, id}));
    }
  }
}

TEST_CASE("locality audit: a station's time and outcome ignore the remote setting") {
  for (auto const& model : builtins()) {
    CAPTURE(model.name);
    for (std::uint64_t id = 0; id < 100; ++id) {
      for (auto s : kSettings) {
        auto const base = run_once(model, SettingPair{s, Setting::a}, RunSeed{5, id});
        auto const base2 = run_once(model, SettingPair{Setting::a, s}, RunSeed{5, id});
        for (auto remote : kSettings) {
          auto const r1 = run_once(model, SettingPair{s, remote}, RunSeed{5, id});
          REQUIRE(r1.t1 == base.t1);
          REQUIRE(r1.outcome1 == base.outcome1);
          auto const r2 = run_once(model, SettingPair{remote, s}, RunSeed{5, id});
          REQUIRE(r2.t2 == base2.t2);
          REQUIRE(r2.outcome2 == base2.outcome2);
        }
      }
    }
  }
}

TEST_CASE("perfect correlation") {
  auto const stat = check_perfect_correlation(builtin_model("static:uniform"), 3000, 9);
  CHECK(stat.overall.runs == 3000);
  CHECK(*stat.overall.rate() == 1);
  for (auto const& s : stat.per_setting) CHECK(s.runs > 800);

  auto const slot = check_perfect_correlation(time_slot_model(), 3000, 9);
  CHECK(*slot.overall.rate() == 1);
  CHECK(*slot.overall.equal_time_rate() == 1);
  CHECK(slot.overall.equal_time_runs == 3000);

  auto const desync = check_perfect_correlation(desync_time_model(), 3000, 9);
  CHECK(*desync.overall.equal_time_rate() == 1);
  CHECK(*desync.overall.rate() < 1);
  CHECK(desync.overall.equal_time_runs > 1200);
  CHECK(desync.overall.equal_time_runs < 1800);

  CHECK_THROWS_AS(check_perfect_correlation(time_slot_model(), 0, 1), PreconditionError);
}

TEST_CASE("setting independence of message functions") {
  CHECK(check_setting_independence(messages::constant(), 1000, 1).passed);
  CHECK(check_setting_independence(messages::time_only(), 1000, 1).passed);
  auto const leak = check_setting_independence(messages::copies_setting(), 1000, 1);
  CHECK_FALSE(leak.passed);
  REQUIRE(leak.witness.has_value());
  CHECK(leak.witness->messages[0] != leak.witness->messages[1]);

  // Reads the setting only when the history is long enough; still caught.
  MessageFunction sneaky{"sneaky", [](MessageInput const& in, RandomStream&) {
                           return Message{in.history.size() >= 3 ? static_cast<std::uint64_t>(index(in.setting)) : 0};
                         }};
  CHECK_FALSE(check_setting_independence(sneaky, 1000, 2).passed);

  // Randomness alone must not trip the audit.
  MessageFunction noisy{"noisy", [](MessageInput const&, RandomStream& rng) { return Message{rng.next_u64()}; }};
  CHECK(check_setting_independence(noisy, 1000, 3).passed);
}

TEST_CASE("models with a setting-dependent message are refused") {
  ReportConfig cfg;
  cfg.runs = 90;
  cfg.seed = 4;
  auto const leaky = with_message(time_slot_model(), messages::copies_setting());
  CHECK_THROWS_AS(model_report(leaky, cfg), ModelRefused);
  auto const honest = with_message(time_slot_model(), messages::time_only());
  auto const report = model_report(honest, cfg);
  REQUIRE(report.message_audit.has_value());
  CHECK(report.message_audit->passed);
}

TEST_CASE("model failures are reported") {
  auto broken = time_slot_model();
  broken.outcome_s2 = [](StationInput const&) -> Outcome { throw std::runtime_error("boom"); };
  CHECK_THROWS_AS(run_once(broken, parse_pair("ab"), RunSeed{1, 1}), ModelEvaluationFailure);
  auto missing = time_slot_model();
  missing.source = nullptr;
  CHECK_THROWS_AS(run_once(missing, parse_pair("ab"), RunSeed{1, 1}), ModelEvaluationFailure);
  auto bad_value = time_slot_model();
  bad_value.outcome_s1 = [](StationInput const&) { return static_cast<Outcome>(0); };
  CHECK_THROWS_AS(run_once(bad_value, parse_pair("ab"), RunSeed{1, 1}), ModelEvaluationFailure);
}

TEST_CASE("simulation log does not depend on the thread count") {
  auto const model = builtin_model("static:uniform");
  SimulationConfig cfg;
  cfg.runs = 20000;
  cfg.seed = 2024;
  cfg.threads = 1;
  auto const one = simulate(model, cfg);
  cfg.threads = 4;
  auto const four = simulate(model, cfg);
  CHECK(one == four);
  for (std::size_t i = 0; i < one.size(); ++i) REQUIRE(one[i].run_id == i);
}

TEST_CASE("balanced schedule with nine runs gives exact tables") {
  ReportConfig cfg;
  cfg.runs = 9;
  cfg.seed = 1;
  cfg.schedule = PairSchedule::balanced;
  auto const p = ProbabilityVector8::point_mass(InstructionSet::parse("GRG"));
  auto const report = model_report(static_classical(p), cfg);
  REQUIRE(report.empirical.has_value());
  CHECK(*report.empirical == nine_from_p(p));
  CHECK(report.realizability->feasible());
  CHECK(report.realizability_gap->gap == 0);
  CHECK(*report.average_uniform == Rational(1, 9));
  CHECK(report.average_runweighted == Rational(1, 9));
}

TEST_CASE("report preconditions and empty pairs") {
  ReportConfig cfg;
  cfg.runs = 8;
  CHECK_THROWS_AS(model_report(time_slot_model(), cfg), PreconditionError);
  cfg.runs = 0;
  CHECK_THROWS_AS(model_report(time_slot_model(), cfg), PreconditionError);
  // Nine random pairs almost surely miss one; the report says which.
  cfg.runs = 9;
  cfg.seed = 0;
  auto const report = model_report(time_slot_model(), cfg);
  if (!report.empty_pairs.empty()) {
    CHECK_FALSE(report.empirical.has_value());
    CHECK_FALSE(report.average_uniform.has_value());
  }
}

TEST_CASE("static uniform model converges to 1/3") {
  ReportConfig cfg;
  cfg.runs = 200000;
  cfg.seed = 17;
  auto const report = model_report(builtin_model("static:uniform"), cfg);
  CHECK(std::abs(report.estimate.value - 1.0 / 3.0) < 4 * report.estimate.std_error);
  CHECK(report.marginals.has_value());
  REQUIRE(report.realizability_gap.has_value());
  CHECK(to_double(report.realizability_gap->gap) < 0.02);
  CHECK(*report.perfect_correlation.overall.rate() == 1);
}

TEST_CASE("time slot model is classical: the bound still holds") {
  ReportConfig cfg;
  cfg.runs = 200000;
  cfg.seed = 18;
  auto const report = model_report(time_slot_model(), cfg);
  CHECK(report.estimate.value > 1.0 / 9.0 - 4 * report.estimate.std_error);
}

}
