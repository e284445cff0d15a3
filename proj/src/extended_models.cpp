#include "mermin/extended_models.hpp"

#include "mermin/errors.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

namespace mermin {

namespace {

constexpr std::uint64_t kSlotWidth = std::uint64_t{1} << 61;  // 1/8 of [0,1)

Outcome slot_color(Setting s, Time t) {
  return static_cast<Outcome>(color_matrix()(static_cast<int>(t.slot(3)), index(s)));
}

ParameterValue encode(Outcome o) { return {o == Outcome::green ? 1u : 0u}; }
Outcome decode(ParameterValue v) { return v.bits != 0 ? Outcome::green : Outcome::red; }

OutcomeFunction read_parameter() {
  return [](StationInput const& in) { return decode(in.parameter); };
}

ParameterProcess slot_parameter() {
  return [](Setting s, Time t, RandomStream&) { return encode(slot_color(s, t)); };
}

template <typename F>
decltype(auto) guarded(char const* what, std::uint64_t run_id, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (Error const&) {
    throw;
  } catch (std::bad_function_call const&) {
    throw ModelEvaluationFailure(std::string("model has no ") + what + " function (run " + std::to_string(run_id) + ")");
  } catch (std::exception const& e) {
    throw ModelEvaluationFailure(std::string(what) + " failed in run " + std::to_string(run_id) + ": " + e.what());
  }
}

}  // namespace

//---------------------------------------------------------------------------//
// Built-in models
//---------------------------------------------------------------------------//

ExtendedModel static_classical(ProbabilityVector8 const& p) {
  ExtendedModel model;
  model.name = "static";
  model.source = [draw = CategoricalThresholds(p)](Time, RandomStream& rng) {
    return SourceValue{static_cast<std::uint64_t>(draw(rng))};
  };
  model.param_s1 = [](Setting, Time, RandomStream&) { return ParameterValue{}; };
  model.param_s2 = model.param_s1;
  model.time_law = [](Station, Setting, Time, RandomStream& rng) { return rng.next_time(); };
  model.outcome_s1 = [](StationInput const& in) {
    return static_cast<Outcome>(color_matrix()(static_cast<int>(in.source.bits), index(in.setting)));
  };
  model.outcome_s2 = model.outcome_s1;
  return model;
}

ExtendedModel time_slot_model() {
  ExtendedModel model;
  model.name = "timeslot";
  model.source = [](Time, RandomStream&) { return SourceValue{}; };
  model.param_s1 = slot_parameter();
  model.param_s2 = slot_parameter();
  model.time_law = [](Station, Setting, Time emission, RandomStream&) { return emission; };
  model.outcome_s1 = read_parameter();
  model.outcome_s2 = read_parameter();
  return model;
}

ExtendedModel desync_time_model() {
  ExtendedModel model = time_slot_model();
  model.name = "desync";
  model.time_law = [](Station, Setting s, Time emission, RandomStream& rng) {
    std::uint64_t const jitter = (rng.next_u64() & 1u) != 0 ? kSlotWidth : 0;
    return emission.shifted(static_cast<std::uint64_t>(index(s)) * kSlotWidth + jitter);
  };
  return model;
}

ExtendedModel builtin_model(std::string_view spec) {
  if (spec == "timeslot") return time_slot_model();
  if (spec == "desync") return desync_time_model();
  if (spec.starts_with("static:")) {
    std::string_view const arg = spec.substr(7);
    if (arg == "uniform") return static_classical(ProbabilityVector8::uniform());
    if (arg.starts_with("point:")) {
      return static_classical(ProbabilityVector8::point_mass(InstructionSet::parse(arg.substr(6))));
    }
    std::vector<Rational> raw;
    std::size_t start = 0;
    while (start <= arg.size()) {
      auto const comma = arg.find(',', start);
      auto const end = comma == std::string_view::npos ? arg.size() : comma;
      raw.push_back(parse_rational(arg.substr(start, end - start)));
      start = end + 1;
    }
    return static_classical(ProbabilityVector8::validate(raw));
  }
  throw ParseError("unknown model '" + std::string(spec) + "' (expected static:..., timeslot or desync)");
}

namespace messages {

MessageFunction constant() {
  return {"constant", [](MessageInput const&, RandomStream&) { return Message{0x5eedULL}; }};
}

MessageFunction time_only() {
  return {"time", [](MessageInput const& in, RandomStream&) { return Message{in.time.bits}; }};
}

MessageFunction copies_setting() {
  return {"setting", [](MessageInput const& in, RandomStream&) {
            return Message{static_cast<std::uint64_t>(index(in.setting))};
          }};
}

MessageFunction by_name(std::string_view name) {
  if (name == "constant") return constant();
  if (name == "time") return time_only();
  if (name == "setting") return copies_setting();
  throw ParseError("unknown message function '" + std::string(name) + "'");
}

}  // namespace messages

//---------------------------------------------------------------------------//
// Running
//---------------------------------------------------------------------------//

RunRecord run_once(ExtendedModel const& model, SettingPair pair, RunSeed seed, std::span<RunRecord const> history) {
  auto stream = [&](StreamComponent c) { return RandomStream(seed.master, seed.run_id, c); };
  std::uint64_t const id = seed.run_id;

  RunRecord record;
  record.run_id = id;
  record.pair = pair;

  Time const emission = stream(StreamComponent::emission).next_time();
  auto time_s1 = stream(StreamComponent::time_s1);
  auto time_s2 = stream(StreamComponent::time_s2);
  record.t1 = guarded("time law", id, [&] { return model.time_law(Station::s1, pair.left, emission, time_s1); });
  record.t2 = guarded("time law", id, [&] { return model.time_law(Station::s2, pair.right, emission, time_s2); });

  // Both particles see the same source randomness; only the time can differ.
  RandomStream const source_stream = stream(StreamComponent::source);
  StationInput in1;
  StationInput in2;
  in1.setting = pair.left;
  in2.setting = pair.right;
  in1.time = record.t1;
  in2.time = record.t2;
  in1.source = guarded("source", id, [&] {
    RandomStream rng = source_stream;
    return model.source(record.t1, rng);
  });
  in2.source = guarded("source", id, [&] {
    RandomStream rng = source_stream;
    return model.source(record.t2, rng);
  });

  auto param_s1 = stream(StreamComponent::param_s1);
  auto param_s2 = stream(StreamComponent::param_s2);
  in1.parameter = guarded("parameter", id, [&] { return model.param_s1(pair.left, record.t1, param_s1); });
  in2.parameter = guarded("parameter", id, [&] { return model.param_s2(pair.right, record.t2, param_s2); });

  if (model.message) {
    auto msg_s1 = stream(StreamComponent::message_s1);
    auto msg_s2 = stream(StreamComponent::message_s2);
    Message const from_s1 =
        guarded("message", id, [&] { return model.message->emit({record.t1, history, pair.left}, msg_s1); });
    Message const from_s2 =
        guarded("message", id, [&] { return model.message->emit({record.t2, history, pair.right}, msg_s2); });
    in1.received = from_s2;
    in2.received = from_s1;
  }

  record.outcome1 = guarded("outcome", id, [&] { return model.outcome_s1(in1); });
  record.outcome2 = guarded("outcome", id, [&] { return model.outcome_s2(in2); });
  if (std::abs(value(record.outcome1)) != 1 || std::abs(value(record.outcome2)) != 1) {
    throw ModelEvaluationFailure("outcome function returned a value other than +-1 in run " + std::to_string(id));
  }
  return record;
}

SettingPair scheduled_pair(PairSchedule schedule, RunSeed seed) {
  if (schedule == PairSchedule::balanced) return SettingPair::from_index(static_cast<int>(seed.run_id % 9));
  RandomStream rng(seed.master, seed.run_id, StreamComponent::pair);
  return SettingPair::from_index(static_cast<int>(rng.below(9)));
}

namespace {

struct ShardSummary {
  StatsAccumulator stats;
  PerfectCorrelationReport diagonal;

  void add(RunRecord const& r) {
    accumulate(stats, r);
    if (r.pair.diagonal()) {
      diagonal.per_setting[static_cast<std::size_t>(index(r.pair.left))].add(r);
      diagonal.overall.add(r);
    }
  }

  void absorb(ShardSummary const& other) {
    stats = merge(stats, other.stats);
    for (std::size_t s = 0; s < 3; ++s) diagonal.per_setting[s] += other.diagonal.per_setting[s];
    diagonal.overall += other.diagonal.overall;
  }
};

/// Runs [0, config.runs) in contiguous shards. `log` may be null when the
/// records are not needed; a model with messages always keeps them.
ShardSummary execute(ExtendedModel const& model, SimulationConfig const& config, std::vector<RunRecord>* log) {
  std::vector<RunRecord> local_log;
  if (model.message && log == nullptr) log = &local_log;
  if (log != nullptr) log->assign(config.runs, RunRecord{});

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi, ShardSummary& summary) {
    for (std::uint64_t id = lo; id < hi; ++id) {
      RunSeed const seed{config.seed, id};
      std::span<RunRecord const> history;
      if (model.message) history = std::span<RunRecord const>(log->data(), id);
      RunRecord const record = run_once(model, scheduled_pair(config.schedule, seed), seed, history);
      summary.add(record);
      if (log != nullptr) (*log)[id] = record;
    }
  };

  unsigned const threads =
      model.message ? 1u : std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(std::max<std::uint64_t>(1, config.runs / 1024))));

  ShardSummary total;
  if (threads == 1) {
    run_range(0, config.runs, total);
    return total;
  }

  std::vector<ShardSummary> shards(threads);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  std::uint64_t const chunk = (config.runs + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::uint64_t const lo = std::min(config.runs, t * chunk);
    std::uint64_t const hi = std::min(config.runs, lo + chunk);
    workers.emplace_back([&, t, lo, hi] {
      try {
        run_range(lo, hi, shards[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto const& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto const& s : shards) total.absorb(s);
  return total;
}

}  // namespace

std::vector<RunRecord> simulate(ExtendedModel const& model, SimulationConfig const& config) {
  std::vector<RunRecord> log;
  execute(model, config, &log);
  return log;
}

//---------------------------------------------------------------------------//
// Checks
//---------------------------------------------------------------------------//

std::optional<Rational> AgreementCounts::rate() const {
  if (runs == 0) return std::nullopt;
  return Rational(Integer(agreements), Integer(runs));
}

std::optional<Rational> AgreementCounts::equal_time_rate() const {
  if (equal_time_runs == 0) return std::nullopt;
  return Rational(Integer(equal_time_agreements), Integer(equal_time_runs));
}

void AgreementCounts::add(RunRecord const& record) {
  bool const agree = record.outcome1 == record.outcome2;
  ++runs;
  agreements += agree ? 1 : 0;
  if (record.t1 == record.t2) {
    ++equal_time_runs;
    equal_time_agreements += agree ? 1 : 0;
  }
}

AgreementCounts& AgreementCounts::operator+=(AgreementCounts const& other) {
  runs += other.runs;
  agreements += other.agreements;
  equal_time_runs += other.equal_time_runs;
  equal_time_agreements += other.equal_time_agreements;
  return *this;
}

PerfectCorrelationReport perfect_correlation_from_log(std::span<RunRecord const> records) {
  PerfectCorrelationReport report;
  for (auto const& r : records) {
    if (!r.pair.diagonal()) continue;
    report.per_setting[static_cast<std::size_t>(index(r.pair.left))].add(r);
    report.overall.add(r);
  }
  return report;
}

PerfectCorrelationReport check_perfect_correlation(ExtendedModel const& model, std::uint64_t n_runs,
                                                   std::uint64_t seed) {
  if (n_runs < 1) throw PreconditionError("check_perfect_correlation needs n_runs >= 1");
  std::vector<RunRecord> log;
  log.reserve(n_runs);
  for (std::uint64_t id = 0; id < n_runs; ++id) {
    RandomStream rng(seed, id, StreamComponent::pair);
    auto const s = static_cast<Setting>(rng.below(3));
    log.push_back(run_once(model, SettingPair{s, s}, RunSeed{seed, id}, log));
  }
  return perfect_correlation_from_log(log);
}

SettingIndependenceResult check_setting_independence(MessageFunction const& msg, std::uint64_t probe_count,
                                                     std::uint64_t seed) {
  if (probe_count < 1) throw PreconditionError("check_setting_independence needs probe_count >= 1");
  SettingIndependenceResult result;
  for (std::uint64_t id = 0; id < probe_count; ++id) {
    RandomStream probe_rng(seed, id, StreamComponent::probe);
    IndependenceProbe probe;
    probe.probe_id = id;
    probe.time = probe_rng.next_time();
    auto const history_length = probe_rng.below(4);
    for (std::uint64_t k = 0; k < history_length; ++k) {
      RunRecord r;
      r.run_id = k;
      r.pair = SettingPair::from_index(static_cast<int>(probe_rng.below(9)));
      r.t1 = probe_rng.next_time();
      r.t2 = probe_rng.next_time();
      r.outcome1 = outcome_from_sign((probe_rng.next_u64() & 1u) != 0 ? 1 : -1);
      r.outcome2 = outcome_from_sign((probe_rng.next_u64() & 1u) != 0 ? 1 : -1);
      probe.history.push_back(r);
    }
    RandomStream const local(seed, id, StreamComponent::message_s1);
    for (auto s : kSettings) {
      RandomStream rng = local;
      probe.messages[static_cast<std::size_t>(index(s))] =
          guarded("message", id, [&] { return msg.emit({probe.time, probe.history, s}, rng); });
    }
    ++result.probes_run;
    if (!(probe.messages[0] == probe.messages[1] && probe.messages[1] == probe.messages[2])) {
      result.passed = false;
      result.witness = std::move(probe);
      return result;
    }
  }
  return result;
}

ModelReport model_report(ExtendedModel const& model, ReportConfig const& config) {
  if (config.runs < 9) throw PreconditionError("model_report needs at least 9 runs");

  ModelReport report;
  report.model_name = model.name;
  report.runs = config.runs;
  report.seed = config.seed;

  if (model.message) {
    report.message_audit = check_setting_independence(*model.message, config.audit_probes, config.seed);
    if (!report.message_audit->passed) {
      std::ostringstream why;
      why << "model '" << model.name << "' refused: message function '" << model.message->name
          << "' depends on the current setting (probe " << report.message_audit->witness->probe_id << ")";
      throw ModelRefused(why.str());
    }
  }

  SimulationConfig const sim{config.runs, config.seed, config.schedule, config.threads};
  ShardSummary const summary = execute(model, sim, config.keep_log ? &report.log : nullptr);

  report.stats = summary.stats;
  report.perfect_correlation = summary.diagonal;
  report.estimate = average_estimate(report.stats);
  report.average_runweighted = run_weighted_average(report.stats);
  report.empty_pairs = empty_pairs(report.stats);
  if (report.empty_pairs.empty()) {
    report.empirical = empirical_nine(report.stats);
    report.average_uniform = average_from_nine(*report.empirical);
    report.marginals = marginal_consistency(*report.empirical);
    report.realizability = joint_realizability(*report.empirical);
    if (config.compute_gap) report.realizability_gap = realizability_gap(*report.empirical);
  }
  return report;
}

}  // namespace mermin
