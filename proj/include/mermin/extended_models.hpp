#pragma once

#include "mermin/core_types.hpp"
#include "mermin/random_stream.hpp"
#include "mermin/realizability.hpp"
#include "mermin/stats_harness.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mermin {

enum class Station : std::uint8_t { s1 = 1, s2 = 2 };

/// Opaque payloads. Their meaning is private to the model that produces them.
struct SourceValue {
  std::uint64_t bits = 0;
  friend bool operator==(SourceValue, SourceValue) = default;
};
struct ParameterValue {
  std::uint64_t bits = 0;
  friend bool operator==(ParameterValue, ParameterValue) = default;
};
struct Message {
  std::uint64_t bits = 0;
  friend bool operator==(Message, Message) = default;
};

/// Shared source. Sees a time and its randomness, never a setting.
using SourceProcess = std::function<SourceValue(Time, RandomStream&)>;

/// Station-local parameter process lambda(setting, t).
using ParameterProcess = std::function<ParameterValue(Setting, Time, RandomStream&)>;

/// Local measurement-time law: the station's own setting, the run's emission
/// time (setting independent, common to both particles) and local randomness.
using TimeLaw = std::function<Time(Station, Setting, Time emission, RandomStream&)>;

struct MessageInput {
  Time time;
  std::span<RunRecord const> history;
  /// The station's current setting. Present only so that the harness can
  /// audit message functions; a function that reads it is refused.
  Setting setting = Setting::a;
};

struct MessageFunction {
  std::string name;
  std::function<Message(MessageInput const&, RandomStream&)> emit;
};

/// Everything a station may look at. The remote setting is not here.
struct StationInput {
  Setting setting = Setting::a;
  SourceValue source;
  Time time;
  ParameterValue parameter;
  std::optional<Message> received;
};

using OutcomeFunction = std::function<Outcome(StationInput const&)>;

struct ExtendedModel {
  std::string name;
  SourceProcess source;
  ParameterProcess param_s1;
  ParameterProcess param_s2;
  TimeLaw time_law;
  std::optional<MessageFunction> message;
  OutcomeFunction outcome_s1;
  OutcomeFunction outcome_s2;
};

//---------------------------------------------------------------------------//
// Built-in models
//---------------------------------------------------------------------------//

/// Setting-independent instruction sets drawn from p; times are irrelevant.
ExtendedModel static_classical(ProbabilityVector8 const& p);

/// Both stations measure at the emission time. The outcome for setting j is
/// the colour of row slot(t) at j, where slot(t) splits [0,1) into 8 slots,
/// so A_j(t) = B_j(t) pointwise.
ExtendedModel time_slot_model();

/// Same outcome functions as time_slot_model, but each station delays its
/// measurement by one slot per setting index plus a local coin-flip slot, so
/// the two stations usually look at different slots.
ExtendedModel desync_time_model();

/// Parses "static:uniform", "static:point:GGR", "static:<8 rationals>",
/// "timeslot", "desync".
ExtendedModel builtin_model(std::string_view spec);

namespace messages {
MessageFunction constant();
MessageFunction time_only();
/// Encodes the current setting. Always fails the independence audit.
MessageFunction copies_setting();
MessageFunction by_name(std::string_view name);
}  // namespace messages

//---------------------------------------------------------------------------//
// Running
//---------------------------------------------------------------------------//

struct RunSeed {
  std::uint64_t master = 0;
  std::uint64_t run_id = 0;
};

/// One run. Throws ModelEvaluationFailure if a model function throws or is
/// missing.
RunRecord run_once(ExtendedModel const& model, SettingPair pair, RunSeed seed,
                   std::span<RunRecord const> history = {});

enum class PairSchedule { random, balanced };

/// Pair for a run: uniform over the nine pairs from the run's pair stream, or
/// round-robin on run_id for the balanced schedule.
SettingPair scheduled_pair(PairSchedule schedule, RunSeed seed);

struct SimulationConfig {
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  PairSchedule schedule = PairSchedule::random;
  unsigned threads = 1;
};

/// Full run log ordered by run_id. The log is identical for any thread count.
/// Models with a message function run sequentially because messages may read
/// the history of earlier runs.
std::vector<RunRecord> simulate(ExtendedModel const& model, SimulationConfig const& config);

//---------------------------------------------------------------------------//
// Checks
//---------------------------------------------------------------------------//

struct AgreementCounts {
  std::uint64_t runs = 0;
  std::uint64_t agreements = 0;
  std::uint64_t equal_time_runs = 0;
  std::uint64_t equal_time_agreements = 0;

  std::optional<Rational> rate() const;
  std::optional<Rational> equal_time_rate() const;
  void add(RunRecord const& record);
  AgreementCounts& operator+=(AgreementCounts const& other);
};

struct PerfectCorrelationReport {
  std::array<AgreementCounts, 3> per_setting{};
  AgreementCounts overall;
};

/// Diagonal runs only; the setting of each run is uniform over a, b, c.
PerfectCorrelationReport check_perfect_correlation(ExtendedModel const& model, std::uint64_t n_runs,
                                                   std::uint64_t seed);

/// Agreement summary over the diagonal runs of an existing log.
PerfectCorrelationReport perfect_correlation_from_log(std::span<RunRecord const> records);

struct IndependenceProbe {
  std::uint64_t probe_id = 0;
  Time time;
  std::vector<RunRecord> history;
  std::array<Message, 3> messages{};  ///< emitted with the setting slot set to a, b, c
};

struct SettingIndependenceResult {
  bool passed = true;
  std::uint64_t probes_run = 0;
  std::optional<IndependenceProbe> witness;
};

/// Evaluates the message function on random (time, history, randomness)
/// probes with the setting slot set to each of a, b, c and identical
/// randomness; passes iff all three messages agree on every probe.
SettingIndependenceResult check_setting_independence(MessageFunction const& msg, std::uint64_t probe_count,
                                                     std::uint64_t seed);

struct ReportConfig {
  std::uint64_t runs = 0;
  /// Also solve for the realizability gap of the empirical tables.
  bool compute_gap = true;
  std::uint64_t seed = 0;
  PairSchedule schedule = PairSchedule::random;
  unsigned threads = 1;
  std::uint64_t audit_probes = 1000;
  bool keep_log = false;
};

struct ModelReport {
  std::string model_name;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  StatsAccumulator stats;
  std::vector<SettingPair> empty_pairs;
  std::optional<NineDistributions> empirical;
  std::optional<Rational> average_uniform;
  Rational average_runweighted;
  Estimate estimate;
  std::optional<MarginalReport> marginals;
  std::optional<RealizabilityResult> realizability;
  std::optional<RealizabilityGap> realizability_gap;
  PerfectCorrelationReport perfect_correlation;
  std::optional<SettingIndependenceResult> message_audit;
  std::vector<RunRecord> log;  ///< filled only with ReportConfig::keep_log
};

/// Simulates and analyses a model. Requires runs >= 9. Throws ModelRefused if
/// the model's message function fails the setting-independence audit. When
/// some pair was never sampled, the table-based fields stay empty and
/// empty_pairs lists the missing pairs.
ModelReport model_report(ExtendedModel const& model, ReportConfig const& config);

}  // namespace mermin
