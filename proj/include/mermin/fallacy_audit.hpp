#pragma once

#include "mermin/core_types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mermin {

enum class Magnet : std::uint8_t { north, south };

char to_char(Magnet m) noexcept;

/// Probability of heads under each magnet position. Not taken from any
/// experiment: 7/10 and 3/10 are configuration defaults.
struct CoinConfig {
  Rational bias_n{7, 10};
  Rational bias_s{3, 10};

  /// Throws PreconditionError when a bias lies outside [0,1].
  void validate() const;
};

struct Toss {
  std::uint64_t index = 0;
  Magnet magnet = Magnet::north;
  bool head = false;

  friend bool operator==(Toss const&, Toss const&) = default;
};

using TossLog = std::vector<Toss>;

/// Parses magnet choices. Accepts comma separated tokens, each a literal run
/// of N/S letters ("NNSN") or a repeat "N*1000". Whitespace is ignored.
std::vector<Magnet> parse_magnet_choices(std::string_view text);

/// One toss per choice; toss k draws from stream (seed, k, coin).
TossLog run_coin_experiment(CoinConfig const& cfg, std::span<Magnet const> choices, std::uint64_t seed);

/// Counts both potential outcomes of every toss as elements (head 1, tail 0)
/// and returns potential heads / elements counted. Equals 1/2 for any log.
Rational naive_double_count(TossLog const& log);

/// heads / tosses.
Rational honest_frequency(TossLog const& log);

struct LedgerEntry {
  std::string label;
  std::uint64_t count = 0;
};

struct CountLedger {
  std::vector<LedgerEntry> entries;
  std::uint64_t declared_run_count = 0;

  std::uint64_t total() const;
};

struct AuditResult {
  bool ok = true;
  std::uint64_t counted = 0;
  std::uint64_t runs = 0;
  /// counted / runs; reported when counted differs from runs.
  std::optional<Rational> overcount_factor;
};

/// ok iff the ledger counts exactly one element per run.
AuditResult audit_counts(CountLedger const& ledger, std::uint64_t run_count);

/// Actual outcomes: one element per toss (heads, tails).
CountLedger actual_ledger(TossLog const& log);
/// Both potential outcomes of every toss.
CountLedger double_count_ledger(TossLog const& log);
/// Observed products: one element per run (product +1, product -1).
CountLedger run_log_ledger(std::span<RunRecord const> records);
/// All nine setting pairs counted for every run.
CountLedger nine_settings_ledger(std::span<RunRecord const> records);

}  // namespace mermin
