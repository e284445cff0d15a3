#pragma once

#include "mermin/core_types.hpp"
#include "mermin/realizability.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mermin {

/// Cell counts per setting pair. Shard-local; shards combine with merge().
struct StatsAccumulator {
  std::array<std::array<std::uint64_t, 4>, 9> counts{};
  std::uint64_t total_runs = 0;

  std::uint64_t pair_total(SettingPair p) const;
  std::uint64_t count(SettingPair p, Outcome left, Outcome right) const {
    return counts[static_cast<std::size_t>(p.index())][static_cast<std::size_t>(cell_index(left, right))];
  }

  friend bool operator==(StatsAccumulator const&, StatsAccumulator const&) = default;
};

StatsAccumulator& accumulate(StatsAccumulator& acc, RunRecord const& record);
StatsAccumulator accumulate_all(std::span<RunRecord const> records);

/// Cellwise sum.
StatsAccumulator merge(StatsAccumulator const& a, StatsAccumulator const& b);

/// Each cell as the exact ratio count / pair_total. Throws EmptyPair naming
/// every pair that was never sampled.
NineDistributions empirical_nine(StatsAccumulator const& acc);

/// Pairs with no runs, canonical order.
std::vector<SettingPair> empty_pairs(StatsAccumulator const& acc);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Mean product over all runs with standard error sd / sqrt(n), where sd uses
/// the n - 1 denominator. Requires total_runs >= 2.
Estimate average_estimate(StatsAccumulator const& acc);

/// Sum of products / total_runs, exactly (each run weighted equally).
Rational run_weighted_average(StatsAccumulator const& acc);

/// average_from_nine(empirical_nine(acc)) (each pair weighted 1/9).
Rational uniform_pair_average(StatsAccumulator const& acc);

}  // namespace mermin
