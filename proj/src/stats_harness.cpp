#include "mermin/stats_harness.hpp"

#include "mermin/errors.hpp"

#include <cmath>

namespace mermin {

std::uint64_t StatsAccumulator::pair_total(SettingPair p) const {
  std::uint64_t total = 0;
  for (auto c : counts[static_cast<std::size_t>(p.index())]) total += c;
  return total;
}

StatsAccumulator& accumulate(StatsAccumulator& acc, RunRecord const& record) {
  ++acc.counts[static_cast<std::size_t>(record.pair.index())]
              [static_cast<std::size_t>(cell_index(record.outcome1, record.outcome2))];
  ++acc.total_runs;
  return acc;
}

StatsAccumulator accumulate_all(std::span<RunRecord const> records) {
  StatsAccumulator acc;
  for (auto const& r : records) accumulate(acc, r);
  return acc;
}

StatsAccumulator merge(StatsAccumulator const& a, StatsAccumulator const& b) {
  StatsAccumulator out;
  for (std::size_t p = 0; p < 9; ++p) {
    for (std::size_t c = 0; c < 4; ++c) out.counts[p][c] = a.counts[p][c] + b.counts[p][c];
  }
  out.total_runs = a.total_runs + b.total_runs;
  return out;
}

std::vector<SettingPair> empty_pairs(StatsAccumulator const& acc) {
  std::vector<SettingPair> out;
  for (int i = 0; i < kPairCount; ++i) {
    if (acc.pair_total(SettingPair::from_index(i)) == 0) out.push_back(SettingPair::from_index(i));
  }
  return out;
}

NineDistributions empirical_nine(StatsAccumulator const& acc) {
  if (auto missing = empty_pairs(acc); !missing.empty()) {
    std::string names;
    for (auto p : missing) names += (names.empty() ? "" : ", ") + to_string(p);
    throw EmptyPair("no runs recorded for setting pair(s): " + names);
  }
  NineDistributions out;
  for (int i = 0; i < kPairCount; ++i) {
    auto const pair = SettingPair::from_index(i);
    Integer const total = acc.pair_total(pair);
    for (int cell = 0; cell < 4; ++cell) {
      out[pair].probs(cell) = Rational(Integer(acc.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(cell)]), total);
    }
  }
  return out;
}

namespace {

/// (runs with product +1, runs with product -1)
std::pair<std::uint64_t, std::uint64_t> sign_counts(StatsAccumulator const& acc) {
  std::uint64_t plus = 0;
  std::uint64_t minus = 0;
  for (auto const& pair : acc.counts) {
    plus += pair[0] + pair[3];
    minus += pair[1] + pair[2];
  }
  return {plus, minus};
}

}  // namespace

Estimate average_estimate(StatsAccumulator const& acc) {
  if (acc.total_runs < 2) throw PreconditionError("average_estimate needs at least two runs");
  auto const [plus, minus] = sign_counts(acc);
  double const n = static_cast<double>(acc.total_runs);
  double const mean = (static_cast<double>(plus) - static_cast<double>(minus)) / n;
  // Products are +-1, so sum of squares is n.
  double const variance = std::max(0.0, (n - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(variance / n), acc.total_runs};
}

Rational run_weighted_average(StatsAccumulator const& acc) {
  if (acc.total_runs == 0) throw PreconditionError("run_weighted_average needs at least one run");
  auto const [plus, minus] = sign_counts(acc);
  return Rational(Integer(plus) - Integer(minus), Integer(acc.total_runs));
}

Rational uniform_pair_average(StatsAccumulator const& acc) { return average_from_nine(empirical_nine(acc)); }

}  // namespace mermin
