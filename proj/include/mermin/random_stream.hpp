#pragma once

#include "mermin/core_types.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace mermin {

/// Named components of a run. Each component of each run gets its own stream,
/// derived from (master seed, run id, component), so any part of any run can
/// be replayed on its own and execution order never affects the draws.
enum class StreamComponent : std::uint64_t {
  pair = 1,
  emission = 2,
  source = 3,
  time_s1 = 4,
  time_s2 = 5,
  param_s1 = 6,
  param_s2 = 7,
  message_s1 = 8,
  message_s2 = 9,
  coin = 10,
  probe = 11,
};

/// SplitMix64 sequence. Satisfies std::uniform_random_bit_generator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t state) noexcept : state_(state) {}
  RandomStream(std::uint64_t master_seed, std::uint64_t run_id, StreamComponent component) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform time in [0,1) at full 64-bit resolution.
  Time next_time() noexcept { return Time{next_u64()}; }

  /// Uniform integer in [0, n) without modulo bias (Lemire's method).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Mixes one word into another (SplitMix64 finaliser); used for seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Bernoulli(p) with p given exactly. The threshold floor(p * 2^64) is
/// computed once in exact arithmetic, so a draw is one integer comparison.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(Rational const& p);
  bool operator()(RandomStream& rng) const noexcept { return always_ || rng.next_u64() < threshold_; }

 private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

/// Categorical draw over an exact weight vector via cumulative 64-bit
/// thresholds.
class CategoricalThresholds {
 public:
  explicit CategoricalThresholds(std::vector<Rational> const& weights);
  explicit CategoricalThresholds(ProbabilityVector8 const& p);

  int operator()(RandomStream& rng) const noexcept;
  int size() const noexcept { return static_cast<int>(cumulative_.size()) + 1; }

 private:
  // Upper thresholds of every category except the last, which takes the rest.
  std::vector<std::uint64_t> cumulative_;
  std::vector<bool> saturated_;
};

}  // namespace mermin
