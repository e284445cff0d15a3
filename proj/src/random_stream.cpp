#include "mermin/random_stream.hpp"

#include "mermin/errors.hpp"

namespace mermin {

namespace {

Integer const& two_pow_64() {
  static Integer const value = Integer(1) << 64;
  return value;
}

/// floor(p * 2^64) for p in [0,1); callers handle p >= 1.
std::uint64_t scaled_threshold(Rational const& p) {
  Integer const scaled = (boost::multiprecision::numerator(p) * two_pow_64()) / boost::multiprecision::denominator(p);
  return scaled.convert_to<std::uint64_t>();
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t run_id, StreamComponent component) noexcept
    : state_(mix64(mix64(mix64(master_seed) ^ run_id) ^ static_cast<std::uint64_t>(component))) {}

std::uint64_t RandomStream::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  for (;;) {
    unsigned __int128 const m = static_cast<unsigned __int128>(next_u64()) * n;
    auto const low = static_cast<std::uint64_t>(m);
    if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

BernoulliThreshold::BernoulliThreshold(Rational const& p) {
  if (p < 0 || p > 1) throw PreconditionError("Bernoulli probability outside [0,1]: " + to_string(p));
  if (p == 1) {
    always_ = true;
  } else {
    threshold_ = scaled_threshold(p);
  }
}

CategoricalThresholds::CategoricalThresholds(std::vector<Rational> const& weights) {
  if (weights.empty()) throw PreconditionError("categorical law needs at least one category");
  Rational cumulative = 0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    if (weights[k] < 0) throw PreconditionError("negative categorical weight");
    cumulative += weights[k];
    bool const saturated = cumulative >= 1;
    saturated_.push_back(saturated);
    cumulative_.push_back(saturated ? 0 : scaled_threshold(cumulative));
  }
}

CategoricalThresholds::CategoricalThresholds(ProbabilityVector8 const& p)
    : CategoricalThresholds(std::vector<Rational>(p.values().data(), p.values().data() + 8)) {}

int CategoricalThresholds::operator()(RandomStream& rng) const noexcept {
  std::uint64_t const u = rng.next_u64();
  for (std::size_t k = 0; k < cumulative_.size(); ++k) {
    if (saturated_[k] || u < cumulative_[k]) return static_cast<int>(k);
  }
  return static_cast<int>(cumulative_.size());
}

}  // namespace mermin
