#include "mermin/fallacy_audit.hpp"

#include "mermin/errors.hpp"
#include "mermin/random_stream.hpp"

#include <cctype>
#include <charconv>

namespace mermin {

char to_char(Magnet m) noexcept { return m == Magnet::north ? 'N' : 'S'; }

void CoinConfig::validate() const {
  for (auto const* bias : {&bias_n, &bias_s}) {
    if (*bias < 0 || *bias > 1) throw PreconditionError("coin bias outside [0,1]: " + to_string(*bias));
  }
}

std::vector<Magnet> parse_magnet_choices(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }

  auto magnet_of = [](char c) {
    if (c == 'N' || c == 'n') return Magnet::north;
    if (c == 'S' || c == 's') return Magnet::south;
    throw ParseError(std::string("unknown magnet choice '") + c + "'");
  };

  std::vector<Magnet> out;
  std::string_view rest = compact;
  while (!rest.empty()) {
    auto const comma = rest.find(',');
    std::string_view token = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (token.empty()) continue;

    if (auto star = token.find('*'); star != std::string_view::npos) {
      if (star != 1) throw ParseError("repeat must look like N*100, got '" + std::string(token) + "'");
      std::uint64_t repeat = 0;
      auto const digits = token.substr(2);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), repeat);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw ParseError("bad repeat count in '" + std::string(token) + "'");
      }
      out.insert(out.end(), repeat, magnet_of(token[0]));
    } else {
      for (char c : token) out.push_back(magnet_of(c));
    }
  }
  return out;
}

TossLog run_coin_experiment(CoinConfig const& cfg, std::span<Magnet const> choices, std::uint64_t seed) {
  if (choices.empty()) throw PreconditionError("coin experiment needs at least one magnet choice");
  cfg.validate();
  BernoulliThreshold const heads_n(cfg.bias_n);
  BernoulliThreshold const heads_s(cfg.bias_s);

  TossLog log;
  log.reserve(choices.size());
  for (std::uint64_t k = 0; k < choices.size(); ++k) {
    RandomStream rng(seed, k, StreamComponent::coin);
    Magnet const m = choices[k];
    log.push_back({k, m, m == Magnet::north ? heads_n(rng) : heads_s(rng)});
  }
  return log;
}

Rational naive_double_count(TossLog const& log) {
  if (log.empty()) throw PreconditionError("naive_double_count needs a non-empty log");
  std::uint64_t potential_heads = 0;
  std::uint64_t elements = 0;
  for (auto const& toss : log) {
    // The observed face is ignored: both faces are counted as if co-realised.
    (void)toss.head;
    for (bool face_is_head : {true, false}) {
      potential_heads += face_is_head ? 1 : 0;
      ++elements;
    }
  }
  return Rational(Integer(potential_heads), Integer(elements));
}

Rational honest_frequency(TossLog const& log) {
  if (log.empty()) throw PreconditionError("honest_frequency needs a non-empty log");
  std::uint64_t heads = 0;
  for (auto const& toss : log) heads += toss.head ? 1 : 0;
  return Rational(Integer(heads), Integer(log.size()));
}

std::uint64_t CountLedger::total() const {
  std::uint64_t sum = 0;
  for (auto const& e : entries) sum += e.count;
  return sum;
}

AuditResult audit_counts(CountLedger const& ledger, std::uint64_t run_count) {
  if (run_count < 1) throw PreconditionError("audit_counts needs run_count >= 1");
  AuditResult result;
  result.counted = ledger.total();
  result.runs = run_count;
  result.ok = result.counted == run_count;
  if (!result.ok) result.overcount_factor = Rational(Integer(result.counted), Integer(run_count));
  return result;
}

CountLedger actual_ledger(TossLog const& log) {
  CountLedger ledger{{{"heads", 0}, {"tails", 0}}, log.size()};
  for (auto const& toss : log) ++ledger.entries[toss.head ? 0 : 1].count;
  return ledger;
}

CountLedger double_count_ledger(TossLog const& log) {
  return {{{"potential heads", log.size()}, {"potential tails", log.size()}}, log.size()};
}

CountLedger run_log_ledger(std::span<RunRecord const> records) {
  CountLedger ledger{{{"product +1", 0}, {"product -1", 0}}, records.size()};
  for (auto const& r : records) ++ledger.entries[r.product() > 0 ? 0 : 1].count;
  return ledger;
}

CountLedger nine_settings_ledger(std::span<RunRecord const> records) {
  CountLedger ledger;
  ledger.declared_run_count = records.size();
  for (int i = 0; i < kPairCount; ++i) {
    ledger.entries.push_back({"potential " + to_string(SettingPair::from_index(i)), 0});
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (auto& entry : ledger.entries) ++entry.count;
  }
  return ledger;
}

}  // namespace mermin
