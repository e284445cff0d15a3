#include "mermin/core_types.hpp"

#include "mermin/errors.hpp"

#include <cstdio>

namespace mermin {

namespace {

constexpr std::array<std::string_view, 8> kRowNames{"RRR", "RRG", "RGR", "GRR",
                                                     "GGR", "GRG", "RGG", "GGG"};

constexpr std::array<std::string_view, 4> kCellLabels{"++", "+-", "-+", "--"};

}  // namespace

char to_char(Setting s) noexcept { return static_cast<char>('a' + index(s)); }

Setting parse_setting(std::string_view text) {
  if (text == "a") return Setting::a;
  if (text == "b") return Setting::b;
  if (text == "c") return Setting::c;
  throw ParseError("unknown setting '" + std::string(text) + "'");
}

char to_color(Outcome o) noexcept { return o == Outcome::green ? 'G' : 'R'; }

std::string to_string(SettingPair p) { return {to_char(p.left), to_char(p.right)}; }

SettingPair parse_pair(std::string_view text) {
  if (text.size() != 2) throw ParseError("setting pair must be two letters, got '" + std::string(text) + "'");
  return {parse_setting(text.substr(0, 1)), parse_setting(text.substr(1, 1))};
}

std::string_view cell_label(int cell) noexcept { return kCellLabels[static_cast<std::size_t>(cell)]; }

InstructionSet InstructionSet::from_row(int row) {
  if (row < 0 || row >= kCount) throw ParseError("instruction set row out of range: " + std::to_string(row));
  return InstructionSet(row);
}

InstructionSet InstructionSet::parse(std::string_view colors) {
  for (int row = 0; row < kCount; ++row) {
    if (kRowNames[static_cast<std::size_t>(row)] == colors) return InstructionSet(row);
  }
  throw ParseError("unknown instruction set '" + std::string(colors) + "'");
}

Outcome InstructionSet::color(Setting s) const noexcept {
  return kRowNames[static_cast<std::size_t>(row_)][static_cast<std::size_t>(index(s))] == 'G'
             ? Outcome::green
             : Outcome::red;
}

std::string InstructionSet::name() const { return std::string(kRowNames[static_cast<std::size_t>(row_)]); }

std::array<InstructionSet, 8> const& all_instruction_sets() {
  static auto const rows = [] {
    std::array<InstructionSet, 8> out;
    for (int r = 0; r < 8; ++r) out[static_cast<std::size_t>(r)] = InstructionSet::from_row(r);
    return out;
  }();
  return rows;
}

Eigen::Matrix<int, 8, 3> const& color_matrix() {
  static auto const colors = [] {
    Eigen::Matrix<int, 8, 3> m;
    for (auto lambda : all_instruction_sets()) {
      for (auto s : kSettings) m(lambda.row(), index(s)) = value(lambda.color(s));
    }
    return m;
  }();
  return colors;
}

Eigen::Matrix<int, 8, 9> product_table() {
  Eigen::Matrix<int, 8, 9> table;
  auto const& colors = color_matrix();
  for (int pair = 0; pair < kPairCount; ++pair) {
    auto const p = SettingPair::from_index(pair);
    table.col(pair) = colors.col(index(p.left)).cwiseProduct(colors.col(index(p.right)));
  }
  return table;
}

ProbabilityVector8 ProbabilityVector8::validate(std::span<Rational const> raw) {
  if (raw.size() != 8) {
    throw PreconditionError("probability vector needs 8 entries, got " + std::to_string(raw.size()));
  }
  Values p;
  Rational sum = 0;
  for (int i = 0; i < 8; ++i) {
    auto const& entry = raw[static_cast<std::size_t>(i)];
    if (entry < 0) {
      throw NegativeEntry("entry " + std::to_string(i + 1) + " (" + all_instruction_sets()[static_cast<std::size_t>(i)].name() +
                          ") is negative: " + to_string(entry));
    }
    p(i) = entry;
    sum += entry;
  }
  if (sum != 1) {
    Rational deficit = 1 - sum;
    throw SumNotOne("probability vector sums to " + to_string(sum) + " (deficit " + to_string(deficit) + ")",
                    to_string(deficit));
  }
  return ProbabilityVector8(std::move(p));
}

ProbabilityVector8 ProbabilityVector8::uniform() {
  Values p;
  p.setConstant(Rational(1, 8));
  return ProbabilityVector8(std::move(p));
}

ProbabilityVector8 ProbabilityVector8::point_mass(InstructionSet lambda) {
  Values p;
  p.setZero();
  p(lambda.row()) = 1;
  return ProbabilityVector8(std::move(p));
}

bool ProbabilityVector8::supported_on_mixed_rows() const { return p_(0) == 0 && p_(7) == 0; }

std::string to_string(Time t) {
  // floor(bits * 10^20 / 2^64), split in two 10-digit halves to stay in 128 bits.
  constexpr unsigned __int128 kTen10 = 10'000'000'000ULL;
  unsigned __int128 const first = static_cast<unsigned __int128>(t.bits) * kTen10;
  auto const high = static_cast<std::uint64_t>(first >> 64);
  auto const rest = static_cast<std::uint64_t>(first);
  auto const low = static_cast<std::uint64_t>((static_cast<unsigned __int128>(rest) * kTen10) >> 64);

  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "0.%010llu%010llu", static_cast<unsigned long long>(high),
                static_cast<unsigned long long>(low));
  return buffer;
}

Time parse_time(std::string_view text) {
  if (!text.starts_with("0.") || text.size() != 22) throw ParseError("malformed time '" + std::string(text) + "'");
  std::string_view const digits = text.substr(2);
  for (char c : digits) {
    if (c < '0' || c > '9') throw ParseError("malformed time '" + std::string(text) + "'");
  }
  // The printed value D truncates bits * 10^20 / 2^64; the interval
  // [D, D+1) / 10^20 is narrower than 2^-64 and holds exactly one candidate.
  auto const first = digits.find_first_not_of('0');
  Integer const decimal = first == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(first)));
  Integer const scale = boost::multiprecision::pow(Integer(10), 20);
  Integer const numerator = decimal << 64;
  Integer bits = numerator / scale;
  if (bits * scale != numerator) bits += 1;
  return Time{bits.convert_to<std::uint64_t>()};
}

}  // namespace mermin
