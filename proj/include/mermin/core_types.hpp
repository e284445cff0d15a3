#pragma once

#include "mermin/rational.hpp"

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mermin {

template <typename Scalar, int Rows>
using Vector = Eigen::Matrix<Scalar, Rows, 1>;

//---------------------------------------------------------------------------//
// Settings and outcomes
//---------------------------------------------------------------------------//

/// Detector setting. Canonical order a < b < c.
enum class Setting : std::uint8_t { a = 0, b = 1, c = 2 };

inline constexpr std::array<Setting, 3> kSettings{Setting::a, Setting::b, Setting::c};

constexpr int index(Setting s) noexcept { return static_cast<int>(s); }
char to_char(Setting s) noexcept;
Setting parse_setting(std::string_view text);

/// Station outcome. Green flashes are +1, red flashes are -1.
enum class Outcome : std::int8_t { red = -1, green = +1 };

constexpr int value(Outcome o) noexcept { return static_cast<int>(o); }
constexpr Outcome outcome_from_sign(int sign) noexcept {
  return sign > 0 ? Outcome::green : Outcome::red;
}
inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::green, Outcome::red};
char to_color(Outcome o) noexcept;

/// Ordered (S1 setting, S2 setting). Canonical order aa, ab, ac, ba, ..., cc.
struct SettingPair {
  Setting left{Setting::a};
  Setting right{Setting::a};

  constexpr int index() const noexcept { return 3 * mermin::index(left) + mermin::index(right); }
  constexpr bool diagonal() const noexcept { return left == right; }
  static constexpr SettingPair from_index(int i) noexcept {
    return {static_cast<Setting>(i / 3), static_cast<Setting>(i % 3)};
  }

  friend constexpr auto operator<=>(SettingPair const&, SettingPair const&) = default;
};

inline constexpr int kPairCount = 9;
std::string to_string(SettingPair p);
SettingPair parse_pair(std::string_view text);

/// Cells of a 2x2 outcome table in canonical order (+,+), (+,-), (-,+), (-,-).
constexpr int cell_index(Outcome left, Outcome right) noexcept {
  return (left == Outcome::green ? 0 : 2) + (right == Outcome::green ? 0 : 1);
}
constexpr Outcome cell_left(int cell) noexcept { return cell < 2 ? Outcome::green : Outcome::red; }
constexpr Outcome cell_right(int cell) noexcept { return cell % 2 == 0 ? Outcome::green : Outcome::red; }
std::string_view cell_label(int cell) noexcept;

//---------------------------------------------------------------------------//
// Instruction sets
//---------------------------------------------------------------------------//

/// One of the eight colour triples a particle pair can carry. Rows follow the
/// canonical order RRR, RRG, RGR, GRR, GGR, GRG, RGG, GGG.
class InstructionSet {
 public:
  static constexpr int kCount = 8;

  constexpr InstructionSet() = default;
  static InstructionSet from_row(int row);
  static InstructionSet parse(std::string_view colors);

  constexpr int row() const noexcept { return row_; }
  Outcome color(Setting s) const noexcept;
  std::string name() const;

  /// True for the six rows carrying both colours.
  bool mixed() const noexcept { return row_ != 0 && row_ != 7; }

  friend constexpr auto operator<=>(InstructionSet, InstructionSet) = default;

 private:
  explicit constexpr InstructionSet(int row) : row_(row) {}
  int row_ = 0;
};

std::array<InstructionSet, 8> const& all_instruction_sets();

/// Signs of each row, one column per setting.
Eigen::Matrix<int, 8, 3> const& color_matrix();

/// The 8x9 table of products colour(i) * colour(j), columns in canonical pair
/// order.
Eigen::Matrix<int, 8, 9> product_table();

inline Outcome product_entry(InstructionSet lambda, SettingPair pair) {
  return outcome_from_sign(value(lambda.color(pair.left)) * value(lambda.color(pair.right)));
}

//---------------------------------------------------------------------------//
// Probability vectors
//---------------------------------------------------------------------------//

/// Exact probability weights over the eight instruction sets. Entries are
/// non-negative and sum exactly to one.
class ProbabilityVector8 {
 public:
  using Values = Vector<Rational, 8>;

  /// Validates raw weights. Throws NegativeEntry or SumNotOne.
  static ProbabilityVector8 validate(std::span<Rational const> raw);
  static ProbabilityVector8 uniform();
  static ProbabilityVector8 point_mass(InstructionSet lambda);

  Values const& values() const noexcept { return p_; }
  Rational const& operator[](int row) const { return p_(row); }
  Rational const& operator[](InstructionSet lambda) const { return p_(lambda.row()); }

  /// True when every row with positive weight is a mixed row.
  bool supported_on_mixed_rows() const;

  friend bool operator==(ProbabilityVector8 const& x, ProbabilityVector8 const& y) {
    return x.p_ == y.p_;
  }

 private:
  explicit ProbabilityVector8(Values p) : p_(std::move(p)) {}
  Values p_;
};

inline ProbabilityVector8 validate_probability_vector(std::span<Rational const> raw) {
  return ProbabilityVector8::validate(raw);
}

//---------------------------------------------------------------------------//
// Time and run records
//---------------------------------------------------------------------------//

/// A point in [0,1) stored as a 64-bit binary fraction: value = bits / 2^64.
/// Two times are equal only when bit-identical.
struct Time {
  std::uint64_t bits = 0;

  double to_double() const noexcept { return static_cast<double>(bits) * 0x1p-64; }
  /// Slot index when [0,1) is split into 2^k equal parts.
  std::uint64_t slot(unsigned k) const noexcept { return k == 0 ? 0 : bits >> (64 - k); }
  /// Wrapping shift, i.e. addition modulo 1.
  Time shifted(std::uint64_t delta) const noexcept { return Time{bits + delta}; }

  friend constexpr auto operator<=>(Time, Time) = default;
};

/// 20 truncated decimal places; distinct times always format differently.
std::string to_string(Time t);
/// Inverse of to_string(Time); recovers the exact bits.
Time parse_time(std::string_view text);

struct RunRecord {
  std::uint64_t run_id = 0;
  SettingPair pair;
  Time t1;
  Time t2;
  Outcome outcome1 = Outcome::green;
  Outcome outcome2 = Outcome::green;

  int product() const noexcept { return value(outcome1) * value(outcome2); }

  friend bool operator==(RunRecord const&, RunRecord const&) = default;
};

}  // namespace mermin
