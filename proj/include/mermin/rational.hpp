#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace mermin {

/// Exact, unbounded rational number (GMP backed). Always kept in lowest terms
/// with a positive denominator. Expression templates are disabled so that the
/// type composes cleanly with Eigen's own expression templates.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Canonical text form "num/den" (denominator always present, e.g. "1/1").
std::string to_string(Rational const& r);

/// Parses "num/den", a plain integer, or a decimal literal such as "0.125",
/// "-2.5e-3". Decimal input is converted digit by digit, never through a
/// binary float. Throws ParseError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nearest double, for reporting only.
double to_double(Rational const& r);

}  // namespace mermin
