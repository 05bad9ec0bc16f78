#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace mayocut {

using Int = boost::multiprecision::cpp_int;

// Exact scalar used throughout the discrete (exact-mode) pipeline.
using Rat = boost::multiprecision::cpp_rational;

// Builds num/den with the sign normalized onto the numerator. Throws
// invalid_input on a zero denominator.
Rat make_rat(Int num, Int den);

// Parses "p/q", a plain integer, or a decimal literal. Decimal digits are
// taken literally ("0.1" -> 1/10), never routed through binary floating
// point. Returns nullopt on malformed input.
std::optional<Rat> parse_rat(std::string_view text);

// Every finite double is a binary rational; this conversion is exact.
Rat rat_from_double(double x);

double rat_to_double(const Rat& q);

// "p" when the denominator is 1, "p/q" otherwise.
std::string rat_to_string(const Rat& q);

}  // namespace mayocut
