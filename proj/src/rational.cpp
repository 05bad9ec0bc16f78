#include "mayocut/rational.hpp"

#include <cctype>
#include <cmath>

#include "mayocut/errors.hpp"

namespace mayocut {

Rat make_rat(Int num, Int den) {
  if (den == 0) throw invalid_input("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rat(std::move(num), std::move(den));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rat> parse_rat(std::string_view text) {
  // [+-]? digits ( "/" digits | "." digits )?   -- no exponents
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string_view::npos && dot != std::string_view::npos) return std::nullopt;

  Rat value;
  if (slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash);
    std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) return std::nullopt;
    Int den{std::string(q)};
    if (den == 0) return std::nullopt;
    value = Rat(Int{std::string(p)}, den);
  } else if (dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    Int num = whole.empty() ? Int{0} : Int{std::string(whole)};
    Int den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    value = Rat(num, den);
  } else {
    if (!all_digits(s)) return std::nullopt;
    value = Rat(Int{std::string(s)});
  }
  if (negative) value = -value;
  return value;
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw invalid_input("cannot convert non-finite double to rational");
  return Rat(x);
}

double rat_to_double(const Rat& q) { return q.convert_to<double>(); }

std::string rat_to_string(const Rat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace mayocut
