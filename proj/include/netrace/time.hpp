#pragma once

// Exact time arithmetic. Every delay in the simulator is a rational number of
// seconds so that closed forms and event traces compare with operator==.

#include <boost/rational.hpp>

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netrace {

using Rational = boost::rational<std::int64_t>;

/// Seconds, meters, bits per second... all quantities share one exact type.
using Seconds = Rational;

inline std::int64_t ceil_int(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

inline std::int64_t floor_int(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

/// "61", "61/2": lossless text form used in scenario files and JSON logs.
inline std::string to_exact_string(const Rational& r) {
  std::string out = std::to_string(r.numerator());
  if (r.denominator() != 1) out += "/" + std::to_string(r.denominator());
  return out;
}

/// Decimal with at most `places` fractional digits, rounded half away from
/// zero, trailing zeros stripped: 88 -> "88", 61/2 -> "30.5", 1/3 -> "0.333333".
inline std::string format_seconds(const Rational& r, int places = 6) {
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational mag = negative ? -r : r;
  // round(mag * scale) using integer math on numerator/denominator
  const __int128 num = static_cast<__int128>(mag.numerator()) * scale;
  const __int128 den = mag.denominator();
  __int128 scaled = num / den;
  if ((num % den) * 2 >= den) ++scaled;
  const auto whole = static_cast<std::int64_t>(scaled / scale);
  auto frac = static_cast<std::int64_t>(scaled % scale);
  std::string out = (negative && scaled != 0 ? "-" : "") + std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(places) - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

/// Parses "12", "-3", "61/2", "1.25", "2e1" exactly. Returns nullopt on
/// anything else (including zero denominators and overflow).
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return std::nullopt;

  auto parse_int = [](std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return false;
    std::int64_t v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      if (v > (std::numeric_limits<std::int64_t>::max() - (c - '0')) / 10) return false;
      v = v * 10 + (c - '0');
    }
    out = neg ? -v : v;
    return true;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0;
    std::int64_t d = 0;
    if (!parse_int(trim(text.substr(0, slash)), n) || !parse_int(trim(text.substr(slash + 1)), d) || d == 0)
      return std::nullopt;
    return Rational(n, d);
  }

  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    if (!parse_int(text.substr(e + 1), exponent) || exponent > 18 || exponent < -18) return std::nullopt;
    text = text.substr(0, e);
  }
  std::string digits;
  std::int64_t frac_digits = 0;
  bool seen_point = false;
  bool neg = false;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point) ++frac_digits;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  while (digits.size() > 1 && digits.front() == '0') digits.erase(digits.begin());
  std::int64_t mantissa = 0;
  if (!parse_int(digits, mantissa)) return std::nullopt;
  std::int64_t shift = exponent - frac_digits;
  try {
    Rational value(neg ? -mantissa : mantissa);
    std::int64_t p = 1;
    for (std::int64_t k = 0; k < (shift < 0 ? -shift : shift); ++k) {
      if (p > std::numeric_limits<std::int64_t>::max() / 10) return std::nullopt;
      p *= 10;
    }
    return shift < 0 ? value / Rational(p) : value * Rational(p);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace netrace
