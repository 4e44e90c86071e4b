#ifndef TPP_RATIONAL_HPP
#define TPP_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace tpp {

// All plan semantics (durations, times, fluent values, epsilon) are exact
// rationals; doubles never enter the pipeline.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

// Parses "12", "-3.25" or "7/2". Returns nullopt on malformed input.
inline std::optional<Rat> parse_rat(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string body = s;
  bool neg = false;
  if (body[0] == '-' || body[0] == '+') {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  Rat value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits(num) || !digits(den) || BigInt(den) == 0) return std::nullopt;
    value = Rat(BigInt(num), BigInt(den));
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits(ip) || (!fp.empty() && !digits(fp))) return std::nullopt;
    BigInt den = 1;
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    value = Rat(BigInt(ip) * den + (fp.empty() ? BigInt(0) : BigInt(fp)), den);
  } else {
    if (!digits(body)) return std::nullopt;
    value = Rat(BigInt(body));
  }
  return neg ? Rat(-value) : value;
}

inline Rat rat(const std::string& s) {
  auto v = parse_rat(s);
  if (!v) throw std::invalid_argument("malformed rational: " + s);
  return *v;
}

// Exact decimal when the denominator is 2^a*5^b, "p/q" otherwise.
inline std::string rat_to_string(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  BigInt d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return num.str() + "/" + den.str();
  // Scale to a power of ten.
  int digits = std::max(twos, fives);
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * (scale / den);
  bool neg = scaled < 0;
  std::string s = (neg ? -scaled : scaled).str();
  if ((int)s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

}  // namespace tpp

#endif  // TPP_RATIONAL_HPP
