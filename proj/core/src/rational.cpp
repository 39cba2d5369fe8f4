#include "fbcheck/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace fbc {

namespace {

std::string strip(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

long long parse_int(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer in rational");
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bare sign in rational: '" + s + "'");
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("bad integer in rational: '" + s + "'");
  }
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0')
    throw std::invalid_argument("integer out of range in rational: '" + s + "'");
  return v;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string t = strip(text);
  if (t.empty()) throw std::invalid_argument("empty rational");
  size_t slash = t.find('/');
  if (slash == std::string::npos) return Rat(parse_int(t));
  long long num = parse_int(strip(t.substr(0, slash)));
  long long den = parse_int(strip(t.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in rational: '" + text + "'");
  return Rat(num, den);
}

std::string format_rational(const Rat& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

}  // namespace fbc
