// Internal helpers for the line-oriented text formats. Not installed.
#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace fbc::detail {

inline std::string strip_ws(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// Strips a '#' comment and surrounding whitespace; empty result means the
// line carries no data.
inline std::string data_portion(const std::string& raw) {
  std::string s = raw;
  size_t hash = s.find('#');
  if (hash != std::string::npos) s = s.substr(0, hash);
  return strip_ws(s);
}

}  // namespace fbc::detail
