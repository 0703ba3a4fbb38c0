#include "radcav/values.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace radcav::text {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_real(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  // strtod accepts the same forms as the C locale, which is what the CSV
  // side writes back.
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_int(std::string_view s) {
  const std::string t = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  return std::nullopt;
}

std::optional<std::complex<double>> parse_complex(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) {
    if (auto r = parse_real(parts[0])) return std::complex<double>(*r, 0.0);
    return std::nullopt;
  }
  if (parts.size() != 2) return std::nullopt;
  auto re = parse_real(parts[0]);
  auto im = parse_real(parts[1]);
  if (!re || !im) return std::nullopt;
  return std::complex<double>(*re, *im);
}

std::optional<Vec3> parse_vec3(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) return std::nullopt;
  Vec3 v{};
  for (std::size_t i = 0; i < 3; ++i) {
    auto r = parse_real(parts[i]);
    if (!r) return std::nullopt;
    v[i] = *r;
  }
  return v;
}

std::optional<std::vector<double>> parse_real_list(std::string_view s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) {
    auto r = parse_real(p);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(std::complex<double> v) {
  return format_real(v.real()) + "," + format_real(v.imag());
}

}  // namespace radcav::text
