#pragma once

// Text encodings shared by the config reader and parameter validation.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radcav/angular.hpp"

namespace radcav::text {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

std::optional<double> parse_real(std::string_view s);
std::optional<long> parse_int(std::string_view s);
std::optional<bool> parse_bool(std::string_view s);
/// `re,im` or a bare real.
std::optional<std::complex<double>> parse_complex(std::string_view s);
/// `x,y,z`.
std::optional<Vec3> parse_vec3(std::string_view s);
/// Comma-separated reals, at least one.
std::optional<std::vector<double>> parse_real_list(std::string_view s);

/// 17 significant digits, `%.17g`.
std::string format_real(double v);
std::string format_complex(std::complex<double> v);

}  // namespace radcav::text
