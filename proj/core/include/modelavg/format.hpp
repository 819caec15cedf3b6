#pragma once

#include <string>
#include <string_view>

namespace modelavg {

/// Shortest decimal string that parses back to exactly `x` ("nan"/"inf" for
/// non-finite values). Locale-independent.
std::string format_double(double x);

/// Strict, locale-independent parse of the whole of `text`.
bool parse_double(std::string_view text, double& out);

} // namespace modelavg
