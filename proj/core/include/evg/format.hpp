#pragma once

#include <string>
#include <string_view>

namespace evg {

// Shortest decimal text that round-trips to the same double. Infinities are
// written as "inf"/"-inf" and NaN as "nan".
std::string format_number(double value);

// Inverse of format_number; accepts "inf"/"infinity" in any case. Throws
// std::invalid_argument on trailing garbage or empty input.
double parse_number(std::string_view text);

} // namespace evg
