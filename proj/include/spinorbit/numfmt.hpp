#pragma once

#include <string>
#include <string_view>

namespace spinorbit {

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double value);

// Locale-independent full-string parse; throws DataError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "number");

}  // namespace spinorbit
