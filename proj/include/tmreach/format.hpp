#ifndef TMREACH_FORMAT_HPP
#define TMREACH_FORMAT_HPP

#include <string>
#include <string_view>

namespace tmreach
{

// Shortest decimal string that parses back to exactly `x`; locale-independent.
std::string format_double(double x);

// Locale-independent inverse of format_double. Throws ParseError (line 0) on
// trailing garbage or an empty string.
double parse_double(std::string_view text);

} // namespace tmreach

#endif
