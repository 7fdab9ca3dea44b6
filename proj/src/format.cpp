#include <tmreach/format.hpp>

#include <charconv>
#include <cmath>
#include <system_error>

#include <tmreach/error.hpp>

namespace tmreach
{

std::string format_double(double x)
{
    if (x == 0) {
        // Normalize -0 so that rendered files do not depend on sign-of-zero noise.
        return "0";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0;
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
        throw ParseError("invalid number '" + std::string(text) + "'", 0);
    }
    return value;
}

} // namespace tmreach
