#pragma once

#include <cstdint>
#include <string>

namespace msmine {

/// Seconds since the Unix epoch, UTC, second precision.
using Instant = std::int64_t;

inline constexpr double kSecondsPerDay = 86400.0;

/// Parses ISO-8601 instants of the form "YYYY-MM-DDThh:mm:ssZ".
/// Accepts a numeric offset ("+hh:mm" / "-hh:mm") and fractional
/// seconds (truncated). Throws ParseError on anything else.
Instant parse_instant(const std::string& text);

/// Formats as "YYYY-MM-DDThh:mm:ssZ".
std::string format_instant(Instant t);

/// Fractional days between two instants (later - earlier).
inline double days_between(Instant earlier, Instant later) {
    return static_cast<double>(later - earlier) / kSecondsPerDay;
}

} // namespace msmine
