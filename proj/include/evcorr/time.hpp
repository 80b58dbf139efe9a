#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace evcorr {

/// Wall-clock instant at whole-second resolution. Timestamps in logs are local
/// datetimes without a zone; they are carried as if they were UTC.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Accepts `YYYY-M-D H:M:S` with optional zero padding, a `T` separator,
/// fractional seconds (floor-truncated) and a trailing `Z` or `+hh:mm` offset.
/// Throws std::invalid_argument on anything else.
Timestamp parse_timestamp(std::string_view text);

/// `YYYY-MM-DD HH:MM:SS`
std::string format_timestamp(Timestamp ts);

}  // namespace evcorr
