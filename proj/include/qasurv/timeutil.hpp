#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qasurv {

// Parses "YYYY-MM-DDThh:mm:ss[.fff][Z]" (the data-dump timestamp shape,
// implicitly UTC) to epoch milliseconds. Throws InvalidInputError on any
// malformed or out-of-range field.
std::int64_t parse_timestamp_ms(std::string_view text);

// Inverse of parse_timestamp_ms, always with milliseconds:
// "YYYY-MM-DDThh:mm:ss.fff".
std::string format_timestamp_ms(std::int64_t epoch_ms);

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

}  // namespace qasurv
