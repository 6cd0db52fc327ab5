#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace riskvec::timeutil {

// Parses an RFC3339 timestamp ("2012-10-28T14:30:00Z", optional fractional
// seconds, optional numeric offset) to Unix seconds. Fractional seconds are
// truncated. Throws a validation Error on anything unparseable.
std::int64_t parse_rfc3339(std::string_view s);

// Formats Unix seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t unix_seconds);

}  // namespace riskvec::timeutil
