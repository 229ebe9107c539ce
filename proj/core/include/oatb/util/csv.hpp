#pragma once

#include <cstdint>
#include <string>

namespace oatb::util {

// Shortest round-trip decimal representation, locale independent.
// Used everywhere a double goes into a result file so that repeated runs
// are byte identical.
std::string format_double(double v);

std::string format_int(std::int64_t v);
std::string format_uint(std::uint64_t v);

}  // namespace oatb::util
