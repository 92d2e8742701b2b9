#pragma once

#include <cstdint>
#include <string>

namespace skewlab {

// Shortest decimal that parses back to the same double (%.17g trimmed).
std::string fmt_double(double v);

std::string fmt_u64(std::uint64_t v);

}  // namespace skewlab
