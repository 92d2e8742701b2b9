#include "skewlab/format.hpp"

#include <cstdio>
#include <cstring>

namespace skewlab {

std::string fmt_double(double v) {
    char buf[40];
    // Try shorter representations first so 0.5 prints as 0.5, then fall
    // back to the full 17 significant digits.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

std::string fmt_u64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace skewlab
