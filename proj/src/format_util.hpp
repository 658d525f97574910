#pragma once

#include <cstdio>
#include <string>

namespace nslab {

// Shortest round-trip representation; stable across runs for byte-identical CSVs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace nslab
