#pragma once

#include <charconv>
#include <string>

namespace cdgarch {

// Shortest decimal that round-trips the exact IEEE-754 value.
inline std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

} // namespace cdgarch
