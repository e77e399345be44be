#pragma once

#include <stdexcept>
#include <string>

namespace cdgarch {

// Raised when a theorem-level condition fails (e.g. the stationarity
// inequality c0 > ||f||_1). The message carries the violated inequality
// with the actual numbers so the CLI can surface it directly.
class ConditionError : public std::runtime_error {
public:
    explicit ConditionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cdgarch
