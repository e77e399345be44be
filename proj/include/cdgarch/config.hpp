#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cdgarch/kernels.hpp"

namespace cdgarch {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key-value configuration with sections [noise], [model], [kernel.mu],
// [kernel.nu], [run]; unknown sections or keys are errors.
struct RunConfig {
    DelayModel model; // noise.seed mirrors run.seed

    std::uint64_t seed = 1;
    double delta = 0.01;        // euler grid step
    double horizon = 20.0;      // T
    double h = 1e-3;            // event-sim max ODE step
    double step = 1e-3;         // mean-solver step
    double y0 = 0.0;
    double report_delta = 0.1;  // event-sim output grid
    std::size_t paths = 1;
    std::string scheme = "events";   // euler | events
    std::string solver = "dde";      // dde | renewal
    std::string phi = "stationary";  // "stationary" or a number
    std::string suite = "full";      // validation battery

    // Initial segment resolved from phi (constant M needs the stationarity
    // condition and may throw ConditionError).
    HistorySegment resolve_phi() const;

    // Canonical text with every key present (defaults echoed); reparsing it
    // reproduces this config exactly.
    std::string resolved_text() const;
    std::string digest() const; // FNV-1a 64 of the resolved text, hex
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::string model_digest(const DelayModel& model);

} // namespace cdgarch
