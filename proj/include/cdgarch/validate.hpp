#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdgarch/kernels.hpp"
#include "cdgarch/path.hpp"

namespace cdgarch {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationRow {
    std::string quantity;
    double lag = 0.0;
    double theory = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;
    std::vector<ValidationRow> table;
    bool all_pass() const {
        for (const CriterionResult& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

// The full acceptance battery. suite = "full" runs the spec-scale Monte
// Carlo sizes; "smoke" shrinks ensembles for quick regression runs.
ValidationReport run_validation(std::uint64_t seed, const std::string& suite);

// Shipped reference model (exponential nu-kernel, mean stationary); the
// battery's deterministic criteria run against it.
DelayModel reference_model(std::uint64_t seed);

// One event-driven path per substream; h is capped per path at a quarter of
// the log's smallest inter-event gap.
std::vector<SamplePath> simulate_event_ensemble(const DelayModel& model,
                                                const HistorySegment& phi, double y0,
                                                std::size_t n_paths, double horizon,
                                                double h_base, double report_delta,
                                                std::uint64_t stream_base);

} // namespace cdgarch
