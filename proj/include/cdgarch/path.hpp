#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cdgarch {

// Jump record: pre/post values around an event, with the applied increment
// dx stored explicitly so the c_nu X_- (dL)^2 identity can be checked
// without a cancelling subtraction.
struct PathEvent {
    double t = 0.0;
    double x_pre = 0.0;
    double x_post = 0.0;
    double dx = 0.0;
    double y_post = 0.0;
    double dl = 0.0;
};

struct PathMeta {
    std::string scheme;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double delta = 0.0; // grid step (euler) / reporting step (events)
    double ode_step = 0.0;
    std::string model_digest;
    int negative_count = 0;          // euler: X excursions below zero, flagged not clamped
    double first_negative_t = 0.0;
    bool history_zero_filled = false;
};

// Uniform-grid path. x spans the history segment and the simulated horizon
// (n_history + n_future + 1 points starting at t0); y spans [0, T].
struct SamplePath {
    double t0 = 0.0;
    double delta = 0.0;
    std::size_t n_history = 0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<PathEvent> events;
    PathMeta meta;

    std::size_t n_future() const { return x.size() - n_history - 1; }
    double t_begin() const { return t0; }
    double t_end() const { return t0 + delta * static_cast<double>(x.size() - 1); }
    double time_at(std::size_t i) const { return t0 + delta * static_cast<double>(i); }
    // Linear interpolation of x on the grid; t clamped to the grid range.
    double x_at_time(double t) const;
};

// sup |x_a - x_b| over the coarser common grid, the finer path linearly
// interpolated. Returns the sup and the time where it occurs.
struct PathDistance {
    double sup_dist = 0.0;
    double at_t = 0.0;
};
PathDistance compare_paths(const SamplePath& a, const SamplePath& b);

// Initial function Phi on [-r, 0]; constant or tabulated on a uniform grid,
// nonnegative.
class HistorySegment {
public:
    static HistorySegment constant(double r, double value);
    static HistorySegment tabulated(double r, std::vector<double> values);

    double r() const { return r_; }
    bool covers(double r_needed) const { return r_ >= r_needed - 1e-12; }
    double operator()(double u) const; // u clamped to [-r, 0]

private:
    double r_ = 0.0;
    std::vector<double> values_;
    double du_ = 0.0;
};

struct MeanPath {
    double t0 = 0.0;
    double step = 0.0;
    std::vector<double> m;
    std::string solver;

    double t_end() const { return t0 + step * static_cast<double>(m.size() - 1); }
    double at(double t) const; // linear interpolation
};

// CSV: columns t,x,y (y blank on the history segment). When with_events is
// set an extra 0/1 event column is appended and one marked row is emitted
// per jump, carrying the post-jump values.
void write_csv(const SamplePath& path, std::ostream& out, bool with_events);
void write_csv(const MeanPath& path, std::ostream& out);

} // namespace cdgarch
