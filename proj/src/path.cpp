#include "cdgarch/path.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cdgarch/csv.hpp"

namespace cdgarch {

double SamplePath::x_at_time(double t) const {
    if (x.empty()) throw std::invalid_argument("path: empty");
    const double pos = (t - t0) / delta;
    if (pos <= 0.0) return x.front();
    if (pos >= static_cast<double>(x.size() - 1)) return x.back();
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return x[i] + (x[i + 1] - x[i]) * frac;
}

PathDistance compare_paths(const SamplePath& a, const SamplePath& b) {
    if (a.x.empty() || b.x.empty())
        throw std::invalid_argument("compare_paths: empty path");
    const double lo = std::max(a.t_begin(), b.t_begin());
    const double hi = std::min(a.t_end(), b.t_end());
    if (!(hi >= lo - 1e-12))
        throw std::invalid_argument("compare_paths: disjoint horizons");

    const SamplePath& coarse = a.delta >= b.delta ? a : b;
    const SamplePath& fine = a.delta >= b.delta ? b : a;

    PathDistance d;
    d.at_t = lo;
    for (std::size_t i = 0; i < coarse.x.size(); ++i) {
        const double t = coarse.time_at(i);
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        const double diff = std::abs(coarse.x[i] - fine.x_at_time(t));
        if (diff > d.sup_dist) {
            d.sup_dist = diff;
            d.at_t = t;
        }
    }
    return d;
}

HistorySegment HistorySegment::constant(double r, double value) {
    if (!(r >= 0.0)) throw std::invalid_argument("history: r must be >= 0");
    if (!(value >= 0.0)) throw std::invalid_argument("history: values must be >= 0");
    HistorySegment h;
    h.r_ = r;
    h.values_ = {value, value};
    h.du_ = r > 0.0 ? r : 1.0;
    return h;
}

HistorySegment HistorySegment::tabulated(double r, std::vector<double> values) {
    if (!(r > 0.0)) throw std::invalid_argument("history: r must be > 0");
    if (values.size() < 2) throw std::invalid_argument("history: need at least 2 values");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("history: values must be >= 0");
    HistorySegment h;
    h.r_ = r;
    h.values_ = std::move(values);
    h.du_ = r / static_cast<double>(h.values_.size() - 1);
    return h;
}

double HistorySegment::operator()(double u) const {
    const double x = (std::clamp(u, -r_, 0.0) + r_) / du_;
    const auto i = std::min(values_.size() - 2, static_cast<std::size_t>(std::max(0.0, x)));
    const double frac = std::clamp(x - static_cast<double>(i), 0.0, 1.0);
    return values_[i] + (values_[i + 1] - values_[i]) * frac;
}

double MeanPath::at(double t) const {
    if (m.empty()) throw std::invalid_argument("mean path: empty");
    const double pos = (t - t0) / step;
    if (pos <= 0.0) return m.front();
    if (pos >= static_cast<double>(m.size() - 1)) return m.back();
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return m[i] + (m[i + 1] - m[i]) * frac;
}

void write_csv(const SamplePath& path, std::ostream& out, bool with_events) {
    out << (with_events ? "t,x,y,event\n" : "t,x,y\n");
    std::size_t ev = 0;
    for (std::size_t i = 0; i < path.x.size(); ++i) {
        const double t = path.time_at(i);
        if (with_events) {
            while (ev < path.events.size() && path.events[ev].t < t) {
                const PathEvent& e = path.events[ev++];
                out << format_double(e.t) << ',' << format_double(e.x_post) << ','
                    << format_double(e.y_post) << ",1\n";
            }
        }
        out << format_double(t) << ',' << format_double(path.x[i]) << ',';
        if (i >= path.n_history)
            out << format_double(path.y[i - path.n_history]);
        if (with_events) out << ",0";
        out << '\n';
    }
    if (with_events) {
        for (; ev < path.events.size(); ++ev) {
            const PathEvent& e = path.events[ev];
            out << format_double(e.t) << ',' << format_double(e.x_post) << ','
                << format_double(e.y_post) << ",1\n";
        }
    }
}

void write_csv(const MeanPath& path, std::ostream& out) {
    out << "t,m,solver\n";
    for (std::size_t i = 0; i < path.m.size(); ++i) {
        out << format_double(path.t0 + path.step * static_cast<double>(i)) << ','
            << format_double(path.m[i]) << ',' << path.solver << '\n';
    }
}

} // namespace cdgarch
