#pragma once

#include <deque>

#include "cdgarch/kernels.hpp"
#include "cdgarch/path.hpp"

namespace cdgarch {

// Dense X-history: (t, x) knots at integrator steps plus event times (jumps
// stored as a pre/post pair at the same t), linear interpolation between.
// aux is caller-maintained scratch (the simulator caches e^{lambda_mu t}
// there so exponential-kernel weights need no exp per lookup).
struct Knot {
    double t = 0.0;
    double x = 0.0;
    double aux = 0.0;
};

class XHistory {
public:
    void add(double t, double x, double aux = 0.0);
    bool empty() const { return knots_.empty(); }
    std::size_t size() const { return knots_.size(); }
    const Knot& operator[](std::size_t i) const { return knots_[i]; }
    double front_time() const { return knots_.front().t; }
    double back_time() const { return knots_.back().t; }
    double back_x() const { return knots_.back().x; }

    std::size_t first_at_or_after(double t) const;
    double eval(double t) const;      // right-continuous at double knots
    double eval_left(double t) const; // left limit at double knots
    void prune_before(double t);      // keeps one bracketing knot

private:
    std::deque<Knot> knots_;
};

// The delay drift xi(X)_t: f_mu-weighted history integral (trapezoid over
// the knot set clipped to [t-p, t]) plus the f_nu-weighted sum over jump
// atoms in (t-q, t], each contributing f_nu(T_j - t) X(T_j-) (dL)^2.
// Requires history covering [t-r, t].
double xi_evaluate(const DelayModel& model, const XHistory& history,
                   const JumpLog& log, double t);

// Exact event-driven simulation of (X, Y) for compound-Poisson noise:
// classical RK4 on dX/dt = eta - c_mu X + xi(X) between events (method of
// steps, steps land exactly on jump, window-exit and reporting times), the
// exact jump map X -> X (1 + c_nu (dL)^2) at each T_j > 0. Atoms in the log
// with T_j <= 0 feed the xi window only; X on [-r, 0] is pinned to phi.
// h is the maximum ODE step and must not exceed a quarter of the smallest
// inter-event gap. The output carries X, Y on a uniform reporting grid plus
// exact pre/post values at every jump.
SamplePath event_simulate(const DelayModel& model, const JumpLog& log,
                          const HistorySegment& phi, double y0, double h,
                          double report_delta);

} // namespace cdgarch
