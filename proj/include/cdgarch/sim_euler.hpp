#pragma once

#include <vector>

#include "cdgarch/kernels.hpp"
#include "cdgarch/path.hpp"

namespace cdgarch {

// Grid recursion coefficients. With q = 0 these are exactly the parameters
// of a discrete GARCH(ceil(p/delta), 1): beta_k on lagged levels, alpha_1 on
// the lag-1 squared-noise product.
struct EulerCoefficients {
    double delta = 0.0;
    double base = 0.0;                 // delta * eta
    std::vector<double> beta;          // beta_k = delta^2 f_mu(-k delta) + (1 - c_mu delta) 1{k=1}
    std::vector<double> alpha;         // alpha_k = delta f_nu(-k delta) + c_nu 1{k=1}
};

EulerCoefficients euler_coefficients(const DelayModel& model, double delta);

// The grid scheme:
//   X_n = delta eta + sum_k beta_k X_{n-k} + sum_k alpha_k X_{n-k} dS_{n-k+1}
//   Y_n = Y_{n-1} + sqrt(max(X_{n-1}, 0)) dL_n
// Lag counts p/delta and q/delta must be integers up to 1e-9 relative.
// Negative X excursions are flagged in the metadata, never clamped; only the
// square root argument is floored at zero.
SamplePath euler_simulate(const DelayModel& model, const IncrementSeries& inc,
                          const HistorySegment& phi, double y0);

// Lag-tau returns Y_t - Y_{t-tau} on the grid, first entry at t = tau.
// tau must be a grid multiple.
std::vector<double> euler_returns(const SamplePath& path, double tau);

// Stationary-mean initial segment, the pseudo-code's convenience choice.
HistorySegment stationary_history(const DelayModel& model);

} // namespace cdgarch
