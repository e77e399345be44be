#pragma once

#include "cdgarch/kernels.hpp"
#include "cdgarch/path.hpp"

namespace cdgarch {

// Method-of-steps integration of the mean equation
//   m'(t) = eta - c0 m(t) + integral_{-r}^0 f(u) m(t+u) du,  m = phi on [-r, 0],
// classical RK4 with Hermite dense output for the delayed lookups and a
// composite Simpson rule over the delay window; the grid step must divide r
// so the derivative kink propagating from t = 0 stays on quadrature nodes.
// Output grid covers [-r, T].
MeanPath solve_mean_fde(const DelayModel& model, const HistorySegment& phi,
                        double T, double step);

// zeta(t) = -c0 1_{(0,inf)}(t) + integral_0^{min(t,r)} f(-u) du; constant
// -c0 + ||f||_1 from t = r on.
double renewal_kernel_zeta(const DelayModel& model, double t);

// Trapezoid product integration of the renewal form
//   m(t) = integral_0^t zeta(t-u) m(u) du + h(t),
// with the forcing built from phi and eta/zeta(r) = -M. Requires
// zeta(r) != 0. Output grid covers [-r, T].
MeanPath solve_mean_renewal(const DelayModel& model, const HistorySegment& phi,
                            double T, double step);

} // namespace cdgarch
