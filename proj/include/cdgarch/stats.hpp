#pragma once

#include <vector>

#include "cdgarch/path.hpp"

namespace cdgarch {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Cross-path sample mean of X at the grid point nearest t; SE = s / sqrt(n).
// All paths must share the grid; needs at least two paths.
Estimate ensemble_mean(const std::vector<SamplePath>& paths, double t);

// Mean-removed sample autocovariance at the given lag, divisor n; standard
// error by batch means with ~sqrt(n) batches (falls back to the term-wise
// spread when the series is too short to batch at this lag).
Estimate empirical_autocov(const std::vector<double>& series, std::size_t lag);

// Cross-path Cov(X_t, X_{t+u}) for each requested u.
struct CovarianceRow {
    double u = 0.0;
    double cov = 0.0;
    double std_error = 0.0;
};
std::vector<CovarianceRow> weak_dependence_check(const std::vector<SamplePath>& paths,
                                                 double t,
                                                 const std::vector<double>& u_list);

// Least-squares slope of log|value - level| against time over [t_lo, t_hi];
// points within atol of the level are skipped. Used to read off exponential
// decay rates.
double fit_log_decay_slope(const MeanPath& path, double level, double t_lo,
                           double t_hi, double atol = 1e-13);

} // namespace cdgarch
