#include "cdgarch/sim_euler.hpp"

#include <cmath>
#include <stdexcept>

#include "cdgarch/stability.hpp"

namespace cdgarch {

namespace {

// Lag count for a delay length; rejects grids that do not divide it.
std::size_t lag_count(double length, double delta, const char* name) {
    if (length <= 0.0) return 0;
    const double ratio = length / delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument(std::string("euler: delta does not divide ") + name);
    return static_cast<std::size_t>(rounded);
}

} // namespace

EulerCoefficients euler_coefficients(const DelayModel& model, double delta) {
    validate(model);
    if (!(delta > 0.0)) throw std::invalid_argument("euler: delta must be > 0");
    const std::size_t kp = lag_count(model.p(), delta, "p");
    const std::size_t kq = lag_count(model.q(), delta, "q");

    EulerCoefficients c;
    c.delta = delta;
    c.base = delta * model.eta;
    c.beta.resize(std::max<std::size_t>(kp, 1), 0.0);
    c.alpha.resize(std::max<std::size_t>(kq, 1), 0.0);
    for (std::size_t k = 1; k <= kp; ++k)
        c.beta[k - 1] = delta * delta * (*model.f_mu)(-static_cast<double>(k) * delta);
    for (std::size_t k = 1; k <= kq; ++k)
        c.alpha[k - 1] = delta * (*model.f_nu)(-static_cast<double>(k) * delta);
    c.beta[0] += 1.0 - model.c_mu * delta;
    c.alpha[0] += model.c_nu;
    return c;
}

SamplePath euler_simulate(const DelayModel& model, const IncrementSeries& inc,
                          const HistorySegment& phi, double y0) {
    const EulerCoefficients coef = euler_coefficients(model, inc.delta);
    const double delta = inc.delta;
    if (!phi.covers(model.r()))
        throw std::invalid_argument("euler: history segment does not cover [-r, 0]");

    const std::size_t n_hist = lag_count(model.r(), delta, "r");
    const std::size_t n_fut = inc.n_future();

    SamplePath path;
    path.delta = delta;
    path.n_history = n_hist;
    path.t0 = -static_cast<double>(n_hist) * delta;
    path.x.resize(n_hist + n_fut + 1);
    path.y.resize(n_fut + 1);
    path.meta.scheme = "euler";
    path.meta.seed = model.noise.seed;
    path.meta.delta = delta;

    for (std::size_t i = 0; i <= n_hist; ++i)
        path.x[i] = phi(path.t0 + delta * static_cast<double>(i));
    path.y[0] = y0;

    // increment for step m, i.e. over ((m-1) delta, m delta]
    const auto ds_at = [&](long long m) -> double {
        const long long idx = m + static_cast<long long>(inc.n_history) - 1;
        if (idx < 0) {
            path.meta.history_zero_filled = true;
            return 0.0;
        }
        return inc.ds[static_cast<std::size_t>(idx)];
    };
    const auto dl_at = [&](long long m) -> double {
        return inc.dl[static_cast<std::size_t>(m + static_cast<long long>(inc.n_history) - 1)];
    };

    for (std::size_t n = 1; n <= n_fut; ++n) {
        const std::size_t cur = n_hist + n;
        double xn = coef.base;
        for (std::size_t k = 1; k <= coef.beta.size(); ++k)
            xn += coef.beta[k - 1] * path.x[cur - k];
        for (std::size_t k = 1; k <= coef.alpha.size(); ++k)
            xn += coef.alpha[k - 1] * path.x[cur - k] *
                  ds_at(static_cast<long long>(n) - static_cast<long long>(k) + 1);
        path.x[cur] = xn;
        path.y[n] = path.y[n - 1] +
                    std::sqrt(std::max(path.x[cur - 1], 0.0)) * dl_at(static_cast<long long>(n));
        if (xn < 0.0) {
            if (path.meta.negative_count == 0)
                path.meta.first_negative_t = delta * static_cast<double>(n);
            ++path.meta.negative_count;
        }
    }
    return path;
}

std::vector<double> euler_returns(const SamplePath& path, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("returns: tau must be > 0");
    const double ratio = tau / path.delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("returns: tau is not a grid multiple");
    const auto lag = static_cast<std::size_t>(rounded);
    if (lag == 0 || lag >= path.y.size())
        throw std::invalid_argument("returns: path does not cover one tau window");
    std::vector<double> out(path.y.size() - lag);
    for (std::size_t i = lag; i < path.y.size(); ++i)
        out[i - lag] = path.y[i] - path.y[i - lag];
    return out;
}

HistorySegment stationary_history(const DelayModel& model) {
    return HistorySegment::constant(model.r(), stationary_mean(model));
}

} // namespace cdgarch
