#include "cdgarch/noise.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cdgarch/csv.hpp"
#include "cdgarch/rng.hpp"

namespace cdgarch {

void validate(const NoiseSpec& spec) {
    if (!(spec.sigma_l >= 0.0)) throw std::invalid_argument("noise: sigma_l must be >= 0");
    if (!(spec.lambda_l >= 0.0)) throw std::invalid_argument("noise: lambda_l must be >= 0");
    if (!(spec.sigma_j >= 0.0)) throw std::invalid_argument("noise: sigma_j must be >= 0");
    if (!std::isfinite(spec.mu_j)) throw std::invalid_argument("noise: mu_j must be finite");
}

NoiseMoments derive_moments(const NoiseSpec& spec) {
    validate(spec);
    const double mu2 = spec.mu_j * spec.mu_j;
    const double s2 = spec.sigma_j * spec.sigma_j;
    NoiseMoments m;
    m.kappa2 = spec.sigma_l * spec.sigma_l + spec.lambda_l * (mu2 + s2);
    m.kappa4 = spec.lambda_l * (mu2 * mu2 + 6.0 * mu2 * s2 + 3.0 * s2 * s2);
    return m;
}

IncrementSeries sample_increments(const NoiseSpec& spec, double delta,
                                  std::size_t n_history, std::size_t n_future,
                                  std::uint64_t stream) {
    validate(spec);
    if (!(delta > 0.0)) throw std::invalid_argument("sample_increments: delta must be > 0");

    Rng rng(spec.seed, stream);
    const std::size_t n = n_history + n_future;
    IncrementSeries inc;
    inc.delta = delta;
    inc.n_history = n_history;
    inc.dl.resize(n);
    inc.ds.resize(n);

    const double brownian_sd = spec.sigma_l * std::sqrt(delta);
    const double ds_base = spec.sigma_l * spec.sigma_l * delta;
    const double jump_mean = delta * spec.lambda_l;

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t count = jump_mean > 0.0 ? rng.poisson(jump_mean) : 0;
        double dl = spec.sigma_l > 0.0 ? rng.normal(0.0, brownian_sd) : 0.0;
        double ds = ds_base;
        for (std::uint64_t k = 0; k < count; ++k) {
            const double z = rng.normal(spec.mu_j, spec.sigma_j);
            dl += z;
            ds += z * z;
        }
        inc.dl[i] = dl;
        inc.ds[i] = ds;
    }
    return inc;
}

JumpLog sample_jump_events(const NoiseSpec& spec, double t_start, double t_end,
                           std::uint64_t seed, std::uint64_t stream) {
    validate(spec);
    if (spec.sigma_l != 0.0)
        throw std::invalid_argument(
            "sample_jump_events: requires sigma_l = 0 (fold the Brownian part "
            "into the drift first)");
    if (!(spec.lambda_l > 0.0))
        throw std::invalid_argument("sample_jump_events: requires lambda_l > 0");
    if (!(t_end >= t_start))
        throw std::invalid_argument("sample_jump_events: empty or inverted horizon");

    Rng rng(seed, stream);
    JumpLog log;
    log.t_start = t_start;
    log.t_end = t_end;
    double t = t_start;
    for (;;) {
        t += rng.exponential(spec.lambda_l);
        if (!(t <= t_end)) break;
        if (!log.times.empty() && !(t > log.times.back()))
            t = std::nextafter(log.times.back(), std::numeric_limits<double>::infinity());
        if (!(t <= t_end)) break;
        const double z = rng.normal(spec.mu_j, spec.sigma_j);
        if (z == 0.0) continue; // underflow-level jump, drop
        log.times.push_back(t);
        log.sizes.push_back(z);
    }
    return log;
}

JumpLog truncate_jumps(const JumpLog& log, int n) {
    if (n < 1) throw std::invalid_argument("truncate_jumps: n must be >= 1");
    const double threshold = 1.0 / static_cast<double>(n);
    JumpLog out;
    out.t_start = log.t_start;
    out.t_end = log.t_end;
    for (std::size_t i = 0; i < log.times.size(); ++i) {
        if (std::abs(log.sizes[i]) >= threshold) {
            out.times.push_back(log.times[i]);
            out.sizes.push_back(log.sizes[i]);
        }
    }
    return out;
}

double min_inter_event_gap(const JumpLog& log) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < log.times.size(); ++i)
        gap = std::min(gap, log.times[i] - log.times[i - 1]);
    return gap;
}

IncrementSeries bin_jump_log(const JumpLog& log, double delta,
                             std::size_t n_history, std::size_t n_future) {
    if (!(delta > 0.0)) throw std::invalid_argument("bin_jump_log: delta must be > 0");
    IncrementSeries inc;
    inc.delta = delta;
    inc.n_history = n_history;
    const std::size_t n = n_history + n_future;
    inc.dl.assign(n, 0.0);
    inc.ds.assign(n, 0.0);

    const auto lo = -static_cast<long long>(n_history);
    for (std::size_t i = 0; i < log.times.size(); ++i) {
        const double t = log.times[i];
        // bucket m covers ((m-1) delta, m delta]
        long long m = static_cast<long long>(std::ceil(t / delta - 1e-12));
        if (t > static_cast<double>(m) * delta) ++m;
        while (m > lo + 1 && t <= static_cast<double>(m - 1) * delta) --m;
        const long long idx = m + static_cast<long long>(n_history) - 1;
        if (idx < 0 || idx >= static_cast<long long>(n)) continue;
        inc.dl[static_cast<std::size_t>(idx)] += log.sizes[i];
        inc.ds[static_cast<std::size_t>(idx)] += log.sizes[i] * log.sizes[i];
    }
    return inc;
}

void write_csv(const IncrementSeries& inc, std::ostream& out) {
    out << "t,dl,ds\n";
    const auto n_hist = static_cast<long long>(inc.n_history);
    for (std::size_t i = 0; i < inc.dl.size(); ++i) {
        const double t = (static_cast<long long>(i) - n_hist + 1) * inc.delta;
        out << format_double(t) << ',' << format_double(inc.dl[i]) << ','
            << format_double(inc.ds[i]) << '\n';
    }
}

void write_csv(const JumpLog& log, std::ostream& out) {
    out << "T_j,dL\n";
    for (std::size_t i = 0; i < log.times.size(); ++i)
        out << format_double(log.times[i]) << ',' << format_double(log.sizes[i]) << '\n';
}

} // namespace cdgarch
