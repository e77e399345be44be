#include "cdgarch/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace cdgarch {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

std::size_t grid_index_near(const SamplePath& path, double t) {
    const double pos = (t - path.t0) / path.delta;
    const auto i = static_cast<long long>(std::llround(pos));
    if (i < 0 || i >= static_cast<long long>(path.x.size()))
        throw std::invalid_argument("ensemble: t outside the common grid");
    return static_cast<std::size_t>(i);
}

} // namespace

Estimate ensemble_mean(const std::vector<SamplePath>& paths, double t) {
    if (paths.size() < 2) throw std::invalid_argument("ensemble_mean: need at least 2 paths");
    const std::size_t idx = grid_index_near(paths.front(), t);
    for (const SamplePath& p : paths) {
        if (p.x.size() != paths.front().x.size() || p.delta != paths.front().delta ||
            p.t0 != paths.front().t0)
            throw std::invalid_argument("ensemble_mean: paths do not share a grid");
    }
    const auto n = static_cast<double>(paths.size());
    double acc = 0.0;
    for (const SamplePath& p : paths) {
        require_finite(p.x[idx], "ensemble_mean");
        acc += p.x[idx];
    }
    const double mean = acc / n;
    double ss = 0.0;
    for (const SamplePath& p : paths) ss += (p.x[idx] - mean) * (p.x[idx] - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd / std::sqrt(n)};
}

Estimate empirical_autocov(const std::vector<double>& series, std::size_t lag) {
    const std::size_t n = series.size();
    if (lag >= n) throw std::invalid_argument("autocov: lag must be < length");
    for (double v : series) require_finite(v, "autocov");

    const double mean = mean_of(series);
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
        acc += (series[i] - mean) * (series[i + lag] - mean);
    const double estimate = acc / static_cast<double>(n);

    // batch-means SE
    auto n_batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    double se = 0.0;
    if (n_batches >= 2 && n / n_batches > lag + 1) {
        const std::size_t b = n / n_batches;
        std::vector<double> batch(n_batches);
        for (std::size_t k = 0; k < n_batches; ++k) {
            double s = 0.0;
            const std::size_t off = k * b;
            for (std::size_t i = 0; i + lag < b; ++i)
                s += (series[off + i] - mean) * (series[off + i + lag] - mean);
            batch[k] = s / static_cast<double>(b);
        }
        const double bm = mean_of(batch);
        double ss = 0.0;
        for (double v : batch) ss += (v - bm) * (v - bm);
        se = std::sqrt(ss / static_cast<double>(n_batches - 1)) /
             std::sqrt(static_cast<double>(n_batches));
    } else {
        // too short to batch: spread of the individual products
        double ss = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i + lag < n; ++i, ++cnt) {
            const double d = (series[i] - mean) * (series[i + lag] - mean) - estimate;
            ss += d * d;
        }
        se = cnt > 1 ? std::sqrt(ss / static_cast<double>(cnt - 1)) /
                           std::sqrt(static_cast<double>(cnt))
                     : 0.0;
    }
    require_finite(estimate, "autocov");
    require_finite(se, "autocov");
    return {estimate, se};
}

std::vector<CovarianceRow> weak_dependence_check(const std::vector<SamplePath>& paths,
                                                 double t,
                                                 const std::vector<double>& u_list) {
    if (paths.size() < 2)
        throw std::invalid_argument("weak_dependence_check: need at least 2 paths");
    std::vector<CovarianceRow> rows;
    rows.reserve(u_list.size());
    const auto n = static_cast<double>(paths.size());
    for (double u : u_list) {
        const std::size_t i0 = grid_index_near(paths.front(), t);
        const std::size_t i1 = grid_index_near(paths.front(), t + u);
        double mx = 0.0, my = 0.0;
        for (const SamplePath& p : paths) {
            mx += p.x[i0];
            my += p.x[i1];
        }
        mx /= n;
        my /= n;
        double cov = 0.0, ss = 0.0;
        for (const SamplePath& p : paths) {
            const double d = (p.x[i0] - mx) * (p.x[i1] - my);
            cov += d;
        }
        cov /= (n - 1.0);
        for (const SamplePath& p : paths) {
            const double d = (p.x[i0] - mx) * (p.x[i1] - my) - cov;
            ss += d * d;
        }
        const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        require_finite(cov, "weak_dependence");
        require_finite(se, "weak_dependence");
        rows.push_back({u, cov, se});
    }
    return rows;
}

double fit_log_decay_slope(const MeanPath& path, double level, double t_lo,
                           double t_hi, double atol) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < path.m.size(); ++i) {
        const double t = path.t0 + path.step * static_cast<double>(i);
        if (t < t_lo || t > t_hi) continue;
        const double dev = std::abs(path.m[i] - level);
        if (dev <= atol) continue;
        const double y = std::log(dev);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_log_decay_slope: not enough usable points");
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

} // namespace cdgarch
