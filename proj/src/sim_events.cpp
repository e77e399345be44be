#include "cdgarch/sim_events.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdgarch {

void XHistory::add(double t, double x, double aux) {
    if (!knots_.empty() && t < knots_.back().t)
        throw std::invalid_argument("history: knots must be time-ordered");
    knots_.push_back({t, x, aux});
}

std::size_t XHistory::first_at_or_after(double t) const {
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), t,
                                     [](const Knot& k, double v) { return k.t < v; });
    return static_cast<std::size_t>(it - knots_.begin());
}

double XHistory::eval(double t) const {
    if (knots_.empty()) throw std::invalid_argument("history: empty");
    std::size_t i = first_at_or_after(t);
    if (i == knots_.size()) return knots_.back().x;
    if (knots_[i].t == t) {
        while (i + 1 < knots_.size() && knots_[i + 1].t == t) ++i; // post value
        return knots_[i].x;
    }
    if (i == 0) return knots_.front().x;
    const Knot& a = knots_[i - 1];
    const Knot& b = knots_[i];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) return b.x;
    return a.x + (b.x - a.x) * (t - a.t) / dt;
}

double XHistory::eval_left(double t) const {
    if (knots_.empty()) throw std::invalid_argument("history: empty");
    const std::size_t i = first_at_or_after(t);
    if (i == knots_.size()) return knots_.back().x;
    if (knots_[i].t == t) return knots_[i].x; // first knot at t = pre value
    if (i == 0) return knots_.front().x;
    const Knot& a = knots_[i - 1];
    const Knot& b = knots_[i];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) return a.x;
    return a.x + (b.x - a.x) * (t - a.t) / dt;
}

void XHistory::prune_before(double t) {
    while (knots_.size() >= 2 && knots_[1].t <= t) knots_.pop_front();
}

namespace {

// Linear extension of the current step for delayed lookups past the last
// committed knot; slope matches the stage's trial value.
struct StageExtension {
    double t_base = 0.0;
    double x_base = 0.0;
    double slope = 0.0;
    double at(double s) const { return x_base + (s - t_base) * slope; }
};

// Trapezoid of f_mu(s - t) X(s) over [t - p, t] on the knot set, optionally
// subsampled to ~target_spacing (event knots always kept so jumps stay
// resolved), with interpolated partial end panels.
double mu_delay_integral(const DelayKernel& fmu, const XHistory& hist, double t,
                         const StageExtension* ext, double target_spacing,
                         bool use_aux) {
    const double p = fmu.support();
    const double lo = t - p;
    if (hist.empty() || hist.front_time() > lo + 1e-9 * std::max(1.0, std::abs(lo)))
        throw std::invalid_argument("xi: insufficient history for the f_mu window");

    const double w = fmu.exp_w();
    const double lam = fmu.exp_lambda();
    const double tail = fmu.is_exponential() ? std::exp(-lam * p) : 0.0;
    const double scale = (fmu.is_exponential() && use_aux) ? std::exp(-lam * t) : 0.0;
    const auto f_of = [&](double u) { return fmu(std::clamp(u, -p, 0.0)); };
    const auto f_at_knot = [&](const Knot& k) {
        if (fmu.is_exponential() && use_aux) {
            const double v = w * (k.aux * scale - tail);
            return v > 0.0 ? v : 0.0;
        }
        return f_of(k.t - t);
    };

    const double committed = hist.back_time();
    double prev_t = lo;
    double prev_g = f_of(-p) * (lo >= committed && ext ? ext->at(lo) : hist.eval(lo));
    double acc = 0.0;

    std::size_t i = hist.first_at_or_after(lo);
    const std::size_t n = hist.size();
    while (i < n && hist[i].t <= t) {
        const Knot& k = hist[i];
        const bool at_event = (i + 1 < n && hist[i + 1].t == k.t) ||
                              (i > 0 && hist[i - 1].t == k.t);
        const bool last_in_window = (i + 1 >= n) || (hist[i + 1].t > t);
        if (at_event || last_in_window || k.t - prev_t >= target_spacing) {
            const double g = f_at_knot(k) * k.x;
            acc += 0.5 * (prev_g + g) * (k.t - prev_t);
            prev_t = k.t;
            prev_g = g;
        }
        ++i;
    }
    if (t > prev_t) {
        const double xt = (ext && t > committed) ? ext->at(t) : hist.eval(t);
        const double g = f_of(0.0) * xt;
        acc += 0.5 * (prev_g + g) * (t - prev_t);
    }
    return acc;
}

// f_nu-weighted atom sum over jump indices [lo, hi) of the log.
double nu_atom_sum(const DelayKernel& fnu, const JumpLog& log,
                   const std::vector<double>& x_pre, std::size_t lo, std::size_t hi,
                   double t) {
    const double q = fnu.support();
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
        const double u = log.times[j] - t;
        if (u < -q || u > 0.0) continue;
        acc += fnu(u) * x_pre[j] * log.sizes[j] * log.sizes[j];
    }
    return acc;
}

} // namespace

double xi_evaluate(const DelayModel& model, const XHistory& history,
                   const JumpLog& log, double t) {
    validate(model);
    const double r = model.r();
    if (history.empty() || history.front_time() > t - r + 1e-9 ||
        history.back_time() < t - 1e-9)
        throw std::invalid_argument("xi: history does not cover [t - r, t]");

    double acc = 0.0;
    if (model.f_mu)
        acc += mu_delay_integral(*model.f_mu, history, t, nullptr, 0.0, false);
    if (model.f_nu) {
        const double q = model.q();
        const auto lo = static_cast<std::size_t>(
            std::upper_bound(log.times.begin(), log.times.end(), t - q) - log.times.begin());
        const auto hi = static_cast<std::size_t>(
            std::upper_bound(log.times.begin(), log.times.end(), t) - log.times.begin());
        std::vector<double> x_pre(log.times.size(), 0.0);
        for (std::size_t j = lo; j < hi; ++j) x_pre[j] = history.eval_left(log.times[j]);
        acc += nu_atom_sum(*model.f_nu, log, x_pre, lo, hi, t);
    }
    return acc;
}

namespace {

enum class BreakKind { WindowExit = 0, Jump = 1, Report = 2, End = 3 };

struct Breakpoint {
    double t;
    BreakKind kind;
    std::size_t index; // atom index (Jump/WindowExit) or report index
};

} // namespace

SamplePath event_simulate(const DelayModel& model, const JumpLog& log,
                          const HistorySegment& phi, double y0, double h,
                          double report_delta) {
    validate(model);
    if (model.noise.sigma_l != 0.0)
        throw std::invalid_argument(
            "event_simulate: requires sigma_l = 0 (fold the Brownian drift into c_mu)");
    if (!(h > 0.0)) throw std::invalid_argument("event_simulate: h must be > 0");
    if (!(report_delta > 0.0))
        throw std::invalid_argument("event_simulate: report_delta must be > 0");
    const double r = model.r();
    if (!phi.covers(r))
        throw std::invalid_argument("event_simulate: history segment does not cover [-r, 0]");
    const double gap = min_inter_event_gap(log);
    if (h > gap / 4.0)
        throw std::invalid_argument(
            "event_simulate: h exceeds a quarter of the minimum inter-event gap");
    const double T = log.t_end;
    if (!(T > 0.0)) throw std::invalid_argument("event_simulate: horizon must end after 0");

    const bool exp_mu = model.f_mu && model.f_mu->is_exponential();
    const double lam_mu = exp_mu ? model.f_mu->exp_lambda() : 0.0;
    // e^{lam t} caching overflows for extreme lam*T; fall back to direct exp
    const bool use_aux = exp_mu && lam_mu * (T + r) < 600.0;
    const auto aux_of = [&](double t) { return use_aux ? std::exp(lam_mu * t) : 0.0; };

    XHistory hist;
    if (r > 0.0) {
        const auto n0 = static_cast<std::size_t>(std::ceil(r / std::min(h, r) - 1e-9));
        for (std::size_t i = 0; i <= n0; ++i) {
            const double t = -r + r * static_cast<double>(i) / static_cast<double>(n0);
            hist.add(t, phi(t), aux_of(t));
        }
    } else {
        hist.add(0.0, phi(0.0), aux_of(0.0));
    }

    const double q = model.q();
    const double p = model.p();
    std::vector<double> atom_x_pre(log.times.size(), 0.0);
    std::size_t nu_lo = 0, nu_hi = 0;
    if (model.f_nu) {
        nu_lo = static_cast<std::size_t>(
            std::upper_bound(log.times.begin(), log.times.end(), -q) - log.times.begin());
        nu_hi = static_cast<std::size_t>(
            std::upper_bound(log.times.begin(), log.times.end(), 0.0) - log.times.begin());
        for (std::size_t j = nu_lo; j < nu_hi; ++j) atom_x_pre[j] = phi(log.times[j]);
    }

    std::vector<Breakpoint> breaks;
    for (std::size_t j = 0; j < log.times.size(); ++j) {
        const double tj = log.times[j];
        if (tj > 0.0 && tj <= T) breaks.push_back({tj, BreakKind::Jump, j});
        if (model.f_nu && tj + q > 0.0 && tj + q < T)
            breaks.push_back({tj + q, BreakKind::WindowExit, j});
        if (model.f_mu && tj + p > 0.0 && tj + p < T)
            breaks.push_back({tj + p, BreakKind::WindowExit, j}); // kink only, no state change
    }
    const auto n_rep = static_cast<std::size_t>(std::floor(T / report_delta + 1e-9));
    for (std::size_t k = 1; k <= n_rep; ++k)
        breaks.push_back({report_delta * static_cast<double>(k), BreakKind::Report, k});
    breaks.push_back({T, BreakKind::End, 0});
    std::sort(breaks.begin(), breaks.end(), [](const Breakpoint& a, const Breakpoint& b) {
        if (a.t != b.t) return a.t < b.t;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });

    SamplePath path;
    path.delta = report_delta;
    const auto n_hist_rep =
        r > 0.0 ? static_cast<std::size_t>(std::ceil(r / report_delta - 1e-9)) : 0;
    path.n_history = n_hist_rep;
    path.t0 = -report_delta * static_cast<double>(n_hist_rep);
    path.x.assign(n_hist_rep + n_rep + 1, 0.0);
    path.y.assign(n_rep + 1, 0.0);
    for (std::size_t i = 0; i < n_hist_rep; ++i)
        path.x[i] = phi(std::max(-r, path.t0 + report_delta * static_cast<double>(i)));
    path.meta.scheme = "events";
    path.meta.seed = model.noise.seed;
    path.meta.delta = report_delta;
    path.meta.ode_step = h;

    double t = 0.0;
    double x = phi(0.0);
    double y = y0;
    path.x[n_hist_rep] = x;
    path.y[0] = y;

    const auto rhs = [&](double tau, double t_base, double x_base, double slope) {
        const StageExtension ext{t_base, x_base, slope};
        double d = model.eta - model.c_mu * ext.at(tau);
        if (model.f_mu)
            d += mu_delay_integral(*model.f_mu, hist, tau, &ext, h, use_aux);
        if (model.f_nu) d += nu_atom_sum(*model.f_nu, log, atom_x_pre, nu_lo, nu_hi, tau);
        return d;
    };

    const auto integrate_to = [&](double t_target) {
        if (!(t_target > t)) return;
        const auto n_sub = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil((t_target - t) / h - 1e-12)));
        const double hs = (t_target - t) / static_cast<double>(n_sub);
        for (std::size_t i = 0; i < n_sub; ++i) {
            const double tn = t;
            const double k1 = rhs(tn, tn, x, 0.0);
            const double k2 = rhs(tn + 0.5 * hs, tn, x, k1);
            const double k3 = rhs(tn + 0.5 * hs, tn, x, k2);
            const double k4 = rhs(tn + hs, tn, x, k3);
            x += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = (i + 1 == n_sub) ? t_target : tn + hs;
            hist.add(t, x, aux_of(t));
        }
        hist.prune_before(t - r - 4.0 * (h + report_delta));
    };

    for (const Breakpoint& bp : breaks) {
        integrate_to(bp.t);
        switch (bp.kind) {
            case BreakKind::WindowExit:
                while (nu_lo < nu_hi && log.times[nu_lo] <= bp.t - q + 1e-15) ++nu_lo;
                break;
            case BreakKind::Jump: {
                const double dl = log.sizes[bp.index];
                const double x_pre = x;
                const double dx = model.c_nu * x_pre * dl * dl;
                const double x_post = x_pre + dx;
                const double y_post = y + std::sqrt(std::max(x_pre, 0.0)) * dl;
                path.events.push_back({bp.t, x_pre, x_post, dx, y_post, dl});
                hist.add(bp.t, x_pre, aux_of(bp.t));
                hist.add(bp.t, x_post, aux_of(bp.t));
                atom_x_pre[bp.index] = x_pre;
                if (model.f_nu) nu_hi = std::max(nu_hi, bp.index + 1);
                x = x_post;
                y = y_post;
                break;
            }
            case BreakKind::Report:
                path.x[n_hist_rep + bp.index] = x;
                path.y[bp.index] = y;
                break;
            case BreakKind::End:
                break;
        }
    }
    return path;
}

} // namespace cdgarch
