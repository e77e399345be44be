#include "cdgarch/mean_dde.hpp"

#include <cmath>
#include <stdexcept>

#include "cdgarch/errors.hpp"

namespace cdgarch {

namespace {

std::size_t checked_ratio(double num, double den, const char* what) {
    const double ratio = num / den;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument(std::string("mean solver: step does not divide ") + what);
    return static_cast<std::size_t>(rounded);
}

// Cubic Hermite segment on [a, a + s].
struct HermiteSeg {
    double a = 0.0, s = 1.0;
    double m0 = 0.0, d0 = 0.0, m1 = 0.0, d1 = 0.0;

    double at(double x) const {
        const double th = (x - a) / s;
        const double th2 = th * th;
        const double th3 = th2 * th;
        return (2.0 * th3 - 3.0 * th2 + 1.0) * m0 + (th3 - 2.0 * th2 + th) * s * d0 +
               (-2.0 * th3 + 3.0 * th2) * m1 + (th3 - th2) * s * d1;
    }
};

struct FdeSolver {
    const HistorySegment& phi;
    double eta, c0, s;
    std::size_t K; // panels over [-r, 0]
    std::vector<double> wq;     // Simpson weights x f at half-step offsets
    const CombinedKernel& f;
    std::vector<double> m, d;   // committed knots on t >= 0
    std::size_t committed = 0;  // highest valid index in m, d

    double value_phi(double x) const { return phi(x); }

    // m-hat at arbitrary x given the provisional segment for the open step.
    double value_general(double x, const HermiteSeg& ext) const {
        if (x <= 0.0) return phi(x);
        const double front = s * static_cast<double>(committed);
        if (x > front) return ext.at(x);
        auto i = static_cast<std::size_t>(x / s);
        if (i >= committed) i = committed - 1;
        HermiteSeg seg{s * static_cast<double>(i), s, m[i], d[i], m[i + 1], d[i + 1]};
        return seg.at(x);
    }

    // node value at half-index hidx (x = hidx * s / 2)
    double node_value(long long hidx, const HermiteSeg& ext) const {
        if (hidx < 0) return phi(static_cast<double>(hidx) * 0.5 * s);
        if (hidx > 2 * static_cast<long long>(committed))
            return ext.at(static_cast<double>(hidx) * 0.5 * s);
        if (hidx % 2 == 0) return m[static_cast<std::size_t>(hidx / 2)];
        const auto i = static_cast<std::size_t>((hidx - 1) / 2);
        return 0.5 * (m[i] + m[i + 1]) + 0.125 * s * (d[i] - d[i + 1]);
    }

    // Delay integral at time H * s / 2. The panel holding the t = 0 kink is
    // split there so the quadrature never straddles the derivative jump.
    double delay_integral(long long H, const HermiteSeg& ext) const {
        if (K == 0) return 0.0;
        double acc = 0.0;
        for (std::size_t k = 0; k <= 2 * K; ++k)
            acc += wq[k] * node_value(H - static_cast<long long>(k), ext);

        if (H % 2 != 0 && H <= 2 * static_cast<long long>(K) - 1) {
            // remove the kinked panel's Simpson contribution...
            const auto k_mid = static_cast<std::size_t>(H);
            const double tau = static_cast<double>(H) * 0.5 * s;
            const double g_lo = f(-static_cast<double>(k_mid + 1) * 0.5 * s) *
                                node_value(-1, ext);
            const double g_mid = f(-tau) * node_value(0, ext);
            const double g_hi = f(-static_cast<double>(k_mid - 1) * 0.5 * s) *
                                node_value(1, ext);
            acc -= s / 6.0 * (g_lo + 4.0 * g_mid + g_hi);
            // ...and integrate the two smooth halves separately
            const auto piece = [&](double u_lo, double u_hi) {
                const double u_mid = 0.5 * (u_lo + u_hi);
                const double gl = f(u_lo) * value_general(tau + u_lo, ext);
                const double gm = f(u_mid) * value_general(tau + u_mid, ext);
                const double gh = f(u_hi) * value_general(tau + u_hi, ext);
                return (u_hi - u_lo) / 6.0 * (gl + 4.0 * gm + gh);
            };
            acc += piece(-static_cast<double>(k_mid + 1) * 0.5 * s, -tau);
            acc += piece(-tau, -static_cast<double>(k_mid - 1) * 0.5 * s);
        }
        return acc;
    }

    double rhs_value(double mv, double delay) const { return eta - c0 * mv + delay; }

    void step_once(std::size_t n) {
        const double t_n = s * static_cast<double>(n);
        // initial extension: extrapolate the previous segment (linear at t = 0)
        HermiteSeg ext;
        if (n == 0)
            ext = {0.0, s, m[0], d[0], m[0] + s * d[0], d[0]};
        else
            ext = {t_n - s, s, m[n - 1], d[n - 1], m[n], d[n]};

        const double k1 = d[n];
        double m_next = m[n], d_next = d[n];
        for (int pass = 0; pass < 2; ++pass) {
            const double i_half = delay_integral(2 * static_cast<long long>(n) + 1, ext);
            const double i_full = delay_integral(2 * static_cast<long long>(n) + 2, ext);
            const double k2 = rhs_value(m[n] + 0.5 * s * k1, i_half);
            const double k3 = rhs_value(m[n] + 0.5 * s * k2, i_half);
            const double k4 = rhs_value(m[n] + s * k3, i_full);
            m_next = m[n] + s / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            d_next = rhs_value(m_next, i_full);
            ext = {t_n, s, m[n], d[n], m_next, d_next};
        }
        d_next = rhs_value(m_next, delay_integral(2 * static_cast<long long>(n) + 2, ext));
        m[n + 1] = m_next;
        d[n + 1] = d_next;
        committed = n + 1;
    }
};

} // namespace

MeanPath solve_mean_fde(const DelayModel& model, const HistorySegment& phi,
                        double T, double step) {
    validate(model);
    if (!(step > 0.0)) throw std::invalid_argument("mean solver: step must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("mean solver: T must be > 0");
    const CombinedKernel f = combine(model);
    if (!phi.covers(f.r))
        throw std::invalid_argument("mean solver: history does not cover [-r, 0]");
    const std::size_t K = f.r > 0.0 ? checked_ratio(f.r, step, "r") : 0;
    const auto N = static_cast<std::size_t>(std::ceil(T / step - 1e-9));

    FdeSolver solver{phi, model.eta, f.c0, step, K, {}, f, {}, {}, 0};
    solver.wq.assign(2 * K + (K > 0 ? 1 : 0), 0.0);
    for (std::size_t k = 0; k < solver.wq.size(); ++k) {
        const double u = -static_cast<double>(k) * 0.5 * step;
        double w = step / 6.0;
        if (k > 0 && k < 2 * K) w *= (k % 2 == 1) ? 4.0 : 2.0;
        solver.wq[k] = w * f(u);
    }
    solver.m.assign(N + 1, 0.0);
    solver.d.assign(N + 1, 0.0);
    solver.m[0] = phi(0.0);
    HermiteSeg none{0.0, step, solver.m[0], 0.0, solver.m[0], 0.0};
    solver.d[0] = solver.rhs_value(solver.m[0], solver.delay_integral(0, none));

    for (std::size_t n = 0; n < N; ++n) solver.step_once(n);

    MeanPath out;
    out.solver = "dde";
    out.step = step;
    out.t0 = -f.r;
    out.m.resize(K + N + 1);
    for (std::size_t i = 0; i < K; ++i)
        out.m[i] = phi(-f.r + step * static_cast<double>(i));
    for (std::size_t i = 0; i <= N; ++i) out.m[K + i] = solver.m[i];
    return out;
}

double renewal_kernel_zeta(const DelayModel& model, double t) {
    validate(model);
    if (t < 0.0) throw std::invalid_argument("zeta: t must be >= 0");
    if (t == 0.0) return 0.0;
    const CombinedKernel f = combine(model);
    return -f.c0 + f.partial_tail(t);
}

MeanPath solve_mean_renewal(const DelayModel& model, const HistorySegment& phi,
                            double T, double step) {
    validate(model);
    if (!(step > 0.0)) throw std::invalid_argument("mean solver: step must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("mean solver: T must be > 0");
    const CombinedKernel f = combine(model);
    if (!phi.covers(f.r))
        throw std::invalid_argument("mean solver: history does not cover [-r, 0]");
    if (std::abs(f.c0 - f.l1) <= 1e-12 * std::max(1.0, std::abs(f.c0)))
        throw ConditionError("renewal solver requires zeta(r) != 0, i.e. c0 != ||f||_1 (c0 = " +
                             std::to_string(f.c0) + ", ||f||_1 = " + std::to_string(f.l1) + ")");

    const std::size_t K = f.r > 0.0 ? checked_ratio(f.r, step, "r") : 0;
    const auto N = static_cast<std::size_t>(std::ceil(T / step - 1e-9));
    const double mean_limit = model.eta / (f.c0 - f.l1); // -eta / zeta(r)
    const double z_r = -f.c0 + f.l1;

    // right-continuous zeta on the grid; constant z_r beyond r
    std::vector<double> zq(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        zq[k] = -f.c0 + f.partial_tail(static_cast<double>(k) * step);
    if (K == 0) zq[0] = -f.c0;
    const auto zq_ext = [&](std::size_t i) { return i <= K ? zq[i] : z_r; };

    // forcing h(t) on the grid
    std::vector<double> h(N + 1);
    std::vector<double> phi_dev(K + 1);
    for (std::size_t j = 0; j <= K; ++j)
        phi_dev[j] = phi(-static_cast<double>(j) * step) - mean_limit;
    double zeta_trapz = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
        if (n > 0) zeta_trapz += 0.5 * step * (zq_ext(n - 1) + zq_ext(n));
        double tail = 0.0;
        if (K > 0 && n <= K) {
            for (std::size_t j = 0; j <= K; ++j) {
                const double w = (j == 0 || j == K) ? 0.5 : 1.0;
                tail += w * (zq_ext(n + j) - zq[j]) * phi_dev[j];
            }
            tail *= step;
        } else if (K > 0) {
            for (std::size_t j = 0; j <= K; ++j) {
                const double w = (j == 0 || j == K) ? 0.5 : 1.0;
                tail += w * (z_r - zq[j]) * phi_dev[j];
            }
            tail *= step;
        }
        h[n] = phi(0.0) - mean_limit * zeta_trapz + tail;
    }

    std::vector<double> m(N + 1);
    m[0] = phi(0.0);
    const double denom = 1.0 - 0.5 * step * zq[0];
    double running_tail = 0.0; // sum of m_j over the constant-kernel range
    for (std::size_t n = 1; n <= N; ++n) {
        const std::size_t cut = std::max<std::size_t>(K, 1);
        if (n >= cut + 1) running_tail += m[n - cut];
        double conv = 0.5 * zq_ext(n) * m[0] + z_r * running_tail;
        const std::size_t j_lo = n > K ? n - K + 1 : 1;
        for (std::size_t j = j_lo; j + 1 <= n; ++j) conv += zq[n - j] * m[j];
        m[n] = (h[n] + step * conv) / denom;
    }

    MeanPath out;
    out.solver = "renewal";
    out.step = step;
    out.t0 = -f.r;
    out.m.resize(K + N + 1);
    for (std::size_t i = 0; i < K; ++i)
        out.m[i] = phi(-f.r + step * static_cast<double>(i));
    for (std::size_t i = 0; i <= N; ++i) out.m[K + i] = m[i];
    return out;
}

} // namespace cdgarch
