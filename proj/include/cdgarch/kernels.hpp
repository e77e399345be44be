#pragma once

#include <optional>
#include <vector>

#include "cdgarch/noise.hpp"

namespace cdgarch {

struct KernelNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double sup = 0.0;
};

// Nonnegative delay density on [-support, 0]. Two forms: the exponential
// family w (e^{lambda u} - e^{-lambda support}), normalized to vanish at the
// left endpoint, and a tabulated density on a uniform grid with linear
// interpolation.
class DelayKernel {
public:
    static DelayKernel exponential(double w, double lambda, double support);
    // values are f at the uniform grid -support, ..., 0 (ascending u).
    static DelayKernel tabulated(std::vector<double> values, double support);

    double support() const { return support_; }
    bool is_exponential() const { return exponential_; }
    double exp_w() const { return w_; }
    double exp_lambda() const { return lambda_; }

    // f(u); zero outside [-support, 0].
    double operator()(double u) const;

    // Exact integral of f over [a, b] (clipped to the support); 0 when a >= b.
    // Closed form for the exponential family, piecewise-linear exact for
    // tabulated values.
    double integral(double a, double b) const;

    // L1 exact (closed form / piecewise-linear); L2 and sup by composite
    // trapezoid scan, 1e4 panels for the exponential form, tabulation
    // resolution otherwise.
    KernelNorms norms() const;

    // True when f(-support) != 0; the functional-Lipschitz bound wants a
    // vanishing left tail, so callers may warn.
    bool tail_nonzero() const;

private:
    DelayKernel() = default;

    bool exponential_ = true;
    double support_ = 0.0;
    double w_ = 0.0;
    double lambda_ = 0.0;
    std::vector<double> values_; // tabulated form
    double du_ = 0.0;
};

// Volterra kernel F(t, s) = integral of f over [max(-support, s-t), min(s, 0)];
// zero whenever the interval is empty, in particular for s >= t and t <= 0.
double volterra_F(const DelayKernel& k, double t, double s);

// Full model: point masses c_mu, c_nu plus optional densities (absent kernel
// encodes p = 0 or q = 0), and the driving-noise specification.
struct DelayModel {
    double eta = 0.0;
    double c_mu = 0.0;
    double c_nu = 0.0;
    std::optional<DelayKernel> f_mu;
    std::optional<DelayKernel> f_nu;
    NoiseSpec noise;

    double p() const { return f_mu ? f_mu->support() : 0.0; }
    double q() const { return f_nu ? f_nu->support() : 0.0; }
    double r() const { return p() > q() ? p() : q(); }
};

void validate(const DelayModel& model);

// The combined quantities entering the mean equation: c0 = c_mu - kappa2 c_nu
// and f = f_mu + kappa2 f_nu on [-r, 0].
struct CombinedKernel {
    double c0 = 0.0;
    double kappa2 = 0.0;
    double r = 0.0;
    double l1 = 0.0; // ||f_mu||_1 + kappa2 ||f_nu||_1
    std::optional<DelayKernel> mu;
    std::optional<DelayKernel> nu;

    double operator()(double u) const {
        double v = 0.0;
        if (mu) v += (*mu)(u);
        if (nu) v += kappa2 * (*nu)(u);
        return v;
    }

    // Exact integral of the combined f over [a, b].
    double integral(double a, double b) const {
        double v = 0.0;
        if (mu) v += mu->integral(a, b);
        if (nu) v += kappa2 * nu->integral(a, b);
        return v;
    }

    // integral of f(-u) over [0, min(t, r)], the running mass in zeta.
    double partial_tail(double t) const {
        if (!(t > 0.0)) return 0.0;
        const double lo = t < r ? -t : -r;
        return integral(lo, 0.0);
    }
};

CombinedKernel combine(const DelayModel& model);

} // namespace cdgarch
