#pragma once

#include <complex>
#include <optional>

#include "cdgarch/kernels.hpp"

namespace cdgarch {

struct StabilityReport {
    double kappa2 = 0.0;
    double kappa4 = 0.0;
    double c0 = 0.0;
    double f_l1 = 0.0;
    double f_mu_l1 = 0.0;
    double f_nu_l1 = 0.0;
    double f_nu_l2 = 0.0;
    bool mean_stationary = false;      // c0 > ||f||_1
    std::optional<double> M;           // present iff mean_stationary
    std::optional<double> x_floor;     // present iff c_mu > ||f_mu||_1
    double C1_minus = 0.0, C1_plus = 0.0;
    double C2_minus = 0.0, C2_plus = 0.0;
    std::optional<double> l1_bound;    // 2 eta / C1- + E[X0] C1+ / C1-
    std::optional<double> l2_bound;    // (eta / C2-)^2 + E[X0^2] C2+ / C2-
    std::optional<int> roots_in_rhp;
    std::optional<std::complex<double>> dominant_root;
};

// eta / (c0 - ||f||_1); ConditionError when c0 <= ||f||_1.
double stationary_mean(const DelayModel& model);

// eta / (c_mu - ||f_mu||_1); ConditionError when c_mu <= ||f_mu||_1.
double positivity_floor(const DelayModel& model);

// Moment section of the report (no root scan); ex0, ex0_sq are E[X_0] and
// E[X_0^2]. Bounds are left unset when the corresponding C^- <= 0.
StabilityReport moment_bound_report(const DelayModel& model, double ex0, double ex0_sq);

// Delta(z) = z + c0 - integral e^{zu} f(u) du, the combined-kernel integral
// by composite trapezoid (panels nodes over [-r, 0]).
class CharacteristicFunction {
public:
    explicit CharacteristicFunction(const DelayModel& model, int panels = 10000);
    std::complex<double> operator()(std::complex<double> z) const;
    std::complex<double> derivative(std::complex<double> z) const;
    double c0() const { return c0_; }

private:
    double c0_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_; // trapezoid weight x f(u)
};

std::complex<double> characteristic_delta(const DelayModel& model,
                                          std::complex<double> z, int panels = 10000);

struct ScanRect {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
};

// [0, 10 n] x [-20 n, 20 n] i with n = c0 + ||f||_1 + 1; a scan region, not
// a proof of coverage.
ScanRect default_scan_rect(const DelayModel& model);

struct RootScan {
    int count = 0;
    std::optional<std::complex<double>> dominant;
};

// Argument-principle zero count of Delta inside the rectangle, sampling
// grid_density points per side; roots located by subdividing and polishing
// with complex Newton (50 iterations, |Delta| <= 1e-12). Throws when the
// contour is too coarse (an argument increment above pi/2 or a non-integral
// winding number).
RootScan scan_roots(const DelayModel& model, const ScanRect& rect, int grid_density);

// Largest real zero of Delta in [lo, hi] by bisection; requires a sign
// change over the bracket.
double real_root_bisection(const DelayModel& model, double lo, double hi,
                           double tol = 1e-12);

// kappa2 M (1 - u)_+; propagates the stationarity ConditionError.
double theoretical_return_autocov(const DelayModel& model, double u);

// Full report: moments + bounds + RHP root scan + dominant root (the
// largest-real-part characteristic root, also the mean's decay rate).
StabilityReport analyze(const DelayModel& model, double ex0, double ex0_sq);

} // namespace cdgarch
