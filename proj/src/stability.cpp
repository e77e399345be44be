#include "cdgarch/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cdgarch/errors.hpp"

namespace cdgarch {

double stationary_mean(const DelayModel& model) {
    validate(model);
    const CombinedKernel f = combine(model);
    if (!(f.c0 > f.l1))
        throw ConditionError("stationary mean requires c0 > ||f||_1 (c0 = " +
                             std::to_string(f.c0) + ", ||f||_1 = " + std::to_string(f.l1) + ")");
    return model.eta / (f.c0 - f.l1);
}

double positivity_floor(const DelayModel& model) {
    validate(model);
    const double norm_mu = model.f_mu ? model.f_mu->norms().l1 : 0.0;
    if (!(model.c_mu > norm_mu))
        throw ConditionError("positivity floor requires c_mu > ||f_mu||_1 (c_mu = " +
                             std::to_string(model.c_mu) + ", ||f_mu||_1 = " +
                             std::to_string(norm_mu) + ")");
    return model.eta / (model.c_mu - norm_mu);
}

StabilityReport moment_bound_report(const DelayModel& model, double ex0, double ex0_sq) {
    validate(model);
    if (!(ex0 >= 0.0)) throw std::invalid_argument("moment bounds: E[X0] must be >= 0");
    if (ex0_sq < ex0 * ex0 * (1.0 - 1e-12))
        throw std::invalid_argument("moment bounds: E[X0^2] must be >= E[X0]^2");

    const NoiseMoments mom = derive_moments(model.noise);
    StabilityReport rep;
    rep.kappa2 = mom.kappa2;
    rep.kappa4 = mom.kappa4;
    rep.f_mu_l1 = model.f_mu ? model.f_mu->norms().l1 : 0.0;
    if (model.f_nu) {
        const KernelNorms n = model.f_nu->norms();
        rep.f_nu_l1 = n.l1;
        rep.f_nu_l2 = n.l2;
    }
    rep.c0 = model.c_mu - mom.kappa2 * model.c_nu;
    rep.f_l1 = rep.f_mu_l1 + mom.kappa2 * rep.f_nu_l1;
    rep.mean_stationary = rep.c0 > rep.f_l1;
    if (rep.mean_stationary) rep.M = model.eta / (rep.c0 - rep.f_l1);
    if (model.c_mu > rep.f_mu_l1) rep.x_floor = model.eta / (model.c_mu - rep.f_mu_l1);

    const double norms1 = rep.f_mu_l1 + mom.kappa2 * rep.f_nu_l1;
    rep.C1_minus = rep.c0 - norms1;
    rep.C1_plus = rep.c0 + norms1;
    const double core2 = rep.c0 - 0.5 * mom.kappa4 * model.c_nu * model.c_nu;
    const double norms2 = rep.f_mu_l1 + mom.kappa4 * rep.f_nu_l2;
    rep.C2_minus = core2 - norms2;
    rep.C2_plus = core2 + norms2;
    if (rep.C1_minus > 0.0)
        rep.l1_bound = 2.0 * model.eta / rep.C1_minus + ex0 * rep.C1_plus / rep.C1_minus;
    if (rep.C2_minus > 0.0)
        rep.l2_bound = (model.eta / rep.C2_minus) * (model.eta / rep.C2_minus) +
                       ex0_sq * rep.C2_plus / rep.C2_minus;
    return rep;
}

CharacteristicFunction::CharacteristicFunction(const DelayModel& model, int panels) {
    validate(model);
    if (panels < 1) throw std::invalid_argument("characteristic: panels must be >= 1");
    const CombinedKernel f = combine(model);
    c0_ = f.c0;
    const double r = f.r;
    if (r <= 0.0) return;
    nodes_.resize(static_cast<std::size_t>(panels) + 1);
    weights_.resize(nodes_.size());
    const double h = r / static_cast<double>(panels);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double u = -r + h * static_cast<double>(j);
        const double w = (j == 0 || j + 1 == nodes_.size()) ? 0.5 * h : h;
        nodes_[j] = u;
        weights_[j] = w * f(u);
    }
}

std::complex<double> CharacteristicFunction::operator()(std::complex<double> z) const {
    std::complex<double> integral(0.0, 0.0);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double e = std::exp(z.real() * nodes_[j]);
        const double phase = z.imag() * nodes_[j];
        integral += weights_[j] * std::complex<double>(e * std::cos(phase), e * std::sin(phase));
    }
    return z + c0_ - integral;
}

std::complex<double> CharacteristicFunction::derivative(std::complex<double> z) const {
    std::complex<double> integral(0.0, 0.0);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double e = std::exp(z.real() * nodes_[j]);
        const double phase = z.imag() * nodes_[j];
        integral += weights_[j] * nodes_[j] *
                    std::complex<double>(e * std::cos(phase), e * std::sin(phase));
    }
    return std::complex<double>(1.0, 0.0) - integral;
}

std::complex<double> characteristic_delta(const DelayModel& model,
                                          std::complex<double> z, int panels) {
    return CharacteristicFunction(model, panels)(z);
}

ScanRect default_scan_rect(const DelayModel& model) {
    const CombinedKernel f = combine(model);
    const double scale = f.c0 + f.l1 + 1.0;
    return {0.0, 10.0 * scale, -20.0 * scale, 20.0 * scale};
}

namespace {

struct ContourSweep {
    double winding = 0.0; // in turns
    bool too_coarse = false;
    double min_abs = 0.0;
};

ContourSweep contour_winding(const CharacteristicFunction& cf, const ScanRect& rect,
                             int per_side) {
    const std::complex<double> corners[4] = {
        {rect.re_lo, rect.im_lo}, {rect.re_hi, rect.im_lo},
        {rect.re_hi, rect.im_hi}, {rect.re_lo, rect.im_hi}};
    ContourSweep sweep;
    sweep.min_abs = std::numeric_limits<double>::infinity();
    double total = 0.0;
    std::complex<double> prev = cf(corners[0]);
    sweep.min_abs = std::min(sweep.min_abs, std::abs(prev));
    for (int side = 0; side < 4; ++side) {
        const std::complex<double> a = corners[side];
        const std::complex<double> b = corners[(side + 1) % 4];
        for (int i = 1; i <= per_side; ++i) {
            const double frac = static_cast<double>(i) / per_side;
            const std::complex<double> v = cf(a + frac * (b - a));
            const double av = std::abs(v);
            sweep.min_abs = std::min(sweep.min_abs, av);
            const double dtheta = std::arg(v / prev);
            if (std::abs(dtheta) > 0.5 * std::numbers::pi || !(av > 0.0))
                sweep.too_coarse = true;
            total += dtheta;
            prev = v;
        }
    }
    sweep.winding = total / (2.0 * std::numbers::pi);
    return sweep;
}

// winding with internal density escalation for the subdivision phase
int winding_count(const CharacteristicFunction& cf, const ScanRect& rect, int density) {
    for (int d = density; d <= 16384; d *= 2) {
        const ContourSweep s = contour_winding(cf, rect, d);
        if (s.too_coarse) continue;
        const double rounded = std::round(s.winding);
        if (std::abs(s.winding - rounded) <= 1e-6) return static_cast<int>(rounded);
    }
    throw std::invalid_argument("scan_roots: contour too coarse (root near the contour?)");
}

std::optional<std::complex<double>> newton_polish(const CharacteristicFunction& cf,
                                                  std::complex<double> z) {
    for (int i = 0; i < 50; ++i) {
        const std::complex<double> v = cf(z);
        if (std::abs(v) <= 1e-12) return z;
        const std::complex<double> dv = cf.derivative(z);
        if (!(std::abs(dv) > 0.0)) return std::nullopt;
        const std::complex<double> step = v / dv;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    }
    return std::abs(cf(z)) <= 1e-10 ? std::optional<std::complex<double>>(z) : std::nullopt;
}

void isolate_roots(const CharacteristicFunction& cf, const ScanRect& rect, int count,
                   std::vector<std::complex<double>>& out, int depth) {
    if (count <= 0) return;
    const double w = rect.re_hi - rect.re_lo;
    const double hgt = rect.im_hi - rect.im_lo;
    const std::complex<double> center(0.5 * (rect.re_lo + rect.re_hi),
                                      0.5 * (rect.im_lo + rect.im_hi));
    if (std::hypot(w, hgt) < 1e-7 || depth > 60) {
        const auto polished = newton_polish(cf, center);
        out.push_back(polished ? *polished : center);
        return;
    }
    const bool split_re = w >= hgt;
    for (const double frac : {0.5, 0.46875, 0.53125}) {
        ScanRect a = rect, b = rect;
        if (split_re) {
            a.re_hi = rect.re_lo + frac * w;
            b.re_lo = a.re_hi;
        } else {
            a.im_hi = rect.im_lo + frac * hgt;
            b.im_lo = a.im_hi;
        }
        try {
            const int ca = winding_count(cf, a, 64);
            const int cb = winding_count(cf, b, 64);
            if (ca + cb != count) continue; // root straddling the cut
            isolate_roots(cf, a, ca, out, depth + 1);
            isolate_roots(cf, b, cb, out, depth + 1);
            return;
        } catch (const std::invalid_argument&) {
            continue; // root on the cut line; try the next offset
        }
    }
    // could not separate cleanly; polish from the center as a last resort
    const auto polished = newton_polish(cf, center);
    out.push_back(polished ? *polished : center);
}

} // namespace

RootScan scan_roots(const DelayModel& model, const ScanRect& rect, int grid_density) {
    if (!(rect.re_hi > rect.re_lo) || !(rect.im_hi > rect.im_lo))
        throw std::invalid_argument("scan_roots: empty rectangle");
    if (grid_density < 4) throw std::invalid_argument("scan_roots: grid_density too small");
    const CharacteristicFunction cf(model);

    const ContourSweep sweep = contour_winding(cf, rect, grid_density);
    if (sweep.too_coarse)
        throw std::invalid_argument(
            "scan_roots: contour too coarse (argument increment above pi/2)");
    const double rounded = std::round(sweep.winding);
    if (std::abs(sweep.winding - rounded) > 1e-6)
        throw std::invalid_argument("scan_roots: non-integral winding number");

    RootScan scan;
    scan.count = static_cast<int>(rounded);
    if (scan.count == 0) return scan;

    std::vector<std::complex<double>> roots;
    isolate_roots(cf, rect, scan.count, roots, 0);
    if (!roots.empty()) {
        scan.dominant = *std::max_element(
            roots.begin(), roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            });
    }
    return scan;
}

double real_root_bisection(const DelayModel& model, double lo, double hi, double tol) {
    const CharacteristicFunction cf(model);
    const auto at = [&](double x) { return cf(std::complex<double>(x, 0.0)).real(); };
    double flo = at(lo);
    double fhi = at(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("real_root_bisection: no sign change over the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = at(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double theoretical_return_autocov(const DelayModel& model, double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("return autocov: u must be >= 0");
    const NoiseMoments mom = derive_moments(model.noise);
    const double mean = stationary_mean(model);
    return mom.kappa2 * mean * std::max(1.0 - u, 0.0);
}

StabilityReport analyze(const DelayModel& model, double ex0, double ex0_sq) {
    StabilityReport rep = moment_bound_report(model, ex0, ex0_sq);
    const ScanRect rhp = default_scan_rect(model);

    RootScan scan;
    bool scanned = false;
    for (int density : {128, 512, 2048, 8192}) {
        try {
            scan = scan_roots(model, rhp, density);
            scanned = true;
            break;
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    if (scanned) rep.roots_in_rhp = scan.count;

    if (scan.count > 0) {
        rep.dominant_root = scan.dominant;
        return rep;
    }

    // stable side: the dominant root sits left of the axis; walk down to a
    // sign change of the real section and bisect
    const CharacteristicFunction cf(model);
    const double reach = 10.0 * (rep.c0 + rep.f_l1 + 1.0);
    double lo = 0.0;
    const double step = std::max(0.05, reach / 400.0);
    double prev = cf(std::complex<double>(0.0, 0.0)).real();
    for (double x = -step; x >= -reach - step; x -= step) {
        const double cur = cf(std::complex<double>(x, 0.0)).real();
        if (prev * cur <= 0.0 && prev != 0.0) {
            const double root = real_root_bisection(model, x, x + step);
            rep.dominant_root = std::complex<double>(root, 0.0);
            break;
        }
        prev = cur;
    }
    return rep;
}

} // namespace cdgarch
