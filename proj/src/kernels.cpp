#include "cdgarch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdgarch {

DelayKernel DelayKernel::exponential(double w, double lambda, double support) {
    if (!(w > 0.0)) throw std::invalid_argument("kernel: w must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("kernel: lambda must be > 0");
    if (!(support > 0.0)) throw std::invalid_argument("kernel: support must be > 0");
    DelayKernel k;
    k.exponential_ = true;
    k.w_ = w;
    k.lambda_ = lambda;
    k.support_ = support;
    return k;
}

DelayKernel DelayKernel::tabulated(std::vector<double> values, double support) {
    if (!(support > 0.0)) throw std::invalid_argument("kernel: support must be > 0");
    if (values.size() < 2) throw std::invalid_argument("kernel: need at least 2 tabulated values");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("kernel: tabulated values must be >= 0");
    DelayKernel k;
    k.exponential_ = false;
    k.support_ = support;
    k.values_ = std::move(values);
    k.du_ = support / static_cast<double>(k.values_.size() - 1);
    return k;
}

double DelayKernel::operator()(double u) const {
    if (u < -support_ || u > 0.0) return 0.0;
    if (exponential_)
        return w_ * (std::exp(lambda_ * u) - std::exp(-lambda_ * support_));
    const double x = (u + support_) / du_;
    const auto i = std::min(values_.size() - 2, static_cast<std::size_t>(std::max(0.0, x)));
    const double frac = x - static_cast<double>(i);
    return values_[i] + (values_[i + 1] - values_[i]) * std::clamp(frac, 0.0, 1.0);
}

double DelayKernel::integral(double a, double b) const {
    a = std::max(a, -support_);
    b = std::min(b, 0.0);
    if (!(b > a)) return 0.0;
    if (exponential_) {
        const double tail = std::exp(-lambda_ * support_);
        return w_ * ((std::exp(lambda_ * b) - std::exp(lambda_ * a)) / lambda_ - tail * (b - a));
    }
    // piecewise linear: trapezoid on the panel grid restricted to [a, b] is exact
    const auto value_at = [&](double u) { return (*this)(u); };
    const double xa = (a + support_) / du_;
    const double xb = (b + support_) / du_;
    const auto ia = static_cast<std::size_t>(std::max(0.0, std::ceil(xa - 1e-12)));
    const auto ib_f = std::floor(xb + 1e-12);
    const auto ib = static_cast<std::size_t>(std::max(0.0, ib_f));
    double total = 0.0;
    if (ia > ib || ia >= values_.size()) {
        // both endpoints inside one panel
        return 0.5 * (value_at(a) + value_at(b)) * (b - a);
    }
    const double ta = -support_ + static_cast<double>(ia) * du_;
    const double tb = -support_ + static_cast<double>(std::min(ib, values_.size() - 1)) * du_;
    if (ta > a) total += 0.5 * (value_at(a) + value_at(ta)) * (ta - a);
    for (std::size_t i = ia; i + 1 <= std::min(ib, values_.size() - 1); ++i)
        total += 0.5 * (values_[i] + values_[i + 1]) * du_;
    if (b > tb) total += 0.5 * (value_at(tb) + value_at(b)) * (b - tb);
    return total;
}

KernelNorms DelayKernel::norms() const {
    KernelNorms n;
    n.l1 = integral(-support_, 0.0);
    const std::size_t panels = exponential_ ? 10000 : values_.size() - 1;
    const double h = support_ / static_cast<double>(panels);
    double sq = 0.0;
    double prev = (*this)(-support_);
    n.sup = prev;
    for (std::size_t i = 1; i <= panels; ++i) {
        const double u = -support_ + static_cast<double>(i) * h;
        const double cur = (*this)(u);
        sq += 0.5 * (prev * prev + cur * cur) * h;
        n.sup = std::max(n.sup, cur);
        prev = cur;
    }
    n.l2 = std::sqrt(sq);
    return n;
}

bool DelayKernel::tail_nonzero() const {
    if (exponential_) return false; // normalized to vanish at -support
    return values_.front() != 0.0;
}

double volterra_F(const DelayKernel& k, double t, double s) {
    return k.integral(std::max(-k.support(), s - t), std::min(s, 0.0));
}

void validate(const DelayModel& model) {
    if (!(model.eta > 0.0)) throw std::invalid_argument("model: eta must be > 0");
    if (!(model.c_mu > 0.0)) throw std::invalid_argument("model: c_mu must be > 0");
    if (!(model.c_nu > 0.0)) throw std::invalid_argument("model: c_nu must be > 0");
    validate(model.noise);
}

CombinedKernel combine(const DelayModel& model) {
    CombinedKernel f;
    f.kappa2 = derive_moments(model.noise).kappa2;
    f.c0 = model.c_mu - f.kappa2 * model.c_nu;
    f.r = model.r();
    f.mu = model.f_mu;
    f.nu = model.f_nu;
    f.l1 = 0.0;
    if (f.mu) f.l1 += f.mu->norms().l1;
    if (f.nu) f.l1 += f.kappa2 * f.nu->norms().l1;
    return f;
}

} // namespace cdgarch
