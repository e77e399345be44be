#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace cdgarch {

// Driving Levy process L = sigma_L * B + compound Poisson with intensity
// lambda_l and N(mu_j, sigma_j^2) jump sizes. S = [L,L] is the subordinator
// actually multiplying the variance.
struct NoiseSpec {
    double sigma_l = 0.0;
    double lambda_l = 0.0;
    double mu_j = 0.0;
    double sigma_j = 0.0;
    std::uint64_t seed = 0;
};

void validate(const NoiseSpec& spec);

struct NoiseMoments {
    double kappa2 = 0.0; // E[S_1] per unit time
    double kappa4 = 0.0; // Var rate of the compensated S
};

// kappa2 = sigma_L^2 + lambda (mu_J^2 + sigma_J^2)
// kappa4 = lambda E[Z^4] with Z Gaussian; the Brownian part contributes 0.
NoiseMoments derive_moments(const NoiseSpec& spec);

// Grid increments of (L, S) at step delta. Index i covers the interval
// ((i - n_history) delta, (i - n_history + 1) delta]; the first n_history
// entries are the pre-zero segment feeding the Euler scheme's lag windows.
struct IncrementSeries {
    double delta = 0.0;
    std::size_t n_history = 0;
    std::vector<double> dl;
    std::vector<double> ds;

    std::size_t n_future() const { return dl.size() - n_history; }
};

IncrementSeries sample_increments(const NoiseSpec& spec, double delta,
                                  std::size_t n_history, std::size_t n_future,
                                  std::uint64_t stream = 0);

// Exact jump times/sizes of a compound Poisson L over (t_start, t_end].
struct JumpLog {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> times;
    std::vector<double> sizes;

    std::size_t size() const { return times.size(); }
};

JumpLog sample_jump_events(const NoiseSpec& spec, double t_start, double t_end,
                           std::uint64_t seed, std::uint64_t stream = 0);

// Keeps exactly the jumps with |size| >= 1/n (the S^n approximation).
JumpLog truncate_jumps(const JumpLog& log, int n);

// Smallest gap between consecutive events; +inf with fewer than two.
double min_inter_event_gap(const JumpLog& log);

// Bins an exact jump log into grid increments, so the Euler scheme and the
// event-driven simulator can share one noise realization. Requires a
// pure-jump log (sigma_l folded away upstream).
IncrementSeries bin_jump_log(const JumpLog& log, double delta,
                             std::size_t n_history, std::size_t n_future);

void write_csv(const IncrementSeries& inc, std::ostream& out);
void write_csv(const JumpLog& log, std::ostream& out);

} // namespace cdgarch
