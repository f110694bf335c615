#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fdc/basis.hpp"
#include "fdc/datagen.hpp"

namespace fdc {

// Positive sequence rules indexed from j = 1.
using SequenceRule = std::function<double(long long j)>;

enum class SeriesClass { Divergent, Convergent, Inconclusive };

// Divergence analysis of S_M = sum_{j<=M} theta_j^-1 mu_j^2.
struct SeriesVerdict {
    std::vector<long long> checkpoints;  // M in {10, 100, ..., M_max}
    std::vector<double> partial_sums;    // S_M at each checkpoint
    double tail_exponent = 0.0;          // slope of log(term_j) vs log j, last decade
    SeriesClass verdict = SeriesClass::Inconclusive;
};

inline constexpr double kTailExponentTol = 0.05;

SeriesVerdict dh_series(const SequenceRule& theta, const SequenceRule& mu_diff,
                        long long m_max);

struct RatioResult {
    double value = 0.0;
    bool degenerate = false;  // 0/0 or x/0; value is a sentinel (0 or +inf)
};

// Finite-truncation diagnostic of the eigenvalue-weighted mean-difference
// ratio. `eigen_overlap(i, j)` holds the inner product of basis function i
// of the mean expansion with eigenfunction j of the class-`ell` covariance.
// With identity overlap the ratio reduces to S_M.
RatioResult dh_ratio(const SpectralSpec& spec, const Matrix& eigen_overlap, int M,
                     int ell);

// Power-law rule: theta_j ~ j^-alpha, mu_j ~ j^-beta is divergent iff
// 2 beta - alpha <= 1 (non-strict).
bool dh_power_law(double alpha, double beta);

// psi_M = sum_{j<=M} theta_j^-1 (mu_+j - mu_-j) phi_j, zero beyond M.
FuncObs psi_M(const SpectralSpec& spec, int M);

// f*_M(x) = <x - mu_+, psi_M>^2 - <x - mu_-, psi_M>^2.
// Positive values mean x is closer to mu_-; classification uses sign(-f*).
double f_star(const FuncObs& x, const SpectralSpec& spec, int M);

struct MarginReport {
    int M = 0;
    double empirical_margin = 0.0;           // min |f*_M| over the probe sample
    std::optional<double> analytic_margin;   // closed form when available
};

MarginReport empirical_margin(const SpectralSpec& spec, int M, int n_probe,
                              std::uint64_t seed);

// Bayes risk of the balanced uniform location model on the first
// coefficient: max(0, (1 - mu)/2).
double bayes_risk_scenario2(double mu);

}  // namespace fdc
