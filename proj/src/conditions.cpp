#include "fdc/conditions.hpp"

#include <cmath>
#include <limits>

#include "fdc/errors.hpp"

namespace fdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_scenario2_shape(const SpectralSpec& spec) {
    if (spec.noise != NoiseLaw::UniformHalf) return false;
    if (!(spec.basis_plus == spec.basis_minus)) return false;
    if (spec.mu_minus.cwiseAbs().maxCoeff() != 0.0) return false;
    if (spec.J >= 2 && spec.mu_plus.tail(spec.J - 1).cwiseAbs().maxCoeff() != 0.0)
        return false;
    return spec.theta(0) == 1.0;
}

}  // namespace

SeriesVerdict dh_series(const SequenceRule& theta, const SequenceRule& mu_diff,
                        long long m_max) {
    if (m_max < 100) throw InvalidParameter("dh_series requires M_max >= 100");

    SeriesVerdict out;
    const long long tail_start = m_max / 10 + 1;
    double sum = 0.0;
    long long next_checkpoint = 10;

    // Tail-exponent regression accumulators: log(term_j) on log(j).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long long n_tail = 0;

    for (long long j = 1; j <= m_max; ++j) {
        const double th = theta(j);
        if (th <= 0.0) throw InvalidParameter("theta must be positive");
        const double mu = mu_diff(j);
        const double term = mu * mu / th;
        sum += term;
        if (j >= tail_start && term > 0.0) {
            const double lx = std::log(static_cast<double>(j));
            const double ly = std::log(term);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n_tail;
        }
        if (j == next_checkpoint) {
            out.checkpoints.push_back(j);
            out.partial_sums.push_back(sum);
            next_checkpoint *= 10;
        }
    }
    if (out.checkpoints.empty() || out.checkpoints.back() != m_max) {
        out.checkpoints.push_back(m_max);
        out.partial_sums.push_back(sum);
    }

    if (n_tail < 2) {
        // all tail terms vanish: the series is a finite sum
        out.tail_exponent = -kInf;
        out.verdict = SeriesClass::Convergent;
        return out;
    }
    const double denom = n_tail * sxx - sx * sx;
    out.tail_exponent = (n_tail * sxy - sx * sy) / denom;

    if (out.tail_exponent >= -1.0 + kTailExponentTol)
        out.verdict = SeriesClass::Divergent;
    else if (out.tail_exponent <= -1.0 - kTailExponentTol)
        out.verdict = SeriesClass::Convergent;
    else
        out.verdict = SeriesClass::Inconclusive;
    return out;
}

RatioResult dh_ratio(const SpectralSpec& spec, const Matrix& eigen_overlap, int M,
                     int ell) {
    validate(spec);
    if (ell != -1 && ell != 1) throw InvalidParameter("ell must be -1 or +1");
    if (M < 1 || M > spec.J) throw InvalidParameter("M out of range");
    if (eigen_overlap.rows() < M || eigen_overlap.cols() != spec.J)
        throw InvalidParameter("overlap matrix dimensions inconsistent with J and M");

    const Vector mu = spec.mu_plus - spec.mu_minus;

    double num = 0.0;
    for (int j = 0; j < M; ++j) num += mu(j) * mu(j) / spec.theta(j);
    num *= num;

    double den = 0.0;
    for (int j = 0; j < spec.J; ++j) {
        double inner = 0.0;
        for (int i = 0; i < M; ++i) inner += mu(i) / spec.theta(i) * eigen_overlap(i, j);
        den += spec.theta(j) * inner * inner;
    }

    if (den == 0.0) {
        return {num == 0.0 ? 0.0 : kInf, true};
    }
    return {num / den, false};
}

bool dh_power_law(double alpha, double beta) {
    if (alpha <= 0.0 || beta <= 0.0)
        throw InvalidParameter("power-law exponents must be positive");
    return 2.0 * beta - alpha <= 1.0;
}

FuncObs psi_M(const SpectralSpec& spec, int M) {
    validate(spec);
    if (M < 1 || M > spec.J) throw InvalidParameter("M out of range");
    Vector coeffs = Vector::Zero(spec.J);
    for (int j = 0; j < M; ++j)
        coeffs(j) = (spec.mu_plus(j) - spec.mu_minus(j)) / spec.theta(j);
    return make_obs(spec.basis_plus, std::move(coeffs));
}

double f_star(const FuncObs& x, const SpectralSpec& spec, int M) {
    if (!(x.basis == spec.basis_plus))
        throw BasisMismatch("f_star requires x on the plus-class basis");
    const FuncObs psi = psi_M(spec, M);
    const double dplus = (x.coeffs - spec.mu_plus).dot(psi.coeffs);
    const double dminus = (x.coeffs - spec.mu_minus).dot(psi.coeffs);
    return dplus * dplus - dminus * dminus;
}

MarginReport empirical_margin(const SpectralSpec& spec, int M, int n_probe,
                              std::uint64_t seed) {
    if (n_probe < 1) throw InvalidParameter("n_probe must be >= 1");
    const int n_plus = n_probe - n_probe / 2;
    const int n_minus = n_probe / 2;
    const Dataset data = sample_balanced(spec, n_plus, seed);

    MarginReport report;
    report.M = M;
    double m = kInf;
    for (int i = 0; i < n_plus; ++i)
        m = std::min(m, std::abs(f_star(data.items[i], spec, M)));
    for (int i = 0; i < n_minus; ++i)
        m = std::min(m, std::abs(f_star(data.items[n_plus + i], spec, M)));
    report.empirical_margin = m;

    if (is_scenario2_shape(spec) && spec.mu_plus(0) > 1.0) {
        const double mu = spec.mu_plus(0);
        report.analytic_margin = mu * mu * mu * (mu - 1.0);
    }
    return report;
}

double bayes_risk_scenario2(double mu) {
    if (mu < 0.0) throw InvalidParameter("mu must be >= 0");
    return std::max(0.0, (1.0 - mu) / 2.0);
}

}  // namespace fdc
