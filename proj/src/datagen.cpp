#include "fdc/datagen.hpp"

#include <cmath>

#include "fdc/errors.hpp"
#include "fdc/rng.hpp"

namespace fdc {

namespace {

Vector power_law(int J, double exponent) {
    Vector v(J);
    for (int j = 1; j <= J; ++j) v(j - 1) = std::pow(static_cast<double>(j), -exponent);
    return v;
}

double draw_noise(Rng& rng, NoiseLaw law) {
    return law == NoiseLaw::StdNormal ? rng.next_normal() : rng.next_uniform_half();
}

}  // namespace

void validate(const SpectralSpec& spec) {
    if (spec.J < 1) throw InvalidParameter("truncation J must be >= 1");
    if (spec.theta.size() != spec.J || spec.mu_plus.size() != spec.J ||
        spec.mu_minus.size() != spec.J)
        throw InvalidParameter("theta and mean vectors must have length J");
    if ((spec.theta.array() <= 0.0).any())
        throw InvalidParameter("eigenvalues must be positive");
    if (spec.basis_plus.truncation != spec.J || spec.basis_minus.truncation != spec.J)
        throw InvalidParameter("basis truncation must match J");
}

SpectralSpec scenario1(double gamma) {
    if (gamma <= 0.0) throw InvalidParameter("scenario1 requires gamma > 0");
    SpectralSpec spec;
    spec.J = kDefaultTruncation;
    spec.theta = power_law(spec.J, 2.0);
    spec.mu_plus = power_law(spec.J, gamma);
    spec.mu_minus = Vector::Zero(spec.J);
    spec.noise = NoiseLaw::StdNormal;
    spec.basis_plus = {BasisFamily::SineOne, spec.J};
    spec.basis_minus = {BasisFamily::SineOne, spec.J};
    return spec;
}

SpectralSpec scenario2(double mu) {
    if (mu < 0.0) throw InvalidParameter("scenario2 requires mu >= 0");
    SpectralSpec spec;
    spec.J = kDefaultTruncation;
    spec.theta = power_law(spec.J, 2.0);
    spec.mu_plus = Vector::Zero(spec.J);
    spec.mu_plus(0) = mu;
    spec.mu_minus = Vector::Zero(spec.J);
    spec.noise = NoiseLaw::UniformHalf;
    spec.basis_plus = {BasisFamily::SineOne, spec.J};
    spec.basis_minus = {BasisFamily::SineOne, spec.J};
    return spec;
}

SpectralSpec cross_basis(SpectralSpec spec) {
    spec.basis_minus = {BasisFamily::CosineOne, spec.J};
    return spec;
}

FuncObs class_mean(const SpectralSpec& spec, int label) {
    validate(spec);
    if (label == 1) return make_obs(spec.basis_plus, spec.mu_plus, 1);
    if (label == -1) return make_obs(spec.basis_minus, spec.mu_minus, -1);
    throw InvalidParameter("label must be -1 or +1");
}

Dataset sample_balanced(const SpectralSpec& spec, int n_per_class, std::uint64_t seed) {
    validate(spec);
    if (n_per_class < 1) throw InvalidParameter("n_per_class must be >= 1");

    const Vector root_theta = spec.theta.array().sqrt();
    Dataset out;
    out.seed = seed;
    out.items.reserve(2 * static_cast<std::size_t>(n_per_class));

    // Separate substreams per class so draws of one class never shift the other.
    for (int label : {+1, -1}) {
        Rng rng(Rng::derive(seed, label == 1 ? 1u : 2u));
        const Vector& mu = label == 1 ? spec.mu_plus : spec.mu_minus;
        const BasisId& basis = label == 1 ? spec.basis_plus : spec.basis_minus;
        for (int i = 0; i < n_per_class; ++i) {
            Vector coeffs(spec.J);
            for (int j = 0; j < spec.J; ++j)
                coeffs(j) = root_theta(j) * draw_noise(rng, spec.noise) + mu(j);
            out.items.push_back(make_obs(basis, std::move(coeffs), label));
        }
    }
    out.n_plus = n_per_class;
    out.n_minus = n_per_class;
    return out;
}

}  // namespace fdc
