#pragma once

#include <cstdint>
#include <vector>

#include "fdc/basis.hpp"

namespace fdc {

enum class NoiseLaw { StdNormal, UniformHalf };

// Class-conditional Karhunen-Loeve style law: coefficient j of a class-l
// draw is theta_j^{1/2} Z + mu_{l,j} with Z i.i.d. from `noise`.
struct SpectralSpec {
    int J = 51;
    Vector theta;      // eigenvalues, theta_j > 0
    Vector mu_plus;
    Vector mu_minus;
    NoiseLaw noise = NoiseLaw::StdNormal;
    BasisId basis_plus{BasisFamily::SineOne, 51};
    BasisId basis_minus{BasisFamily::SineOne, 51};
};

struct Dataset {
    std::vector<FuncObs> items;
    std::uint64_t seed = 0;
    int n_plus = 0;
    int n_minus = 0;
};

inline constexpr int kDefaultTruncation = 51;

// theta_j = j^-2, mu_- = 0, mu_+j = j^-gamma (1-based), standard normal noise.
SpectralSpec scenario1(double gamma);

// theta_j = j^-2, mu_- = 0, mu_+ = (mu, 0, ..., 0), uniform [-1/2,1/2] noise.
SpectralSpec scenario2(double mu);

// Same law with the minus class expanded on the cosine family instead.
SpectralSpec cross_basis(SpectralSpec spec);

void validate(const SpectralSpec& spec);

// Exactly n_per_class draws per label, deterministic in (spec, n, seed).
// Items are ordered: all +1 draws first, then all -1 draws.
Dataset sample_balanced(const SpectralSpec& spec, int n_per_class, std::uint64_t seed);

// Class mean as a FuncObs on the class basis.
FuncObs class_mean(const SpectralSpec& spec, int label);

}  // namespace fdc
