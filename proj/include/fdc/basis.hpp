#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>

namespace fdc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Basis family on [0,1]. Slot 1 is the constant function; for j >= 2
// SineOne uses sqrt(2) sin(pi (j-1) t) and CosineOne sqrt(2) cos(pi (j-1) t).
enum class BasisFamily { SineOne, CosineOne };

struct BasisId {
    BasisFamily family = BasisFamily::SineOne;
    int truncation = 1;  // J, number of basis functions including the constant

    bool operator==(const BasisId&) const = default;
};

// Basis function value phi_j(t), 1-based j in [1, J].
double basis_value(const BasisId& basis, int j, double t);

// Functional observation: coefficient vector over a named basis.
// Immutable by convention after construction.
struct FuncObs {
    BasisId basis;
    Vector coeffs;                  // length J, the xi_j
    std::optional<int> label;       // -1 or +1 when present
};

FuncObs make_obs(BasisId basis, Vector coeffs, std::optional<int> label = std::nullopt);

// Inner-product mode: exact coefficient sum, or trapezoid quadrature on
// m uniform grid points (needed when the two bases differ).
struct CoefficientMode {};
struct GridMode {
    int m = 1024;
};
using IpMode = std::variant<CoefficientMode, GridMode>;

inline constexpr int kDefaultQuadraturePoints = 1024;

double inner_product(const FuncObs& a, const FuncObs& b, const IpMode& mode = CoefficientMode{});
double l2_distance_sq(const FuncObs& a, const FuncObs& b, const IpMode& mode = CoefficientMode{});

// Curve values at t_k = (k-1)/(m-1), k = 1..m.
Vector evaluate_on_grid(const FuncObs& f, int m);

}  // namespace fdc
