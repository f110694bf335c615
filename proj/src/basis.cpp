#include "fdc/basis.hpp"

#include <cmath>

#include "fdc/errors.hpp"

namespace fdc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_quadrature(int m) {
    if (m < 2) throw InvalidQuadrature("quadrature grid needs at least 2 points");
}

// Trapezoid rule for sum_k w_k a(t_k) b(t_k) on the uniform grid.
double trapezoid_product(const Vector& a, const Vector& b) {
    const int m = static_cast<int>(a.size());
    const double h = 1.0 / (m - 1);
    double s = 0.5 * (a(0) * b(0) + a(m - 1) * b(m - 1));
    for (int k = 1; k < m - 1; ++k) s += a(k) * b(k);
    return s * h;
}

}  // namespace

double basis_value(const BasisId& basis, int j, double t) {
    if (j < 1 || j > basis.truncation)
        throw InvalidParameter("basis index out of range");
    if (j == 1) return 1.0;
    const double arg = kPi * (j - 1) * t;
    const double root2 = std::sqrt(2.0);
    return basis.family == BasisFamily::SineOne ? root2 * std::sin(arg)
                                                : root2 * std::cos(arg);
}

FuncObs make_obs(BasisId basis, Vector coeffs, std::optional<int> label) {
    if (basis.truncation < 1) throw InvalidParameter("truncation must be >= 1");
    if (coeffs.size() != basis.truncation)
        throw InvalidParameter("coefficient length must equal basis truncation");
    if (!coeffs.allFinite()) throw InvalidParameter("non-finite coefficient");
    if (label && *label != -1 && *label != 1)
        throw InvalidParameter("label must be -1 or +1");
    return FuncObs{basis, std::move(coeffs), label};
}

Vector evaluate_on_grid(const FuncObs& f, int m) {
    check_quadrature(m);
    Vector out = Vector::Zero(m);
    const int J = f.basis.truncation;
    for (int k = 0; k < m; ++k) {
        const double t = static_cast<double>(k) / (m - 1);
        double v = 0.0;
        for (int j = 1; j <= J; ++j) v += f.coeffs(j - 1) * basis_value(f.basis, j, t);
        out(k) = v;
    }
    return out;
}

double inner_product(const FuncObs& a, const FuncObs& b, const IpMode& mode) {
    if (std::holds_alternative<CoefficientMode>(mode)) {
        if (a.basis != b.basis)
            throw BasisMismatch("coefficient mode requires identical bases");
        return a.coeffs.dot(b.coeffs);
    }
    const int m = std::get<GridMode>(mode).m;
    check_quadrature(m);
    return trapezoid_product(evaluate_on_grid(a, m), evaluate_on_grid(b, m));
}

double l2_distance_sq(const FuncObs& a, const FuncObs& b, const IpMode& mode) {
    if (std::holds_alternative<CoefficientMode>(mode)) {
        if (a.basis != b.basis)
            throw BasisMismatch("coefficient mode requires identical bases");
        return (a.coeffs - b.coeffs).squaredNorm();
    }
    const int m = std::get<GridMode>(mode).m;
    check_quadrature(m);
    const Vector diff = evaluate_on_grid(a, m) - evaluate_on_grid(b, m);
    return trapezoid_product(diff, diff);
}

}  // namespace fdc
