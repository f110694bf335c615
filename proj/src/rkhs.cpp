#include "fdc/rkhs.hpp"

#include <cmath>

#include "fdc/errors.hpp"

namespace fdc {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kShrink = 0.5;
constexpr double kMinStep = 1e-20;

double loss_term(const Vector& u, const Vector& y) {
    const int n = static_cast<int>(u.size());
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += logit_loss(y(i) * u(i));
    return s / n;
}

double penalty_term(const Vector& w, const Vector& u, double lambda,
                    PenaltyMode mode) {
    return mode == PenaltyMode::SumSquares ? lambda * w.squaredNorm()
                                                : lambda * w.dot(u);
}

void check_dims(const Vector& w, const Matrix& G, const Vector& y, double lambda) {
    if (G.rows() != G.cols() || w.size() != G.rows() || y.size() != G.rows())
        throw InvalidParameter("objective dimension mismatch");
    if (lambda <= 0.0) throw InvalidParameter("lambda must be positive");
}

}  // namespace

double kernel_eval(const KernelSpec& kernel, const FuncObs& a, const FuncObs& b) {
    if (kernel.bandwidth <= 0.0) throw InvalidParameter("bandwidth must be positive");
    return std::exp(-l2_distance_sq(a, b, kernel.ip_mode) / kernel.bandwidth);
}

Matrix gram(const std::vector<FuncObs>& inputs, const KernelSpec& kernel) {
    const int n = static_cast<int>(inputs.size());
    if (n < 1) throw InvalidParameter("gram requires at least one input");
    Matrix G(n, n);
    for (int i = 0; i < n; ++i) {
        G(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = kernel_eval(kernel, inputs[i], inputs[j]);
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

double logit_loss(double t) {
    if (t > 0.0) return std::log1p(std::exp(-t));
    return -t + std::log1p(std::exp(t));
}

double objective(const Vector& w, const Matrix& G, const Vector& y, double lambda,
                 PenaltyMode penalty_mode) {
    check_dims(w, G, y, lambda);
    const Vector u = G * w;
    return loss_term(u, y) + penalty_term(w, u, lambda, penalty_mode);
}

Vector objective_gradient(const Vector& w, const Matrix& G, const Vector& y,
                          double lambda, PenaltyMode penalty_mode) {
    check_dims(w, G, y, lambda);
    const int n = static_cast<int>(w.size());
    const Vector u = G * w;
    Vector a(n);
    for (int i = 0; i < n; ++i) {
        // d/du logit_loss(y u) = -y sigma(-y u)
        const double t = y(i) * u(i);
        a(i) = -y(i) / (1.0 + std::exp(t));
    }
    Vector grad = (G * a) / n;
    if (penalty_mode == PenaltyMode::SumSquares)
        grad += 2.0 * lambda * w;
    else
        grad += 2.0 * lambda * u;
    return grad;
}

RkhsModel fit(const std::vector<FuncObs>& inputs, const std::vector<int>& labels,
              const KernelSpec& kernel, double lambda, PenaltyMode penalty_mode,
              const FitOptions& options) {
    const int n = static_cast<int>(inputs.size());
    if (n < 2) throw InvalidParameter("fit requires at least 2 inputs");
    if (static_cast<int>(labels.size()) != n)
        throw InvalidParameter("labels length must match inputs");
    if (lambda <= 0.0) throw InvalidParameter("lambda must be positive");
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        if (labels[i] != -1 && labels[i] != 1)
            throw InvalidParameter("labels must be -1 or +1");
        y(i) = labels[i];
    }

    const Matrix G = gram(inputs, kernel);

    Vector w = Vector::Zero(n);
    Vector u = Vector::Zero(n);  // u = G w, maintained incrementally
    double obj = loss_term(u, y);  // penalty is zero at w = 0

    FitReport report;
    report.objective_trace.push_back(obj);
    int iter = 0;
    double grad_sup = 0.0;
    for (; iter < options.max_iter; ++iter) {
        Vector a(n);
        for (int i = 0; i < n; ++i) {
            const double t = y(i) * u(i);
            a(i) = -y(i) / (1.0 + std::exp(t));
        }
        Vector grad = (G * a) / n;
        if (penalty_mode == PenaltyMode::SumSquares)
            grad += 2.0 * lambda * w;
        else
            grad += 2.0 * lambda * u;

        grad_sup = grad.lpNorm<Eigen::Infinity>();
        if (grad_sup <= options.grad_tol) {
            report.converged = true;
            break;
        }

        const Vector Gg = G * grad;
        const double g2 = grad.squaredNorm();

        double step = 1.0;
        bool accepted = false;
        while (step >= kMinStep) {
            const Vector w_new = w - step * grad;
            const Vector u_new = u - step * Gg;
            const double obj_new =
                loss_term(u_new, y) + penalty_term(w_new, u_new, lambda, penalty_mode);
            if (obj_new <= obj - kArmijoC * step * g2) {
                w = w_new;
                u = u_new;
                obj = obj_new;
                report.objective_trace.push_back(obj);
                accepted = true;
                break;
            }
            step *= kShrink;
        }
        if (!accepted) break;  // at numerical precision; no step improves
    }

    report.iterations = iter;
    report.final_objective = obj;
    report.final_grad_sup_norm = grad_sup;

    RkhsModel model;
    model.train_inputs = inputs;
    model.weights = std::move(w);
    model.kernel = kernel;
    model.lambda = lambda;
    model.penalty_mode = penalty_mode;
    model.fit_report = report;
    return model;
}

double decision_value(const RkhsModel& model, const FuncObs& x) {
    double s = 0.0;
    const int n = static_cast<int>(model.train_inputs.size());
    for (int j = 0; j < n; ++j)
        s += model.weights(j) * kernel_eval(model.kernel, x, model.train_inputs[j]);
    return s;
}

Vector decision_values(const RkhsModel& model, const std::vector<FuncObs>& xs) {
    const int m = static_cast<int>(xs.size());
    const int n = static_cast<int>(model.train_inputs.size());
    if (!std::holds_alternative<CoefficientMode>(model.kernel.ip_mode)) {
        Vector out(m);
        for (int i = 0; i < m; ++i) out(i) = decision_value(model, xs[i]);
        return out;
    }
    const int J = model.train_inputs.front().basis.truncation;
    Matrix X(m, J), T(n, J);
    for (int i = 0; i < m; ++i) {
        if (!(xs[i].basis == model.train_inputs.front().basis))
            throw BasisMismatch("coefficient mode requires identical bases");
        X.row(i) = xs[i].coeffs;
    }
    for (int j = 0; j < n; ++j) T.row(j) = model.train_inputs[j].coeffs;

    // ||x - t||^2 = ||x||^2 + ||t||^2 - 2 x.t
    const Vector xn = X.rowwise().squaredNorm();
    const Vector tn = T.rowwise().squaredNorm();
    Matrix D = (-2.0 * X * T.transpose());
    D.colwise() += xn;
    D.rowwise() += tn.transpose();
    const Matrix K = (-D / model.kernel.bandwidth).array().exp();
    return K * model.weights;
}

int predict(const RkhsModel& model, const FuncObs& x) {
    return decision_value(model, x) >= 0.0 ? +1 : -1;
}

}  // namespace fdc
