#pragma once

#include <vector>

#include "fdc/basis.hpp"

namespace fdc {

// Gaussian kernel k(x,x') = exp(-||x - x'||^2 / h) on functional inputs.
struct KernelSpec {
    double bandwidth = 1.0;  // h > 0
    IpMode ip_mode = CoefficientMode{};
};

enum class PenaltyMode {
    SumSquares,  // lambda * sum_j w_j^2
    RkhsQuadratic,    // lambda * w' G w, the RKHS norm of the expansion
};

struct FitReport {
    int iterations = 0;
    double final_objective = 0.0;
    double final_grad_sup_norm = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // value after each accepted step
};

struct RkhsModel {
    std::vector<FuncObs> train_inputs;
    Vector weights;
    KernelSpec kernel;
    double lambda = 0.0;
    PenaltyMode penalty_mode = PenaltyMode::SumSquares;
    FitReport fit_report;
};

struct FitOptions {
    int max_iter = 10000;
    double grad_tol = 1e-6;  // sup-norm stopping rule
};

double kernel_eval(const KernelSpec& kernel, const FuncObs& a, const FuncObs& b);

Matrix gram(const std::vector<FuncObs>& inputs, const KernelSpec& kernel);

// Stable softplus(-t) = log(1 + exp(-t)), the logit loss.
double logit_loss(double t);

double objective(const Vector& w, const Matrix& G, const Vector& y, double lambda,
                 PenaltyMode penalty_mode);

Vector objective_gradient(const Vector& w, const Matrix& G, const Vector& y,
                          double lambda, PenaltyMode penalty_mode);

// Gradient descent with Armijo backtracking (c = 1e-4, shrink 0.5,
// initial step 1), started at w = 0.
RkhsModel fit(const std::vector<FuncObs>& inputs, const std::vector<int>& labels,
              const KernelSpec& kernel, double lambda,
              PenaltyMode penalty_mode = PenaltyMode::SumSquares,
              const FitOptions& options = {});

double decision_value(const RkhsModel& model, const FuncObs& x);

// Batch decision values; Coefficient mode uses one matrix product for
// all pairwise distances instead of the per-point kernel loop.
Vector decision_values(const RkhsModel& model, const std::vector<FuncObs>& xs);

// +1 if decision_value >= 0 else -1 (ties resolve to +1).
int predict(const RkhsModel& model, const FuncObs& x);

}  // namespace fdc
