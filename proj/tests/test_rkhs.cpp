#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fdc/datagen.hpp"
#include "fdc/errors.hpp"
#include "fdc/io.hpp"
#include "fdc/rkhs.hpp"
#include "fdc/rng.hpp"

using namespace fdc;

namespace {

const BasisId kBasis{BasisFamily::SineOne, 6};

std::vector<FuncObs> random_inputs(Rng& rng, int n, int label_split = -1) {
    std::vector<FuncObs> out;
    for (int i = 0; i < n; ++i) {
        Vector c(kBasis.truncation);
        for (int j = 0; j < kBasis.truncation; ++j) c(j) = rng.next_normal();
        std::optional<int> label;
        if (label_split >= 0) label = i < label_split ? +1 : -1;
        out.push_back(make_obs(kBasis, std::move(c), label));
    }
    return out;
}

std::vector<int> alternating_labels(int n) {
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) y[i] = i % 2 == 0 ? +1 : -1;
    return y;
}

}  // namespace

TEST_CASE("kernel evaluation") {
    const KernelSpec kernel{2.0, CoefficientMode{}};
    Rng rng(1);
    const auto xs = random_inputs(rng, 2);
    CHECK(kernel_eval(kernel, xs[0], xs[0]) == doctest::Approx(1.0));
    CHECK(kernel_eval(kernel, xs[0], xs[1]) ==
          kernel_eval(kernel, xs[1], xs[0]));

    // distance^2 == h gives exactly exp(-1)
    Vector a = Vector::Zero(6), b = Vector::Zero(6);
    b(0) = std::sqrt(2.0);
    CHECK(kernel_eval(kernel, make_obs(kBasis, a), make_obs(kBasis, b)) ==
          doctest::Approx(std::exp(-1.0)));

    CHECK_THROWS_AS(kernel_eval(KernelSpec{0.0, CoefficientMode{}}, xs[0], xs[1]),
                    InvalidParameter);
}

TEST_CASE("gram matrix structure") {
    Rng rng(2);
    const KernelSpec kernel{1.0, CoefficientMode{}};

    auto one = random_inputs(rng, 1);
    const Matrix g1 = gram(one, kernel);
    CHECK(g1.rows() == 1);
    CHECK(g1(0, 0) == 1.0);

    auto xs = random_inputs(rng, 4);
    xs.push_back(xs[1]);  // duplicate row
    const Matrix G = gram(xs, kernel);
    CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((G.diagonal().array() == 1.0).all());
    CHECK((G.row(1) - G.row(4)).cwiseAbs().maxCoeff() == 0.0);

    // Gaussian kernel Gram is positive semidefinite
    for (int trial = 0; trial < 3; ++trial) {
        const auto pts = random_inputs(rng, 5);
        const Matrix Gt = gram(pts, kernel);
        Eigen::SelfAdjointEigenSolver<Matrix> es(Gt);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("objective values") {
    Rng rng(3);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const auto xs = random_inputs(rng, 3);
    const Matrix G = gram(xs, kernel);
    Vector y(3);
    y << 1, -1, 1;

    SUBCASE("zero weights give log 2") {
        CHECK(objective(Vector::Zero(3), G, y, 0.1, PenaltyMode::SumSquares) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("from-scratch scalar recomputation") {
        Vector w(3);
        w << 0.3, -0.7, 0.2;
        for (const auto mode :
             {PenaltyMode::SumSquares, PenaltyMode::RkhsQuadratic}) {
            double loss = 0.0;
            for (int i = 0; i < 3; ++i) {
                double margin = 0.0;
                for (int j = 0; j < 3; ++j) margin += G(i, j) * w(j);
                loss += std::log(1.0 + std::exp(-y(i) * margin));
            }
            loss /= 3.0;
            double penalty = 0.0;
            if (mode == PenaltyMode::SumSquares) {
                for (int j = 0; j < 3; ++j) penalty += 0.1 * w(j) * w(j);
            } else {
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) penalty += 0.1 * w(i) * G(i, j) * w(j);
            }
            CHECK(objective(w, G, y, 0.1, mode) ==
                  doctest::Approx(loss + penalty).epsilon(1e-12));
        }
    }
    SUBCASE("penalty lower bound in sum-squares mode") {
        Vector w(3);
        w << 1.0, 2.0, -1.0;
        const double lambda = 50.0;
        CHECK(objective(w, G, y, lambda, PenaltyMode::SumSquares) >=
              lambda * w.squaredNorm());
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(objective(Vector::Zero(2), G, y, 0.1, PenaltyMode::SumSquares),
                        InvalidParameter);
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(4);
    const KernelSpec kernel{1.5, CoefficientMode{}};
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 6;
        const auto xs = random_inputs(rng, n);
        const Matrix G = gram(xs, kernel);
        Vector y(n);
        for (int i = 0; i < n; ++i) y(i) = rng.next_unit() < 0.5 ? -1 : 1;
        Vector w(n);
        for (int i = 0; i < n; ++i) w(i) = rng.next_normal();

        for (const auto mode :
             {PenaltyMode::SumSquares, PenaltyMode::RkhsQuadratic}) {
            const Vector grad = objective_gradient(w, G, y, 0.05, mode);
            for (int j = 0; j < n; ++j) {
                const double step = 1e-5 * (1.0 + std::abs(w(j)));
                Vector wp = w, wm = w;
                wp(j) += step;
                wm(j) -= step;
                const double fd = (objective(wp, G, y, 0.05, mode) -
                                   objective(wm, G, y, 0.05, mode)) /
                                  (2 * step);
                CHECK(std::abs(grad(j) - fd) <=
                      1e-5 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("fit descends and converges") {
    Rng rng(5);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const auto xs = random_inputs(rng, 12);
    const auto y = alternating_labels(12);

    for (const auto mode : {PenaltyMode::SumSquares, PenaltyMode::RkhsQuadratic}) {
        const RkhsModel model = fit(xs, y, kernel, 0.1, mode);
        CHECK(model.fit_report.converged);
        CHECK(model.fit_report.final_grad_sup_norm <= 1e-6);
        CHECK(model.fit_report.final_objective <= std::log(2.0));
        const auto& trace = model.fit_report.objective_trace;
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
    }
}

TEST_CASE("fit input validation and non-convergence flag") {
    Rng rng(6);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const auto xs = random_inputs(rng, 8);
    CHECK_THROWS_AS(fit({xs[0]}, {1}, kernel, 0.1), InvalidParameter);
    CHECK_THROWS_AS(fit(xs, {1, 2, 1, 1, -1, -1, 1, -1}, kernel, 0.1), InvalidParameter);
    CHECK_THROWS_AS(fit(xs, alternating_labels(8), kernel, 0.0), InvalidParameter);

    const RkhsModel capped =
        fit(xs, alternating_labels(8), kernel, 0.001, PenaltyMode::SumSquares,
            FitOptions{2, 1e-12});
    CHECK_FALSE(capped.fit_report.converged);
    CHECK(capped.fit_report.iterations == 2);
}

TEST_CASE("lambda monotonicity of the weight norm") {
    Rng rng(7);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const auto xs = random_inputs(rng, 20);
    const auto y = alternating_labels(20);
    double prev_norm = 1e300;
    for (int e = -5; e <= 4; ++e) {
        const RkhsModel model =
            fit(xs, y, kernel, std::pow(2.0, e), PenaltyMode::SumSquares);
        const double norm = model.weights.norm();
        CHECK(norm <= prev_norm + 1e-9);
        prev_norm = norm;
    }
}

TEST_CASE("decision values, prediction and bounds") {
    Rng rng(8);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const auto xs = random_inputs(rng, 10);
    RkhsModel model = fit(xs, alternating_labels(10), kernel, 0.1);

    SUBCASE("zero weights predict +1 by the tie convention") {
        RkhsModel zero = model;
        zero.weights.setZero();
        const auto probe = random_inputs(rng, 3);
        for (const auto& x : probe) {
            CHECK(decision_value(zero, x) == 0.0);
            CHECK(predict(zero, x) == +1);
        }
    }
    SUBCASE("single active weight reproduces the kernel formula") {
        RkhsModel single = model;
        single.weights.setZero();
        single.weights(4) = -2.5;
        const auto probe = random_inputs(rng, 2);
        for (const auto& x : probe)
            CHECK(decision_value(single, x) ==
                  doctest::Approx(-2.5 * kernel_eval(kernel, x, xs[4])));
    }
    SUBCASE("decision bound |f(x)| <= sum |w_j|") {
        const auto probe = random_inputs(rng, 20);
        const double bound = model.weights.cwiseAbs().sum();
        for (const auto& x : probe)
            CHECK(std::abs(decision_value(x.coeffs.size() ? model : model, x)) <=
                  bound + 1e-12);
    }
    SUBCASE("naive loop equals the vectorized batch path") {
        const auto probe = random_inputs(rng, 50);
        const Vector batch = decision_values(model, probe);
        for (int i = 0; i < 50; ++i)
            CHECK(std::abs(batch(i) - decision_value(model, probe[i])) < 1e-12);
    }
}

TEST_CASE("label-flip symmetry on mirrored data") {
    // inputs symmetric under negation with flipped labels
    Rng rng(9);
    std::vector<FuncObs> xs;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        Vector c(kBasis.truncation);
        for (int j = 0; j < kBasis.truncation; ++j) c(j) = rng.next_normal();
        xs.push_back(make_obs(kBasis, c));
        y.push_back(+1);
        xs.push_back(make_obs(kBasis, Vector(-c)));
        y.push_back(-1);
    }
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const RkhsModel model = fit(xs, y, kernel, 0.1);

    std::vector<int> y_flipped;
    for (int label : y) y_flipped.push_back(-label);
    const RkhsModel flipped = fit(xs, y_flipped, kernel, 0.1);

    int err = 0, err_flipped = 0;
    const auto probe = random_inputs(rng, 40);
    for (const auto& x : probe) {
        CHECK(decision_value(model, x) ==
              doctest::Approx(-decision_value(flipped, x)).epsilon(1e-6));
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (predict(model, xs[i]) != y[i]) ++err;
        if (predict(flipped, xs[i]) != y_flipped[i]) ++err_flipped;
    }
    // ties break the same way, so the training errors can differ only there
    CHECK(std::abs(err - err_flipped) <= 1);
}

TEST_CASE("separable scenario2 data is fit to zero training error") {
    const SpectralSpec spec = scenario2(1.2);
    const Dataset data = sample_balanced(spec, 50, 77);
    std::vector<int> y;
    for (const auto& obs : data.items) y.push_back(*obs.label);
    const KernelSpec kernel{1.0, CoefficientMode{}};
    const RkhsModel model = fit(data.items, y, kernel, std::pow(2.0, -5));
    int wrong = 0;
    for (std::size_t i = 0; i < data.items.size(); ++i)
        if (predict(model, data.items[i]) != y[i]) ++wrong;
    CHECK(wrong == 0);
}

TEST_CASE("model JSON round trip") {
    Rng rng(10);
    const auto xs = random_inputs(rng, 6);
    const RkhsModel model =
        fit(xs, alternating_labels(6), KernelSpec{2.0, CoefficientMode{}}, 0.25);
    const RkhsModel back = model_from_json(model_to_json(model));
    CHECK(back.lambda == model.lambda);
    CHECK(back.kernel.bandwidth == model.kernel.bandwidth);
    CHECK((back.weights - model.weights).cwiseAbs().maxCoeff() == 0.0);
    const auto probe = random_inputs(rng, 5);
    for (const auto& x : probe)
        CHECK(decision_value(back, x) == decision_value(model, x));
}
