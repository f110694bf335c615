#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdc/baselines.hpp"
#include "fdc/datagen.hpp"
#include "fdc/errors.hpp"
#include "fdc/rng.hpp"

using namespace fdc;

namespace {

Dataset make_dataset(const std::vector<Vector>& plus, const std::vector<Vector>& minus,
                     BasisFamily family = BasisFamily::SineOne) {
    Dataset d;
    const int J = static_cast<int>(plus.front().size());
    const BasisId basis{family, J};
    for (const auto& c : plus) d.items.push_back(make_obs(basis, c, +1));
    for (const auto& c : minus) d.items.push_back(make_obs(basis, c, -1));
    d.n_plus = static_cast<int>(plus.size());
    d.n_minus = static_cast<int>(minus.size());
    return d;
}

// two Gaussian blobs in R^J with the given means, unit component variance
Dataset gaussian_blobs(const Vector& mean_plus, const Vector& mean_minus, int n,
                       std::uint64_t seed, double sigma = 1.0) {
    Rng rng(seed);
    const int J = static_cast<int>(mean_plus.size());
    std::vector<Vector> plus, minus;
    for (int i = 0; i < n; ++i) {
        Vector a(J), b(J);
        for (int j = 0; j < J; ++j) {
            a(j) = mean_plus(j) + sigma * rng.next_normal();
            b(j) = mean_minus(j) + sigma * rng.next_normal();
        }
        plus.push_back(a);
        minus.push_back(b);
    }
    return make_dataset(plus, minus);
}

double test_error(const BaselineModel& model, const Dataset& test) {
    int wrong = 0;
    for (const auto& obs : test.items)
        if (model.predict(obs) != *obs.label) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(test.items.size());
}

Dataset flipped_labels(const Dataset& data) {
    Dataset out = data;
    for (auto& obs : out.items) obs.label = -*obs.label;
    std::swap(out.n_plus, out.n_minus);
    return out;
}

}  // namespace

TEST_CASE("fpca eigenstructure") {
    SUBCASE("only coefficient 1 varies: first eigenvector is e1 up to sign") {
        Rng rng(1);
        std::vector<Vector> plus, minus;
        for (int i = 0; i < 20; ++i) {
            Vector c = Vector::Zero(5);
            c(0) = rng.next_normal();
            (i % 2 == 0 ? plus : minus).push_back(c);
        }
        const auto basis = fpca(make_dataset(plus, minus), 1);
        CHECK(std::abs(basis.eigvecs(0, 0)) == doctest::Approx(1.0));
        CHECK(basis.eigvecs.col(0).tail(4).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("orthonormal columns, descending eigenvalues") {
        const Dataset data = sample_balanced(scenario1(1.5), 100, 2);
        const auto basis = fpca(data, 6);
        const Matrix gram = basis.eigvecs.transpose() * basis.eigvecs;
        CHECK((gram - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
        for (int j = 1; j < 6; ++j) CHECK(basis.eigvals(j) <= basis.eigvals(j - 1));
        CHECK(basis.eigvals(5) > 0.0);
        CHECK_FALSE(basis.rank_deficient);
    }
    SUBCASE("reconstruction error non-increasing in p") {
        const Dataset data = sample_balanced(scenario1(1.5), 50, 3);
        double prev = 1e300;
        for (int p : {1, 2, 4, 8}) {
            const auto basis = fpca(data, p);
            double err = 0.0;
            for (const auto& obs : data.items) {
                const Vector centered = obs.coeffs - basis.mean;
                const Vector recon = basis.eigvecs * (basis.eigvecs.transpose() * centered);
                err += (centered - recon).squaredNorm();
            }
            CHECK(err <= prev + 1e-9);
            prev = err;
        }
    }
    SUBCASE("eigenvalues track the spectral law at large n") {
        const Dataset data = sample_balanced(scenario1(1.5), 5000, 4);
        const auto basis = fpca(data, 3);
        for (int j = 1; j <= 3; ++j) {
            const double theta = std::pow(static_cast<double>(j), -2.0);
            CHECK(basis.eigvals(j - 1) == doctest::Approx(theta).epsilon(0.10));
        }
    }
    SUBCASE("scores are centering-invariant") {
        const Dataset data = sample_balanced(scenario1(1.5), 30, 5);
        Dataset shifted = data;
        const Vector offset = Vector::Constant(data.items[0].coeffs.size(), 3.7);
        for (auto& obs : shifted.items)
            obs = make_obs(obs.basis, obs.coeffs + offset, obs.label);
        const auto b0 = fpca(data, 3);
        const auto b1 = fpca(shifted, 3);
        const FuncObs probe = data.items[7];
        const FuncObs probe_shifted =
            make_obs(probe.basis, probe.coeffs + offset, probe.label);
        const Vector s0 = fpca_scores(b0, probe);
        const Vector s1 = fpca_scores(b1, probe_shifted);
        // eigenvectors may flip sign independently
        CHECK((s0.cwiseAbs() - s1.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("rank deficiency is flagged") {
        Rng rng(6);
        std::vector<Vector> plus, minus;
        for (int i = 0; i < 10; ++i) {
            Vector c = Vector::Zero(5);
            c(0) = rng.next_normal();
            c(1) = 2.0 * c(0);  // rank-1 cloud
            (i % 2 == 0 ? plus : minus).push_back(c);
        }
        const auto basis = fpca(make_dataset(plus, minus), 3);
        CHECK(basis.rank_deficient);
        CHECK(basis.eigvals.size() < 3);
    }
    SUBCASE("validation") {
        const Dataset data = sample_balanced(scenario1(1.5), 5, 7);
        CHECK_THROWS_AS(fpca(data, 0), InvalidParameter);
        CHECK_THROWS_AS(fpca(data, 52), InvalidParameter);
        Dataset tiny;
        tiny.items.push_back(data.items[0]);
        CHECK_THROWS_AS(fpca(tiny, 1), InsufficientData);
    }
}

TEST_CASE("centroid classifier") {
    SUBCASE("two constant-function classes, p=1: zero training error") {
        std::vector<Vector> plus, minus;
        Rng rng(8);
        for (int i = 0; i < 10; ++i) {
            Vector a = Vector::Zero(4), b = Vector::Zero(4);
            a(0) = 2.0 + 0.1 * rng.next_normal();
            b(0) = -2.0 + 0.1 * rng.next_normal();
            plus.push_back(a);
            minus.push_back(b);
        }
        const Dataset data = make_dataset(plus, minus);
        const auto model = fit_centroid(data, 1);
        CHECK_FALSE(model->degenerate);
        CHECK(test_error(*model, data) == 0.0);
    }
    SUBCASE("identical class means: degenerate, always +1") {
        Rng rng(9);
        std::vector<Vector> pts;
        for (int i = 0; i < 8; ++i) {
            Vector c(3);
            for (int j = 0; j < 3; ++j) c(j) = rng.next_normal();
            pts.push_back(c);
        }
        const Dataset data = make_dataset(pts, pts);  // same cloud both classes
        const auto model = fit_centroid(data, 2);
        CHECK(model->degenerate);
        for (const auto& obs : data.items) CHECK(model->predict(obs) == +1);
    }
    SUBCASE("separated uniform supports: small held-out error") {
        const SpectralSpec spec = scenario2(1.5);
        const auto model = fit_centroid(sample_balanced(spec, 100, 10), 1);
        CHECK(test_error(*model, sample_balanced(spec, 500, 11)) <= 0.01);
    }
    SUBCASE("label flip flips predictions") {
        const Dataset data = sample_balanced(scenario1(1.3), 40, 12);
        const auto model = fit_centroid(data, 3);
        const auto flipped = fit_centroid(flipped_labels(data), 3);
        const Dataset probe = sample_balanced(scenario1(1.3), 25, 13);
        for (const auto& obs : probe.items)
            CHECK(model->predict(obs) == -flipped->predict(obs));
    }
}

TEST_CASE("pls centroid classifier") {
    SUBCASE("first direction proportional to cov(coeffs, y)") {
        const Dataset data = sample_balanced(scenario1(1.3), 30, 14);
        const auto model = fit_pls_centroid(data, 1);
        const int n = static_cast<int>(data.items.size());
        const int J = static_cast<int>(data.items[0].coeffs.size());
        Vector xbar = Vector::Zero(J);
        double ybar = 0.0;
        for (const auto& obs : data.items) {
            xbar += obs.coeffs;
            ybar += *obs.label;
        }
        xbar /= n;
        ybar /= n;
        Vector cov = Vector::Zero(J);
        for (const auto& obs : data.items)
            cov += (obs.coeffs - xbar) * (*obs.label - ybar);
        cov /= n;
        const Vector dir = model->rotation.col(0);
        const double scale = cov.norm() / dir.norm();
        const double align = std::abs(cov.dot(dir)) / (cov.norm() * dir.norm());
        CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(scale > 0.0);
    }
    SUBCASE("training error non-increasing as components are added") {
        const Dataset data = sample_balanced(scenario1(1.3), 25, 15);
        double prev = 1.0;
        for (int p : {1, 3, 6, 10}) {
            const auto model = fit_pls_centroid(data, p);
            const double err = test_error(*model, data);
            CHECK(err <= prev + 1e-12);
            prev = err;
        }
    }
    SUBCASE("zero covariance stops early with achieved components") {
        std::vector<Vector> plus, minus;
        for (int i = 0; i < 6; ++i) {
            Vector c = Vector::Zero(3);
            c(0) = i;  // identical clouds: labels carry no information
            plus.push_back(c);
            minus.push_back(c);
        }
        const auto model = fit_pls_centroid(make_dataset(plus, minus), 3);
        CHECK(model->rotation.cols() < 3);
        CHECK(model->p_requested == 3);
    }
    SUBCASE("label flip flips predictions") {
        const Dataset data = sample_balanced(scenario1(1.3), 40, 16);
        const auto model = fit_pls_centroid(data, 4);
        const auto flipped = fit_pls_centroid(flipped_labels(data), 4);
        const Dataset probe = sample_balanced(scenario1(1.3), 25, 17);
        for (const auto& obs : probe.items)
            CHECK(model->predict(obs) == -flipped->predict(obs));
    }
}

TEST_CASE("lda classifier") {
    SUBCASE("spherical classes at (+-1, 0): direction along e1") {
        Vector mp = Vector::Zero(2), mm = Vector::Zero(2);
        mp(0) = 1.0;
        mm(0) = -1.0;
        const Dataset data = gaussian_blobs(mp, mm, 2000, 18, 0.3);
        const auto model = fit_lda(data, 2);
        const Vector dir_coeff = model->basis.eigvecs * model->direction;
        const double align = std::abs(dir_coeff(0)) / dir_coeff.norm();
        CHECK(align == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("balanced symmetric classes: boundary through the grand mean") {
        Vector mp = Vector::Zero(3), mm = Vector::Zero(3);
        mp(0) = 2.0;
        mm(0) = -2.0;
        const Dataset data = gaussian_blobs(mp, mm, 500, 19);
        const auto model = fit_lda(data, 3);
        CHECK(model->log_prior_ratio == 0.0);
        // grand mean projects exactly onto the stored midpoint
        Vector grand = Vector::Zero(3);
        for (const auto& obs : data.items) grand += obs.coeffs;
        grand /= static_cast<double>(data.items.size());
        const Vector grand_scores =
            fpca_scores(model->basis, make_obs(data.items[0].basis, grand));
        CHECK((grand_scores - model->midpoint).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("well-separated means: held-out error at most 1%") {
        Vector mp = Vector::Zero(4), mm = Vector::Zero(4);
        mp(0) = 2.5;
        mm(0) = -2.5;  // 5 sigma apart; optimal error ~0.6%
        const auto model = fit_lda(gaussian_blobs(mp, mm, 250, 20), 4);
        CHECK(test_error(*model, gaussian_blobs(mp, mm, 2000, 21)) <= 0.01);
    }
    SUBCASE("label flip flips predictions") {
        const Dataset data = sample_balanced(scenario1(1.3), 40, 22);
        const auto model = fit_lda(data, 3);
        const auto flipped = fit_lda(flipped_labels(data), 3);
        const Dataset probe = sample_balanced(scenario1(1.3), 25, 23);
        for (const auto& obs : probe.items)
            CHECK(model->predict(obs) == -flipped->predict(obs));
    }
}

TEST_CASE("kde bayes classifier") {
    SUBCASE("well-separated 1-D clusters: zero training error") {
        // the separated coordinate also carries the largest within-class
        // variance, so it is the first component retained at p = 1
        Rng rng(24);
        std::vector<Vector> plus, minus;
        for (int i = 0; i < 15; ++i) {
            Vector a(2), b(2);
            a << 5.0 + rng.next_normal(), 0.2 * rng.next_normal();
            b << -5.0 + rng.next_normal(), 0.2 * rng.next_normal();
            plus.push_back(a);
            minus.push_back(b);
        }
        const Dataset data = make_dataset(plus, minus);
        const auto model = fit_kde_bayes(data, 1, 1.0);
        CHECK(test_error(*model, data) == 0.0);
    }
    SUBCASE("identical class samples: ties everywhere, predicts +1") {
        Rng rng(25);
        std::vector<Vector> pts;
        for (int i = 0; i < 10; ++i) {
            Vector c(3);
            for (int j = 0; j < 3; ++j) c(j) = rng.next_normal();
            pts.push_back(c);
        }
        const Dataset data = make_dataset(pts, pts);
        const auto model = fit_kde_bayes(data, 2, 1.0);
        for (const auto& obs : data.items) CHECK(model->predict(obs) == +1);
    }
    SUBCASE("each fitted 1-D density integrates to one") {
        const Dataset data = sample_balanced(scenario1(1.3), 40, 26);
        const auto model = fit_kde_bayes(data, 3, 1.0);
        for (int cls = 0; cls < 2; ++cls) {
            for (std::size_t j = 0; j < model->samples[cls].size(); ++j) {
                const Vector& pts = model->samples[cls][j];
                const double h = model->bandwidths[cls][j];
                const double lo = pts.minCoeff() - 10.0 * h;
                const double hi = pts.maxCoeff() + 10.0 * h;
                const int m = 20000;
                double integral = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double t = lo + (hi - lo) * k / (m - 1);
                    double density = 0.0;
                    for (int i = 0; i < pts.size(); ++i) {
                        const double z = (t - pts(i)) / h;
                        density += std::exp(-0.5 * z * z);
                    }
                    density /= pts.size() * h * std::sqrt(2.0 * M_PI);
                    integral += (k == 0 || k == m - 1) ? density / 2 : density;
                }
                integral *= (hi - lo) / (m - 1);
                CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
            }
        }
    }
    SUBCASE("bandwidth must be positive") {
        const Dataset data = sample_balanced(scenario1(1.3), 10, 27);
        CHECK_THROWS_AS(fit_kde_bayes(data, 2, 0.0), InvalidParameter);
    }
}

TEST_CASE("gp laplace classifier") {
    const KernelSpec kernel{1.0, CoefficientMode{}};

    SUBCASE("posterior mode is a fixed point of the Newton map") {
        const Dataset data = sample_balanced(scenario1(1.3), 25, 28);
        const auto model = fit_gp_laplace(data, kernel);
        REQUIRE(model->converged);
        const Matrix G = gram(data.items, kernel) +
                         1e-8 * Matrix::Identity(static_cast<int>(data.items.size()),
                                                 static_cast<int>(data.items.size()));
        const Vector residual = model->latent_mode - G * model->alpha;
        CHECK(residual.cwiseAbs().maxCoeff() <= 1e-6);
    }
    SUBCASE("mirrored data: latent mean antisymmetric under label flip") {
        const Dataset data = sample_balanced(scenario1(1.3), 20, 29);
        const auto model = fit_gp_laplace(data, kernel);
        const auto flipped = fit_gp_laplace(flipped_labels(data), kernel);
        const Dataset probe = sample_balanced(scenario1(1.3), 15, 30);
        for (const auto& obs : probe.items) {
            CHECK(model->latent_mean(obs) ==
                  doctest::Approx(-flipped->latent_mean(obs)).epsilon(1e-6));
            CHECK(model->predict(obs) == -flipped->predict(obs));
        }
    }
    SUBCASE("separated uniform supports: held-out error at most 2%") {
        const SpectralSpec spec = scenario2(1.5);
        const auto model = fit_gp_laplace(sample_balanced(spec, 100, 31), kernel);
        CHECK(test_error(*model, sample_balanced(spec, 500, 32)) <= 0.02);
    }
    SUBCASE("zero latent mean predicts +1") {
        const Dataset data = sample_balanced(scenario1(1.3), 10, 33);
        auto model = fit_gp_laplace(data, kernel);
        model->alpha.setZero();
        CHECK(model->predict(data.items[0]) == +1);
    }
}

TEST_CASE("model JSON carries the method tag") {
    const Dataset data = sample_balanced(scenario2(1.5), 20, 34);
    const auto centroid = fit_centroid(data, 1);
    CHECK(centroid->to_json().at("method") == "centroid");
    const auto pls = fit_pls_centroid(data, 2);
    CHECK(pls->to_json().at("method") == "pls_centroid");
    const auto lda = fit_lda(data, 2);
    CHECK(lda->to_json().at("method") == "lda");
    const auto kde = fit_kde_bayes(data, 2, 1.0);
    CHECK(kde->to_json().at("method") == "kde_bayes");
    const auto gp = fit_gp_laplace(data, KernelSpec{1.0, CoefficientMode{}});
    CHECK(gp->to_json().at("method") == "gp_laplace");
}
