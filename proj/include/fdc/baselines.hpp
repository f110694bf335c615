#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdc/datagen.hpp"
#include "fdc/rkhs.hpp"

namespace fdc {

// Empirical eigenstructure of the pooled coefficient covariance.
struct FpcaBasis {
    Vector mean;       // length J
    Matrix eigvecs;    // J x p, orthonormal columns
    Vector eigvals;    // descending, positive
    bool rank_deficient = false;  // requested p exceeded achievable rank
};

FpcaBasis fpca(const Dataset& data, int p);

// Centered projection of x onto the retained eigenvectors.
Vector fpca_scores(const FpcaBasis& basis, const FuncObs& x);

// Common fit/predict surface for the comparison classifiers; the
// experiment harness treats every method through this interface.
struct BaselineModel {
    virtual ~BaselineModel() = default;
    virtual std::string method() const = 0;
    virtual int predict(const FuncObs& x) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

struct CentroidModel : BaselineModel {
    FpcaBasis basis;
    Vector direction;        // score-space weighting theta^-1 (m+ - m-)
    double centroid_plus = 0.0;
    double centroid_minus = 0.0;
    bool degenerate = false;  // identical centroids; predicts +1 always

    std::string method() const override { return "centroid"; }
    int predict(const FuncObs& x) const override;
    nlohmann::json to_json() const override;
};

struct PlsCentroidModel : BaselineModel {
    Vector mean;          // feature centering
    double y_mean = 0.0;
    Matrix rotation;      // J x p_achieved; scores = (x - mean)' rotation
    Vector centroid_plus;
    Vector centroid_minus;
    int p_requested = 0;
    bool degenerate = false;

    std::string method() const override { return "pls_centroid"; }
    int predict(const FuncObs& x) const override;
    nlohmann::json to_json() const override;
};

struct LdaModel : BaselineModel {
    FpcaBasis basis;
    Vector direction;     // Fisher direction in score space
    Vector midpoint;      // (m+ + m-)/2 in score space
    double log_prior_ratio = 0.0;  // log(n+/n-)
    bool degenerate = false;

    std::string method() const override { return "lda"; }
    int predict(const FuncObs& x) const override;
    nlohmann::json to_json() const override;
};

struct KdeBayesModel : BaselineModel {
    FpcaBasis basis;
    // per class (0 = +1, 1 = -1), per component: sample points and bandwidth
    std::vector<std::vector<Vector>> samples;
    std::vector<std::vector<double>> bandwidths;
    double log_prior_plus = 0.0;
    double log_prior_minus = 0.0;

    std::string method() const override { return "kde_bayes"; }
    int predict(const FuncObs& x) const override;
    nlohmann::json to_json() const override;

    double log_density(int class_idx, const Vector& scores) const;
};

struct GpLaplaceModel : BaselineModel {
    std::vector<FuncObs> train_inputs;
    KernelSpec kernel;
    Vector latent_mode;   // posterior mode f_hat
    Vector alpha;         // grad log p(y | f_hat); predictive mean = k_x' alpha
    bool converged = false;
    int iterations = 0;

    std::string method() const override { return "gp_laplace"; }
    int predict(const FuncObs& x) const override;
    double latent_mean(const FuncObs& x) const;
    nlohmann::json to_json() const override;
};

std::unique_ptr<CentroidModel> fit_centroid(const Dataset& data, int p);
std::unique_ptr<PlsCentroidModel> fit_pls_centroid(const Dataset& data, int p);
std::unique_ptr<LdaModel> fit_lda(const Dataset& data, int p);
// `bandwidth` multiplies the per-component Silverman rule-of-thumb value.
std::unique_ptr<KdeBayesModel> fit_kde_bayes(const Dataset& data, int p,
                                             double bandwidth);
std::unique_ptr<GpLaplaceModel> fit_gp_laplace(const Dataset& data,
                                               const KernelSpec& kernel);

}  // namespace fdc
