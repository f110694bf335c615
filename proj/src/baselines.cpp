#include "fdc/baselines.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fdc/errors.hpp"
#include "fdc/io.hpp"

namespace fdc {

namespace {

constexpr double kEigvalFloorRatio = 1e-8;   // floor on theta_hat reciprocals
constexpr double kLdaRidgeRatio = 1e-8;
constexpr double kDensityFloor = 1e-300;
constexpr double kGpJitter = 1e-8;

Matrix coeff_matrix(const Dataset& data) {
    const int n = static_cast<int>(data.items.size());
    if (n < 2) throw InsufficientData("need at least 2 observations");
    const int J = data.items.front().basis.truncation;
    Matrix X(n, J);
    for (int i = 0; i < n; ++i) {
        if (data.items[i].coeffs.size() != J)
            throw InvalidParameter("inconsistent coefficient lengths");
        X.row(i) = data.items[i].coeffs;
    }
    return X;
}

Vector label_vector(const Dataset& data) {
    const int n = static_cast<int>(data.items.size());
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        if (!data.items[i].label) throw InvalidParameter("unlabeled observation");
        y(i) = *data.items[i].label;
    }
    return y;
}

// per-class mean of rows of S selected by label
Vector class_score_mean(const Matrix& S, const Vector& y, int label) {
    Vector m = Vector::Zero(S.cols());
    int count = 0;
    for (int i = 0; i < S.rows(); ++i)
        if (y(i) == label) {
            m += S.row(i).transpose();
            ++count;
        }
    if (count == 0) throw InvalidParameter("a class is absent from the data");
    return m / count;
}

double silverman_bandwidth(Vector sample) {
    const int n = static_cast<int>(sample.size());
    const double mean = sample.mean();
    const double sd = std::sqrt((sample.array() - mean).square().sum() /
                                std::max(1, n - 1));
    std::sort(sample.data(), sample.data() + n);
    const auto quantile = [&](double q) {
        const double pos = q * (n - 1);
        const int lo = static_cast<int>(pos);
        const int hi = std::min(lo + 1, n - 1);
        return sample(lo) + (pos - lo) * (sample(hi) - sample(lo));
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double a = std::min(sd, iqr / 1.34);
    if (a <= 0.0) a = sd;
    const double h = 0.9 * a * std::pow(static_cast<double>(n), -0.2);
    return h > 0.0 ? h : 1e-8;
}

}  // namespace

FpcaBasis fpca(const Dataset& data, int p) {
    const Matrix X = coeff_matrix(data);
    const int n = static_cast<int>(X.rows());
    const int J = static_cast<int>(X.cols());
    if (p < 1 || p > std::min(J, n - 1))
        throw InvalidParameter("fpca rank p out of range");

    FpcaBasis out;
    out.mean = X.colwise().mean();
    // pooled within-class covariance: label means are removed per class so
    // the estimated eigenvalues track the noise spectrum, not the mean gap
    const Matrix C = [&] {
        Matrix Xc = X;
        int groups = 0;
        for (int label : {+1, -1, 0}) {
            Vector m = Vector::Zero(J);
            int count = 0;
            for (int i = 0; i < n; ++i) {
                const int li = data.items[i].label.value_or(0);
                if (li != label) continue;
                m += X.row(i).transpose();
                ++count;
            }
            if (count == 0) continue;
            ++groups;
            m /= count;
            for (int i = 0; i < n; ++i)
                if (data.items[i].label.value_or(0) == label)
                    Xc.row(i) -= m.transpose();
        }
        return Matrix((Xc.transpose() * Xc) / std::max(1, n - groups));
    }();

    Eigen::SelfAdjointEigenSolver<Matrix> es(C);
    // keep the top-p strictly positive eigenpairs (solver returns ascending)
    const double top = es.eigenvalues()(J - 1);
    const double cutoff = std::max(0.0, top) * 1e-12;
    std::vector<int> kept;
    for (int i = J - 1; i >= 0 && static_cast<int>(kept.size()) < p; --i)
        if (es.eigenvalues()(i) > cutoff) kept.push_back(i);

    const int p_ach = static_cast<int>(kept.size());
    if (p_ach == 0) throw InvalidParameter("covariance has no positive eigenvalue");
    out.rank_deficient = p_ach < p;
    out.eigvals.resize(p_ach);
    out.eigvecs.resize(J, p_ach);
    for (int k = 0; k < p_ach; ++k) {
        out.eigvals(k) = es.eigenvalues()(kept[k]);
        out.eigvecs.col(k) = es.eigenvectors().col(kept[k]);
    }
    return out;
}

Vector fpca_scores(const FpcaBasis& basis, const FuncObs& x) {
    if (x.coeffs.size() != basis.mean.size())
        throw InvalidParameter("coefficient length does not match FPCA basis");
    return basis.eigvecs.transpose() * (x.coeffs - basis.mean);
}

// ---------------------------------------------------------------- centroid

std::unique_ptr<CentroidModel> fit_centroid(const Dataset& data, int p) {
    auto model = std::make_unique<CentroidModel>();
    model->basis = fpca(data, p);

    const Vector y = label_vector(data);
    const int n = static_cast<int>(data.items.size());
    const int p_ach = static_cast<int>(model->basis.eigvals.size());
    Matrix S(n, p_ach);
    for (int i = 0; i < n; ++i)
        S.row(i) = fpca_scores(model->basis, data.items[i]).transpose();

    const Vector m_plus = class_score_mean(S, y, +1);
    const Vector m_minus = class_score_mean(S, y, -1);

    const double floor = kEigvalFloorRatio * model->basis.eigvals(0);
    model->direction.resize(p_ach);
    for (int k = 0; k < p_ach; ++k)
        model->direction(k) =
            (m_plus(k) - m_minus(k)) / std::max(model->basis.eigvals(k), floor);

    if ((m_plus - m_minus).cwiseAbs().maxCoeff() == 0.0) {
        model->degenerate = true;
        model->direction.setZero();
    }
    model->centroid_plus = model->direction.dot(m_plus);
    model->centroid_minus = model->direction.dot(m_minus);
    return model;
}

int CentroidModel::predict(const FuncObs& x) const {
    if (degenerate) return +1;
    const double v = direction.dot(fpca_scores(basis, x));
    return std::abs(v - centroid_plus) <= std::abs(v - centroid_minus) ? +1 : -1;
}

// -------------------------------------------------------------------- PLS

std::unique_ptr<PlsCentroidModel> fit_pls_centroid(const Dataset& data, int p) {
    if (p < 1) throw InvalidParameter("p must be >= 1");
    Matrix X = coeff_matrix(data);
    const Vector y_raw = label_vector(data);
    const int n = static_cast<int>(X.rows());
    const int J = static_cast<int>(X.cols());
    p = std::min(p, J);

    auto model = std::make_unique<PlsCentroidModel>();
    model->p_requested = p;
    model->mean = X.colwise().mean();
    model->y_mean = y_raw.mean();
    X.rowwise() -= model->mean.transpose();
    const Matrix X0 = X;
    Vector y = y_raw.array() - model->y_mean;

    Matrix W(J, p), P(J, p);
    int achieved = 0;
    for (int k = 0; k < p; ++k) {
        Vector w = X.transpose() * y;   // component 1 is cov(coeffs, y)
        const double wn = w.norm();
        if (wn < 1e-12) break;          // no covariance left
        w /= wn;
        const Vector t = X * w;
        const double tt = t.squaredNorm();
        if (tt < 1e-12) break;
        const Vector load = X.transpose() * t / tt;
        W.col(k) = w;
        P.col(k) = load;
        X -= t * load.transpose();
        y -= t * (t.dot(y) / tt);
        ++achieved;
    }

    if (achieved == 0) {
        model->degenerate = true;
        model->rotation = Matrix::Zero(J, 0);
        model->centroid_plus = Vector::Zero(0);
        model->centroid_minus = Vector::Zero(0);
        return model;
    }

    const Matrix Wk = W.leftCols(achieved);
    const Matrix Pk = P.leftCols(achieved);
    // scores of a new point: (x - mean)' W (P'W)^-1
    model->rotation =
        Wk * (Pk.transpose() * Wk).colPivHouseholderQr().solve(
                 Matrix::Identity(achieved, achieved));

    Matrix S(n, achieved);
    for (int i = 0; i < n; ++i) S.row(i) = X0.row(i) * model->rotation;
    model->centroid_plus = class_score_mean(S, y_raw, +1);
    model->centroid_minus = class_score_mean(S, y_raw, -1);
    if ((model->centroid_plus - model->centroid_minus).cwiseAbs().maxCoeff() == 0.0)
        model->degenerate = true;
    return model;
}

int PlsCentroidModel::predict(const FuncObs& x) const {
    if (degenerate) return +1;
    const Vector s = rotation.transpose() * (x.coeffs - mean);
    const double dp = (s - centroid_plus).squaredNorm();
    const double dm = (s - centroid_minus).squaredNorm();
    return dp <= dm ? +1 : -1;
}

// -------------------------------------------------------------------- LDA

std::unique_ptr<LdaModel> fit_lda(const Dataset& data, int p) {
    auto model = std::make_unique<LdaModel>();
    model->basis = fpca(data, p);

    const Vector y = label_vector(data);
    const int n = static_cast<int>(data.items.size());
    const int p_ach = static_cast<int>(model->basis.eigvals.size());
    Matrix S(n, p_ach);
    for (int i = 0; i < n; ++i)
        S.row(i) = fpca_scores(model->basis, data.items[i]).transpose();

    const Vector m_plus = class_score_mean(S, y, +1);
    const Vector m_minus = class_score_mean(S, y, -1);

    Matrix Sw = Matrix::Zero(p_ach, p_ach);
    int n_plus = 0, n_minus = 0;
    for (int i = 0; i < n; ++i) {
        const Vector& m = y(i) == 1 ? m_plus : m_minus;
        const Vector d = S.row(i).transpose() - m;
        Sw += d * d.transpose();
        (y(i) == 1 ? n_plus : n_minus) += 1;
    }
    Sw /= std::max(1, n - 2);
    const double ridge = kLdaRidgeRatio * std::max(Sw.trace() / p_ach, 1e-30);
    Sw += ridge * Matrix::Identity(p_ach, p_ach);

    model->direction = Sw.ldlt().solve(m_plus - m_minus);
    model->midpoint = 0.5 * (m_plus + m_minus);
    model->log_prior_ratio = std::log(static_cast<double>(n_plus) / n_minus);
    if (model->direction.cwiseAbs().maxCoeff() == 0.0) model->degenerate = true;
    return model;
}

int LdaModel::predict(const FuncObs& x) const {
    if (degenerate) return +1;
    const Vector s = fpca_scores(basis, x);
    const double g = direction.dot(s - midpoint) + log_prior_ratio;
    return g >= 0.0 ? +1 : -1;
}

// -------------------------------------------------------------- KDE Bayes

std::unique_ptr<KdeBayesModel> fit_kde_bayes(const Dataset& data, int p,
                                             double bandwidth) {
    if (bandwidth <= 0.0) throw InvalidParameter("bandwidth multiplier must be > 0");
    auto model = std::make_unique<KdeBayesModel>();
    model->basis = fpca(data, p);
    const Vector y = label_vector(data);
    const int n = static_cast<int>(data.items.size());
    const int p_ach = static_cast<int>(model->basis.eigvals.size());

    Matrix S(n, p_ach);
    for (int i = 0; i < n; ++i)
        S.row(i) = fpca_scores(model->basis, data.items[i]).transpose();

    model->samples.assign(2, std::vector<Vector>(p_ach));
    model->bandwidths.assign(2, std::vector<double>(p_ach));
    int counts[2] = {0, 0};
    for (int c = 0; c < 2; ++c) {
        const int label = c == 0 ? +1 : -1;
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (y(i) == label) idx.push_back(i);
        if (idx.empty()) throw InvalidParameter("a class is absent from the data");
        counts[c] = static_cast<int>(idx.size());
        for (int k = 0; k < p_ach; ++k) {
            Vector col(idx.size());
            for (std::size_t r = 0; r < idx.size(); ++r) col(r) = S(idx[r], k);
            model->samples[c][k] = col;
            model->bandwidths[c][k] = bandwidth * silverman_bandwidth(col);
        }
    }
    model->log_prior_plus = std::log(static_cast<double>(counts[0]) / n);
    model->log_prior_minus = std::log(static_cast<double>(counts[1]) / n);
    return model;
}

double KdeBayesModel::log_density(int class_idx, const Vector& scores) const {
    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    double total = 0.0;
    for (std::size_t k = 0; k < samples[class_idx].size(); ++k) {
        const Vector& pts = samples[class_idx][k];
        const double h = bandwidths[class_idx][k];
        double dens = 0.0;
        for (Eigen::Index i = 0; i < pts.size(); ++i) {
            const double z = (scores(k) - pts(i)) / h;
            dens += std::exp(-0.5 * z * z);
        }
        dens *= kInvSqrt2Pi / (h * pts.size());
        total += std::log(std::max(dens, kDensityFloor));
    }
    return total;
}

int KdeBayesModel::predict(const FuncObs& x) const {
    const Vector s = fpca_scores(basis, x);
    const double lp = log_prior_plus + log_density(0, s);
    const double lm = log_prior_minus + log_density(1, s);
    return lp >= lm ? +1 : -1;
}

// ------------------------------------------------------------- GP Laplace

std::unique_ptr<GpLaplaceModel> fit_gp_laplace(const Dataset& data,
                                               const KernelSpec& kernel) {
    const int n = static_cast<int>(data.items.size());
    if (n < 2) throw InsufficientData("need at least 2 observations");
    const Vector y = label_vector(data);

    auto model = std::make_unique<GpLaplaceModel>();
    model->train_inputs = data.items;
    model->kernel = kernel;

    Matrix K = gram(data.items, kernel);
    K.diagonal().array() += kGpJitter;

    const Vector t = (y.array() + 1.0) / 2.0;
    Vector f = Vector::Zero(n);
    Vector grad(n);

    const int max_newton = 100;
    int iter = 0;
    for (; iter < max_newton; ++iter) {
        const Vector pi = (1.0 / (1.0 + (-f.array()).exp())).matrix();
        grad = t - pi;
        const Vector w = (pi.array() * (1.0 - pi.array())).max(1e-12).matrix();
        const Vector sw = w.array().sqrt().matrix();

        Matrix B = sw.asDiagonal() * K * sw.asDiagonal();
        B.diagonal().array() += 1.0;
        const Eigen::LLT<Matrix> llt(B);

        const Vector b = w.asDiagonal() * f + grad;
        const Vector a =
            b - sw.asDiagonal() * llt.solve((sw.asDiagonal() * (K * b)).eval());
        const Vector f_new = K * a;

        const double delta = (f_new - f).lpNorm<Eigen::Infinity>();
        f = f_new;
        if (delta < 1e-10) {
            model->converged = true;
            ++iter;
            break;
        }
    }

    // alpha so the predictive latent mean is exactly k_x' grad log p(y | f_hat)
    const Vector pi = (1.0 / (1.0 + (-f.array()).exp())).matrix();
    model->alpha = t - pi;
    model->latent_mode = f;
    model->iterations = iter;
    return model;
}

double GpLaplaceModel::latent_mean(const FuncObs& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < train_inputs.size(); ++j)
        s += alpha(static_cast<Eigen::Index>(j)) * kernel_eval(kernel, x, train_inputs[j]);
    return s;
}

int GpLaplaceModel::predict(const FuncObs& x) const {
    return latent_mean(x) >= 0.0 ? +1 : -1;
}

// ----------------------------------------------------------- serialization

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

json fpca_to_json(const FpcaBasis& b) {
    return json{{"mean", vector_to_json(b.mean)},
                {"eigvecs", matrix_to_json(b.eigvecs)},
                {"eigvals", vector_to_json(b.eigvals)},
                {"rank_deficient", b.rank_deficient}};
}

}  // namespace

json CentroidModel::to_json() const {
    return json{{"method", method()},
                {"fpca", fpca_to_json(basis)},
                {"direction", vector_to_json(direction)},
                {"centroid_plus", centroid_plus},
                {"centroid_minus", centroid_minus},
                {"degenerate", degenerate}};
}

json PlsCentroidModel::to_json() const {
    return json{{"method", method()},
                {"mean", vector_to_json(mean)},
                {"rotation", matrix_to_json(rotation)},
                {"centroid_plus", vector_to_json(centroid_plus)},
                {"centroid_minus", vector_to_json(centroid_minus)},
                {"p_requested", p_requested},
                {"degenerate", degenerate}};
}

json LdaModel::to_json() const {
    return json{{"method", method()},
                {"fpca", fpca_to_json(basis)},
                {"direction", vector_to_json(direction)},
                {"midpoint", vector_to_json(midpoint)},
                {"log_prior_ratio", log_prior_ratio},
                {"degenerate", degenerate}};
}

json KdeBayesModel::to_json() const {
    json bw = json::array();
    for (const auto& row : bandwidths) bw.push_back(row);
    return json{{"method", method()},
                {"fpca", fpca_to_json(basis)},
                {"bandwidths", bw},
                {"log_prior_plus", log_prior_plus},
                {"log_prior_minus", log_prior_minus}};
}

json GpLaplaceModel::to_json() const {
    return json{{"method", method()},
                {"bandwidth", kernel.bandwidth},
                {"alpha", vector_to_json(alpha)},
                {"latent_mode", vector_to_json(latent_mode)},
                {"converged", converged},
                {"iterations", iterations}};
}

}  // namespace fdc
