#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdc/modelsel.hpp"
#include "fdc/rkhs.hpp"

namespace fdc {

struct MethodSpec {
    std::string name;                     // rkhs, centroid, pls_centroid, lda,
                                          // kde_bayes, gp_laplace
    Grid grid;                            // selection axes (default per method)
    std::map<std::string, double> fixed;  // pinned hyperparameters

    std::string tag() const;
};

struct ScenarioSpec {
    int scenario = 1;      // 1 or 2
    double param = 1.3;    // gamma (scenario 1) or mu (scenario 2)
    bool cross = false;    // Appendix-style cross-basis variant

    SpectralSpec law() const;
    std::string tag() const;
};

struct Plan {
    std::vector<ScenarioSpec> scenarios;
    std::vector<int> n_grid{25, 50, 100, 200, 400};  // per-class train sizes
    int repetitions = 20;
    int m_test = 500;
    int m_val = 1000;
    std::vector<MethodSpec> methods;
    std::uint64_t master_seed = 1;
    std::string out_dir;
    int threads = 0;  // 0 = hardware concurrency
    FitOptions cv_fit{300, 1e-4};      // grid-search fits
    FitOptions final_fit{10000, 1e-6};
    double regime_gap = 0.05;          // r^2 gap for rate-regime calls
};

Plan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const Plan& plan);

struct CurvePoint {
    int n = 0;
    std::vector<double> errors;  // one per repetition
    double mean = 0.0;
    double stddev = 0.0;
    bool any_failed = false;
};

struct ErrorCurve {
    std::string method;
    std::string scenario;
    double param = 0.0;
    int m_test = 0;
    std::vector<CurvePoint> points;
};

void finalize_stats(CurvePoint& point);

enum class Regime { Exponential, Polynomial, Flat, Undetermined };

struct RateFit {
    double b_exp = 0.0;   // decay rate of log(mean) vs n
    double r2_exp = 0.0;
    double b_poly = 0.0;  // decay exponent of log(mean) vs log n
    double r2_poly = 0.0;
    Regime regime = Regime::Undetermined;
};

RateFit rate_fit(const ErrorCurve& curve, double r2_gap = 0.05);
std::string regime_name(Regime regime);

// Derived repetition seed; pure in its arguments, so growing the
// repetition count never reshuffles earlier repetitions.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t method_idx,
                        std::size_t scenario_idx, std::size_t n_idx,
                        std::size_t repetition_idx);

// One misclassification-rate measurement: sample, select, fit, score.
double run_repetition(const Plan& plan, const MethodSpec& method,
                      const ScenarioSpec& scenario, int n_per_class,
                      std::uint64_t seed);

struct RunResult {
    std::vector<ErrorCurve> curves;
    nlohmann::json manifest;  // config hash, seed, per-cell wall time
};

RunResult run(const Plan& plan);

enum class SvgAxes { LogLog, LogLinear };

void export_csv(const std::vector<ErrorCurve>& curves, const std::string& long_path,
                const std::string& summary_path, double r2_gap = 0.05);
std::vector<ErrorCurve> import_csv(const std::string& long_path, int m_test);
void export_svg(const std::vector<ErrorCurve>& curves, const std::string& path,
                SvgAxes axes);

// Zero-mean clamp used before taking logs, half a test count.
double clamp_floor(int m_test);

// Misclassification rate of an arbitrary predictor on a labeled set.
double test_error(const std::function<int(const FuncObs&)>& predictor,
                  const Dataset& data);

// Classifier factory shared by selection and final fits.
std::function<int(const FuncObs&)> build_classifier(
    const MethodSpec& method, const Grid& grid, const GridPoint& point,
    const Dataset& train, const FitOptions& fit_options);

}  // namespace fdc
