#include "fdc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "fdc/baselines.hpp"
#include "fdc/conditions.hpp"
#include "fdc/errors.hpp"
#include "fdc/io.hpp"
#include "fdc/rng.hpp"

namespace fdc {

namespace {

constexpr int kCrossGridPoints = 257;  // discretization for mixed-basis runs

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    OlsFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        double ssres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            ssres += r * r;
        }
        fit.r2 = 1.0 - ssres / syy;
    }
    return fit;
}

Grid default_grid(const std::string& name, const std::map<std::string, double>& fixed) {
    const auto p_axis = [] {
        std::vector<double> p;
        for (int i = 1; i <= 10; ++i) p.push_back(i);
        return GridAxis{"p", p};
    };
    Grid grid;
    const auto add = [&](GridAxis axis) {
        if (!fixed.count(axis.name)) grid.axes.push_back(std::move(axis));
    };
    if (name == "rkhs") {
        add({"h", power_of_two_grid()});
        add({"lambda", power_of_two_grid()});
    } else if (name == "gp_laplace") {
        add({"h", power_of_two_grid()});
    } else if (name == "centroid" || name == "pls_centroid" || name == "lda") {
        add(p_axis());
    } else if (name == "kde_bayes") {
        add(p_axis());
        add({"bw", {0.25, 0.5, 1.0, 2.0, 4.0}});
    } else if (name == "const_plus") {
        // harness tripwire: no hyperparameters
    } else {
        throw InvalidParameter("unknown method: " + name);
    }
    return grid;
}

double hyper(const MethodSpec& method, const Grid& grid, const GridPoint& point,
             const std::string& name) {
    for (std::size_t a = 0; a < grid.axes.size(); ++a)
        if (grid.axes[a].name == name) return point.values[a];
    const auto it = method.fixed.find(name);
    if (it != method.fixed.end()) return it->second;
    throw InvalidParameter("hyperparameter not on grid or fixed: " + name);
}

// Map every observation to sqrt-weighted trapezoid grid values so that
// coefficient-space distances equal Grid-mode functional distances. The
// basis tag on the result is only a length carrier.
Dataset to_grid_features(const Dataset& data, int m) {
    Dataset out;
    out.seed = data.seed;
    out.n_plus = data.n_plus;
    out.n_minus = data.n_minus;
    const double h = 1.0 / (m - 1);
    Vector w(m);
    w.setConstant(std::sqrt(h));
    w(0) = w(m - 1) = std::sqrt(h / 2.0);
    const BasisId carrier{BasisFamily::SineOne, m};
    out.items.reserve(data.items.size());
    for (const auto& obs : data.items) {
        Vector g = evaluate_on_grid(obs, m).cwiseProduct(w);
        out.items.push_back(make_obs(carrier, std::move(g), obs.label));
    }
    return out;
}

std::vector<int> labels_of(const Dataset& data) {
    std::vector<int> y;
    y.reserve(data.items.size());
    for (const auto& obs : data.items) {
        if (!obs.label) throw InvalidParameter("unlabeled observation");
        y.push_back(*obs.label);
    }
    return y;
}

// Fit once, score a whole set; uses the vectorized decision path for RKHS.
double eval_error(const MethodSpec& method, const Grid& grid, const GridPoint& point,
                  const Dataset& train, const Dataset& test,
                  const FitOptions& fit_options) {
    if (method.name == "rkhs") {
        KernelSpec kernel{hyper(method, grid, point, "h"), CoefficientMode{}};
        const double lambda = hyper(method, grid, point, "lambda");
        const RkhsModel model =
            fit(train.items, labels_of(train), kernel, lambda,
                PenaltyMode::SumSquares, fit_options);
        const Vector dec = decision_values(model, test.items);
        int wrong = 0;
        for (Eigen::Index i = 0; i < dec.size(); ++i) {
            const int pred = dec(i) >= 0.0 ? +1 : -1;
            if (pred != *test.items[i].label) ++wrong;
        }
        return static_cast<double>(wrong) / test.items.size();
    }
    const auto predictor = build_classifier(method, grid, point, train, fit_options);
    return test_error(predictor, test);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::string MethodSpec::tag() const {
    if (fixed.empty()) return name;
    std::string t = name + "[";
    bool first = true;
    for (const auto& [k, v] : fixed) {
        if (!first) t += ",";
        t += k + "=" + format_param(v);
        first = false;
    }
    return t + "]";
}

SpectralSpec ScenarioSpec::law() const {
    SpectralSpec spec = scenario == 1 ? scenario1(param) : scenario2(param);
    return cross ? cross_basis(spec) : spec;
}

std::string ScenarioSpec::tag() const {
    std::string t = scenario == 1 ? "s1(gamma=" : "s2(mu=";
    t += format_param(param);
    t += ")";
    if (cross) t += "+xb";
    return t;
}

Plan plan_from_json(const nlohmann::json& j) {
    Plan plan;
    for (const auto& s : j.at("scenarios")) {
        ScenarioSpec sc;
        sc.scenario = s.at("scenario").get<int>();
        if (sc.scenario == 1)
            sc.param = s.at("gamma").get<double>();
        else if (sc.scenario == 2)
            sc.param = s.at("mu").get<double>();
        else
            throw InvalidParameter("scenario must be 1 or 2");
        sc.cross = s.value("cross_basis", false);
        plan.scenarios.push_back(sc);
    }
    if (j.contains("n_grid")) plan.n_grid = j.at("n_grid").get<std::vector<int>>();
    for (std::size_t i = 1; i < plan.n_grid.size(); ++i)
        if (plan.n_grid[i] <= plan.n_grid[i - 1])
            throw InvalidParameter("n_grid must be strictly increasing");
    plan.repetitions = j.value("repetitions", plan.repetitions);
    plan.m_test = j.value("m_test", plan.m_test);
    plan.m_val = j.value("m_val", plan.m_val);
    if (plan.repetitions < 1 || plan.m_test < 1 || plan.m_val < 1)
        throw InvalidParameter("repetitions, m_test and m_val must be >= 1");
    plan.master_seed = j.value("master_seed", plan.master_seed);
    plan.out_dir = j.value("out_dir", plan.out_dir);
    plan.threads = j.value("threads", plan.threads);
    plan.regime_gap = j.value("regime_gap", plan.regime_gap);
    if (j.contains("cv_fit")) {
        plan.cv_fit.max_iter = j.at("cv_fit").value("max_iter", plan.cv_fit.max_iter);
        plan.cv_fit.grad_tol = j.at("cv_fit").value("grad_tol", plan.cv_fit.grad_tol);
    }
    if (j.contains("final_fit")) {
        plan.final_fit.max_iter =
            j.at("final_fit").value("max_iter", plan.final_fit.max_iter);
        plan.final_fit.grad_tol =
            j.at("final_fit").value("grad_tol", plan.final_fit.grad_tol);
    }
    for (const auto& m : j.at("methods")) {
        MethodSpec spec;
        spec.name = m.at("name").get<std::string>();
        if (m.contains("fixed"))
            for (const auto& [k, v] : m.at("fixed").items())
                spec.fixed[k] = v.get<double>();
        if (m.contains("grid")) {
            for (const auto& [k, v] : m.at("grid").items())
                spec.grid.axes.push_back({k, v.get<std::vector<double>>()});
        } else {
            spec.grid = default_grid(spec.name, spec.fixed);
        }
        plan.methods.push_back(std::move(spec));
    }
    if (plan.scenarios.empty() || plan.methods.empty() || plan.n_grid.empty())
        throw InvalidParameter("plan needs scenarios, methods and n_grid");
    return plan;
}

nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json j;
    j["scenarios"] = nlohmann::json::array();
    for (const auto& s : plan.scenarios) {
        nlohmann::json sj{{"scenario", s.scenario}, {"cross_basis", s.cross}};
        sj[s.scenario == 1 ? "gamma" : "mu"] = s.param;
        j["scenarios"].push_back(sj);
    }
    j["n_grid"] = plan.n_grid;
    j["repetitions"] = plan.repetitions;
    j["m_test"] = plan.m_test;
    j["m_val"] = plan.m_val;
    j["master_seed"] = plan.master_seed;
    j["out_dir"] = plan.out_dir;
    j["threads"] = plan.threads;
    j["regime_gap"] = plan.regime_gap;
    j["cv_fit"] = {{"max_iter", plan.cv_fit.max_iter}, {"grad_tol", plan.cv_fit.grad_tol}};
    j["final_fit"] = {{"max_iter", plan.final_fit.max_iter},
                      {"grad_tol", plan.final_fit.grad_tol}};
    j["methods"] = nlohmann::json::array();
    for (const auto& m : plan.methods) {
        nlohmann::json mj{{"name", m.name}};
        if (!m.fixed.empty()) mj["fixed"] = m.fixed;
        nlohmann::json gj;
        for (const auto& axis : m.grid.axes) gj[axis.name] = axis.values;
        mj["grid"] = gj;
        j["methods"].push_back(mj);
    }
    return j;
}

void finalize_stats(CurvePoint& point) {
    const std::size_t r = point.errors.size();
    double sum = 0.0;
    for (double e : point.errors) sum += e;
    point.mean = sum / r;
    double ss = 0.0;
    for (double e : point.errors) ss += (e - point.mean) * (e - point.mean);
    point.stddev = r > 1 ? std::sqrt(ss / (r - 1)) : 0.0;
}

double clamp_floor(int m_test) { return 1.0 / (2.0 * m_test); }

RateFit rate_fit(const ErrorCurve& curve, double r2_gap) {
    if (curve.points.size() < 3)
        throw InsufficientData("rate_fit needs at least 3 sample sizes");
    const double floor = clamp_floor(std::max(1, curve.m_test));
    std::vector<double> n, log_n, log_e;
    for (const auto& pt : curve.points) {
        n.push_back(pt.n);
        log_n.push_back(std::log(static_cast<double>(pt.n)));
        log_e.push_back(std::log(std::max(pt.mean, floor)));
    }
    const OlsFit fe = ols(n, log_e);
    const OlsFit fp = ols(log_n, log_e);

    RateFit out;
    out.b_exp = -fe.slope;
    out.r2_exp = fe.r2;
    out.b_poly = -fp.slope;
    out.r2_poly = fp.r2;
    if (out.r2_exp >= out.r2_poly + r2_gap && out.b_exp > 0.0)
        out.regime = Regime::Exponential;
    else if (out.r2_poly >= out.r2_exp + r2_gap && out.b_poly > 0.0)
        out.regime = Regime::Polynomial;
    else if (std::abs(fe.slope) <= 1e-3 && std::abs(fp.slope) <= 1e-3)
        out.regime = Regime::Flat;
    return out;
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::Exponential: return "exponential";
        case Regime::Polynomial: return "polynomial";
        case Regime::Flat: return "flat";
        default: return "undetermined";
    }
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t method_idx,
                        std::size_t scenario_idx, std::size_t n_idx,
                        std::size_t repetition_idx) {
    std::uint64_t s = Rng::derive(master_seed, 0xce11);
    s = Rng::derive(s, method_idx);
    s = Rng::derive(s, scenario_idx);
    s = Rng::derive(s, n_idx);
    return Rng::derive(s, repetition_idx);
}

double test_error(const std::function<int(const FuncObs&)>& predictor,
                  const Dataset& data) {
    if (data.items.empty()) throw InvalidParameter("empty test set");
    int wrong = 0;
    for (const auto& obs : data.items)
        if (predictor(obs) != *obs.label) ++wrong;
    return static_cast<double>(wrong) / data.items.size();
}

std::function<int(const FuncObs&)> build_classifier(const MethodSpec& method,
                                                    const Grid& grid,
                                                    const GridPoint& point,
                                                    const Dataset& train,
                                                    const FitOptions& fit_options) {
    if (method.name == "rkhs") {
        KernelSpec kernel{hyper(method, grid, point, "h"), CoefficientMode{}};
        auto model = std::make_shared<RkhsModel>(
            fit(train.items, labels_of(train), kernel,
                hyper(method, grid, point, "lambda"), PenaltyMode::SumSquares,
                fit_options));
        return [model](const FuncObs& x) { return predict(*model, x); };
    }
    if (method.name == "gp_laplace") {
        KernelSpec kernel{hyper(method, grid, point, "h"), CoefficientMode{}};
        std::shared_ptr<BaselineModel> model = fit_gp_laplace(train, kernel);
        return [model](const FuncObs& x) { return model->predict(x); };
    }
    if (method.name == "const_plus") return [](const FuncObs&) { return +1; };
    const int n = static_cast<int>(train.items.size());
    const int J = static_cast<int>(train.items.front().coeffs.size());
    const auto clamp_p = [&](double p) {
        return std::max(1, std::min(static_cast<int>(p), std::min(J, n - 1)));
    };
    std::shared_ptr<BaselineModel> model;
    if (method.name == "centroid")
        model = fit_centroid(train, clamp_p(hyper(method, grid, point, "p")));
    else if (method.name == "pls_centroid")
        model = fit_pls_centroid(train, clamp_p(hyper(method, grid, point, "p")));
    else if (method.name == "lda")
        model = fit_lda(train, clamp_p(hyper(method, grid, point, "p")));
    else if (method.name == "kde_bayes")
        model = fit_kde_bayes(train, clamp_p(hyper(method, grid, point, "p")),
                              hyper(method, grid, point, "bw"));
    else
        throw InvalidParameter("unknown method: " + method.name);
    return [model](const FuncObs& x) { return model->predict(x); };
}

double run_repetition(const Plan& plan, const MethodSpec& method,
                      const ScenarioSpec& scenario, int n_per_class,
                      std::uint64_t seed) {
    const SpectralSpec spec = scenario.law();
    Dataset train = sample_balanced(spec, n_per_class, Rng::derive(seed, 1));
    Dataset test =
        sample_balanced(spec, (plan.m_test + 1) / 2, Rng::derive(seed, 2));

    GridPoint chosen;
    if (!method.grid.axes.empty()) {
        FreshValidation mode{spec, plan.m_val, Rng::derive(seed, 3)};
        // all coefficient-space methods need a common representation when
        // the two classes live on different bases
        if (scenario.cross) {
            // draw the shared validation set here so it can be transformed
            Dataset raw_val = sample_balanced(spec, (plan.m_val + 1) / 2,
                                              Rng::derive(mode.seed, 0x5e1ec7));
            train = to_grid_features(train, kCrossGridPoints);
            test = to_grid_features(test, kCrossGridPoints);
            raw_val = to_grid_features(raw_val, kCrossGridPoints);
            double best = std::numeric_limits<double>::infinity();
            // same exhaustive search; select() would re-draw an untransformed set
            const Grid& grid = method.grid;
            const std::size_t total = grid.size();
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t rem = flat;
                GridPoint p;
                p.values.resize(grid.axes.size());
                for (std::size_t a = grid.axes.size(); a-- > 0;) {
                    p.values[a] = grid.axes[a].values[rem % grid.axes[a].values.size()];
                    rem /= grid.axes[a].values.size();
                }
                double err = 1.0;
                try {
                    err = eval_error(method, grid, p, train, raw_val, plan.cv_fit);
                } catch (const std::exception&) {
                }
                if (err < best) {
                    best = err;
                    chosen = p;
                }
            }
        } else {
            const FitEval fit_eval = [&](const GridPoint& p, const Dataset& tr,
                                         const Dataset& va) {
                return eval_error(method, method.grid, p, tr, va, plan.cv_fit);
            };
            chosen = select(fit_eval, method.grid, mode, train).chosen;
        }
    } else if (scenario.cross) {
        train = to_grid_features(train, kCrossGridPoints);
        test = to_grid_features(test, kCrossGridPoints);
    }
    return eval_error(method, method.grid, chosen, train, test, plan.final_fit);
}

RunResult run(const Plan& plan) {
    struct Task {
        std::size_t mi, si, ni, ri;
    };
    std::vector<Task> tasks;
    for (std::size_t mi = 0; mi < plan.methods.size(); ++mi)
        for (std::size_t si = 0; si < plan.scenarios.size(); ++si)
            for (std::size_t ni = 0; ni < plan.n_grid.size(); ++ni)
                for (std::size_t ri = 0; ri < static_cast<std::size_t>(plan.repetitions); ++ri)
                    tasks.push_back({mi, si, ni, ri});

    std::vector<double> errors(tasks.size(), 1.0);
    std::vector<char> failed(tasks.size(), 0);
    std::vector<double> task_seconds(tasks.size(), 0.0);

    const unsigned n_threads =
        plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                         : std::max(1u, std::thread::hardware_concurrency());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            const std::uint64_t seed =
                cell_seed(plan.master_seed, task.mi, task.si, task.ni, task.ri);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                errors[t] = run_repetition(plan, plan.methods[task.mi],
                                           plan.scenarios[task.si],
                                           plan.n_grid[task.ni], seed);
            } catch (const std::exception&) {
                errors[t] = 1.0;
                failed[t] = 1;
            }
            task_seconds[t] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    RunResult result;
    nlohmann::json cell_times = nlohmann::json::array();
    std::size_t t = 0;
    for (std::size_t mi = 0; mi < plan.methods.size(); ++mi)
        for (std::size_t si = 0; si < plan.scenarios.size(); ++si) {
            ErrorCurve curve;
            curve.method = plan.methods[mi].tag();
            curve.scenario = plan.scenarios[si].tag();
            curve.param = plan.scenarios[si].param;
            curve.m_test = plan.m_test;
            for (std::size_t ni = 0; ni < plan.n_grid.size(); ++ni) {
                CurvePoint pt;
                pt.n = plan.n_grid[ni];
                double secs = 0.0;
                for (int ri = 0; ri < plan.repetitions; ++ri, ++t) {
                    pt.errors.push_back(errors[t]);
                    pt.any_failed = pt.any_failed || failed[t];
                    secs += task_seconds[t];
                }
                finalize_stats(pt);
                cell_times.push_back({{"method", curve.method},
                                      {"scenario", curve.scenario},
                                      {"n", pt.n},
                                      {"seconds", secs}});
                curve.points.push_back(std::move(pt));
            }
            result.curves.push_back(std::move(curve));
        }

    const nlohmann::json config = plan_to_json(plan);
    result.manifest = {{"config_hash", fnv1a(config.dump())},
                       {"master_seed", plan.master_seed},
                       {"threads", n_threads},
                       {"cell_wall_time", cell_times}};
    return result;
}

void export_csv(const std::vector<ErrorCurve>& curves, const std::string& long_path,
                const std::string& summary_path, double r2_gap) {
    if (curves.empty()) throw InvalidParameter("no curves to export");
    std::ofstream out(long_path);
    if (!out) throw IoError("cannot open for writing: " + long_path);
    out << "method,scenario,param,n,rep,error\n";
    for (const auto& curve : curves)
        for (const auto& pt : curve.points)
            for (std::size_t r = 0; r < pt.errors.size(); ++r)
                out << curve.method << ',' << curve.scenario << ','
                    << format_double(curve.param) << ',' << pt.n << ',' << r << ','
                    << format_double(pt.errors[r]) << '\n';
    if (!out) throw IoError("write failed: " + long_path);

    std::ofstream sum(summary_path);
    if (!sum) throw IoError("cannot open for writing: " + summary_path);
    sum << "method,scenario,param,n,mean,std,regime,b_exp,r2_exp,b_poly,r2_poly\n";
    for (const auto& curve : curves) {
        RateFit rf;
        bool have_rf = false;
        if (curve.points.size() >= 3) {
            rf = rate_fit(curve, r2_gap);
            have_rf = true;
        }
        for (const auto& pt : curve.points) {
            sum << curve.method << ',' << curve.scenario << ','
                << format_double(curve.param) << ',' << pt.n << ','
                << format_double(pt.mean) << ',' << format_double(pt.stddev) << ',';
            if (have_rf)
                sum << regime_name(rf.regime) << ',' << format_double(rf.b_exp) << ','
                    << format_double(rf.r2_exp) << ',' << format_double(rf.b_poly)
                    << ',' << format_double(rf.r2_poly);
            else
                sum << ",,,,";
            sum << '\n';
        }
    }
    if (!sum) throw IoError("write failed: " + summary_path);
}

std::vector<ErrorCurve> import_csv(const std::string& long_path, int m_test) {
    std::ifstream in(long_path);
    if (!in) throw IoError("cannot open for reading: " + long_path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV: " + long_path);

    std::vector<ErrorCurve> curves;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string method, scenario, field;
        std::getline(ss, method, ',');
        std::getline(ss, scenario, ',');
        std::getline(ss, field, ',');
        const double param = std::stod(field);
        std::getline(ss, field, ',');
        const int n = std::stoi(field);
        std::getline(ss, field, ',');  // rep index, implied by order
        std::getline(ss, field, ',');
        const double error = std::stod(field);

        if (curves.empty() || curves.back().method != method ||
            curves.back().scenario != scenario) {
            curves.push_back({method, scenario, param, m_test, {}});
        }
        ErrorCurve& curve = curves.back();
        if (curve.points.empty() || curve.points.back().n != n) {
            curve.points.push_back({});
            curve.points.back().n = n;
        }
        curve.points.back().errors.push_back(error);
    }
    for (auto& curve : curves)
        for (auto& pt : curve.points) finalize_stats(pt);
    return curves;
}

void export_svg(const std::vector<ErrorCurve>& curves, const std::string& path,
                SvgAxes axes) {
    if (curves.empty()) throw InvalidParameter("no curves to export");
    const int width = 800, height = 560;
    const int ml = 70, mr = 200, mt = 20, mb = 50;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    const auto x_of = [&](int n) {
        return axes == SvgAxes::LogLog ? std::log(static_cast<double>(n))
                                       : static_cast<double>(n);
    };
    for (const auto& curve : curves) {
        const double floor = clamp_floor(std::max(1, curve.m_test));
        for (const auto& pt : curve.points) {
            xmin = std::min(xmin, x_of(pt.n));
            xmax = std::max(xmax, x_of(pt.n));
            const double y = std::log(std::max(pt.mean, floor));
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax <= ymin) { ymin -= 0.5; ymax += 0.5; }

    const auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    const auto py = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    static const char* kDashes[] = {"", "8,4", "2,3", "8,4,2,4", "12,3", "4,4"};
    static const char* kColors[] = {"#1b6ca8", "#c0392b", "#27ae60",
                                    "#8e44ad", "#d35400", "#2c3e50"};
    constexpr int kStyles = 6;

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">"
        << (axes == SvgAxes::LogLog ? "log n (natural log)" : "n") << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (mt + height - mb) / 2
        << ")\">log error (natural log)</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        const double floor = clamp_floor(std::max(1, curve.m_test));
        const char* dash = kDashes[c % kStyles];
        const char* color = kColors[c % kStyles];
        if (curve.points.size() >= 2) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
            if (dash[0]) out << " stroke-dasharray=\"" << dash << "\"";
            out << " points=\"";
            for (const auto& pt : curve.points)
                out << px(x_of(pt.n)) << ',' << py(std::log(std::max(pt.mean, floor)))
                    << ' ';
            out << "\"/>\n";
        }
        for (const auto& pt : curve.points)
            out << "<circle cx=\"" << px(x_of(pt.n)) << "\" cy=\""
                << py(std::log(std::max(pt.mean, floor))) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        // legend
        const double ly = mt + 18 + 18 * static_cast<double>(c);
        out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
            << width - mr + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"";
        if (dash[0]) out << " stroke-dasharray=\"" << dash << "\"";
        out << "/>\n";
        out << "<text x=\"" << width - mr + 46 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\">" << curve.method << " " << curve.scenario
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace fdc
