#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fdc/conditions.hpp"
#include "fdc/errors.hpp"
#include "fdc/experiment.hpp"
#include "fdc/io.hpp"

namespace fs = std::filesystem;
using fdc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fdc::IoError("cannot open config: " + path);
    return json::parse(in);
}

// flat key=value overrides; values parsed as JSON when possible
void apply_overrides(json& config, const std::vector<std::string>& overrides) {
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw fdc::InvalidParameter("override must be key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
            config[key] = json::parse(value);
        } catch (const json::parse_error&) {
            config[key] = value;
        }
    }
}

void reject_unknown_keys(const json& config, const std::vector<std::string>& known) {
    for (const auto& [key, value] : config.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw fdc::InvalidParameter("unknown config key: " + key);
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw fdc::IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw fdc::IoError("write failed: " + path);
}

// resolved config lands next to the primary output for provenance
void write_resolved_config(const json& config, const std::string& out_path) {
    const fs::path p(out_path);
    const fs::path cfg = p.parent_path() / (p.stem().string() + ".config.json");
    write_text(cfg.string(), config.dump(2) + "\n");
}

fdc::SpectralSpec spec_from_config(const json& config) {
    const int scenario = config.at("scenario").get<int>();
    fdc::SpectralSpec spec;
    if (scenario == 1)
        spec = fdc::scenario1(config.at("gamma").get<double>());
    else if (scenario == 2)
        spec = fdc::scenario2(config.at("mu").get<double>());
    else
        throw fdc::InvalidParameter("scenario must be 1 or 2");
    if (config.value("cross_basis", false)) spec = fdc::cross_basis(spec);
    return spec;
}

json series_to_json(const fdc::SeriesVerdict& verdict) {
    const char* name = verdict.verdict == fdc::SeriesClass::Divergent ? "divergent"
                       : verdict.verdict == fdc::SeriesClass::Convergent
                           ? "convergent"
                           : "inconclusive";
    return json{{"checkpoints", verdict.checkpoints},
                {"partial_sums", verdict.partial_sums},
                {"tail_exponent", verdict.tail_exponent},
                {"verdict", name}};
}

int cmd_gen(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_path, std::optional<std::uint64_t> seed_override) {
    json config = config_path.empty() ? json::object() : load_json(config_path);
    apply_overrides(config, overrides);
    if (seed_override) config["seed"] = *seed_override;
    reject_unknown_keys(config,
                        {"scenario", "gamma", "mu", "cross_basis", "n_per_class", "seed"});

    const fdc::SpectralSpec spec = spec_from_config(config);
    const int n_per_class = config.at("n_per_class").get<int>();
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();

    const fdc::Dataset data = fdc::sample_balanced(spec, n_per_class, seed);
    fdc::write_dataset(data, out_path);
    write_resolved_config(config, out_path);
    return kExitOk;
}

int cmd_conditions(int scenario, double gamma, double mu, bool cross, long long m_max,
                   int margin_m, int n_probe, std::uint64_t seed) {
    json config{{"scenario", scenario}, {"cross_basis", cross}};
    fdc::SpectralSpec spec;
    json report;
    if (scenario == 1) {
        config["gamma"] = gamma;
        spec = fdc::scenario1(gamma);
        const auto series = fdc::dh_series(
            [](long long j) { return std::pow(static_cast<double>(j), -2.0); },
            [gamma](long long j) { return std::pow(static_cast<double>(j), -gamma); },
            m_max);
        report["series"] = series_to_json(series);
        report["power_law"] = fdc::dh_power_law(2.0, gamma);
    } else if (scenario == 2) {
        config["mu"] = mu;
        spec = fdc::scenario2(mu);
        const auto series = fdc::dh_series(
            [](long long j) { return std::pow(static_cast<double>(j), -2.0); },
            [mu](long long j) { return j == 1 ? mu : 0.0; }, m_max);
        report["series"] = series_to_json(series);
        report["bayes_risk"] = fdc::bayes_risk_scenario2(mu);
    } else {
        throw fdc::InvalidParameter("scenario must be 1 or 2");
    }
    if (cross) spec = fdc::cross_basis(spec);

    const auto margin = fdc::empirical_margin(spec, margin_m, n_probe, seed);
    json mj{{"M", margin.M}, {"empirical_margin", margin.empirical_margin}};
    if (margin.analytic_margin) mj["analytic_margin"] = *margin.analytic_margin;
    report["margin"] = mj;

    std::cout << report.dump(2) << std::endl;
    return kExitOk;
}

int cmd_fit(const std::string& train_path, double h, double lambda,
            const std::string& penalty, int max_iter, double grad_tol,
            const std::string& out_path) {
    const fdc::Dataset train = fdc::read_dataset(train_path);
    std::vector<int> labels;
    for (const auto& obs : train.items) {
        if (!obs.label) throw fdc::InvalidParameter("training data must be labeled");
        labels.push_back(*obs.label);
    }
    fdc::PenaltyMode mode;
    if (penalty == "sum_squares")
        mode = fdc::PenaltyMode::SumSquares;
    else if (penalty == "rkhs_quadratic")
        mode = fdc::PenaltyMode::RkhsQuadratic;
    else
        throw fdc::InvalidParameter("penalty must be sum_squares or rkhs_quadratic");

    const fdc::RkhsModel model =
        fdc::fit(train.items, labels, fdc::KernelSpec{h, fdc::CoefficientMode{}},
                 lambda, mode, fdc::FitOptions{max_iter, grad_tol});
    if (!model.fit_report.converged)
        std::cerr << "warning: solver did not reach grad_tol (best iterate kept)\n";
    write_text(out_path, fdc::model_to_json(model).dump(2) + "\n");
    return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_path) {
    const fdc::RkhsModel model = fdc::model_from_json(load_json(model_path));
    const fdc::Dataset data = fdc::read_dataset(data_path);
    const fdc::Vector dec = fdc::decision_values(model, data.items);

    int wrong = 0, labeled = 0;
    json preds = json::array();
    for (Eigen::Index i = 0; i < dec.size(); ++i) {
        const int pred = dec(i) >= 0.0 ? +1 : -1;
        preds.push_back(pred);
        if (data.items[i].label) {
            ++labeled;
            if (pred != *data.items[i].label) ++wrong;
        }
    }
    json report{{"n", data.items.size()}, {"predictions", preds}};
    if (labeled > 0) report["error"] = static_cast<double>(wrong) / labeled;
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& out_dir, std::optional<std::uint64_t> seed_override,
              int threads) {
    json config = load_json(config_path);
    apply_overrides(config, overrides);
    if (seed_override) config["master_seed"] = *seed_override;
    if (!out_dir.empty()) config["out_dir"] = out_dir;
    if (threads > 0) config["threads"] = threads;
    reject_unknown_keys(config, {"scenarios", "n_grid", "repetitions", "m_test", "m_val",
                                 "methods", "master_seed", "out_dir", "threads",
                                 "regime_gap", "cv_fit", "final_fit"});

    fdc::Plan plan = fdc::plan_from_json(config);
    if (plan.out_dir.empty()) plan.out_dir = ".";
    fs::create_directories(plan.out_dir);

    const fdc::RunResult result = fdc::run(plan);
    const fs::path dir(plan.out_dir);
    fdc::export_csv(result.curves, (dir / "errors_long.csv").string(),
                    (dir / "errors_summary.csv").string(), plan.regime_gap);
    write_text((dir / "manifest.json").string(), result.manifest.dump(2) + "\n");
    write_text((dir / "resolved_config.json").string(),
               fdc::plan_to_json(plan).dump(2) + "\n");
    std::cerr << "wrote " << (dir / "errors_long.csv").string() << " and summary\n";
    return kExitOk;
}

int cmd_plot(const std::string& csv_path, int m_test, const std::string& axes,
             const std::string& out_path) {
    const auto curves = fdc::import_csv(csv_path, m_test);
    fdc::SvgAxes mode;
    if (axes == "loglog")
        mode = fdc::SvgAxes::LogLog;
    else if (axes == "loglinear")
        mode = fdc::SvgAxes::LogLinear;
    else
        throw fdc::InvalidParameter("axes must be loglog or loglinear");
    fdc::export_svg(curves, out_path, mode);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional-data classification lab"};
    app.require_subcommand(1);

    std::string config_path, out_path, train_path, model_path, data_path, csv_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed = 0;
    int threads = 0;

    auto* gen = app.add_subcommand("gen", "Generate a labeled dataset (JSON lines)");
    gen->add_option("--config", config_path, "JSON config");
    gen->add_option("--set", overrides, "key=value config override");
    gen->add_option("--out", out_path, "output dataset path")->required();
    gen->add_option("--seed", seed_override, "seed override");

    auto* cond = app.add_subcommand("conditions", "Evaluate the divergence/margin conditions");
    int scenario = 1;
    double gamma = 1.3, mu = 1.2;
    bool cross = false;
    long long m_max = 1000000;
    int margin_m = fdc::kDefaultTruncation, n_probe = 10000;
    cond->add_option("--scenario", scenario, "1 or 2")->required();
    cond->add_option("--gamma", gamma, "scenario 1 mean decay");
    cond->add_option("--mu", mu, "scenario 2 mean shift");
    cond->add_flag("--cross-basis", cross, "cosine basis for the minus class");
    cond->add_option("--m-max", m_max, "series truncation");
    cond->add_option("--margin-M", margin_m, "truncation for the margin probe");
    cond->add_option("--n-probe", n_probe, "margin probe sample size");
    cond->add_option("--seed", seed, "probe seed");

    auto* fit_cmd = app.add_subcommand("fit", "Fit the kernel classifier on a dataset");
    double h = 1.0, lambda = 0.03125;
    std::string penalty = "sum_squares";
    int max_iter = 10000;
    double grad_tol = 1e-6;
    fit_cmd->add_option("--train", train_path, "training dataset")->required();
    fit_cmd->add_option("--bandwidth", h, "kernel bandwidth");
    fit_cmd->add_option("--lambda", lambda, "penalty weight");
    fit_cmd->add_option("--penalty", penalty, "sum_squares | rkhs_quadratic");
    fit_cmd->add_option("--max-iter", max_iter, "solver iteration cap");
    fit_cmd->add_option("--grad-tol", grad_tol, "solver gradient tolerance");
    fit_cmd->add_option("--out", out_path, "model output path")->required();

    auto* eval_cmd = app.add_subcommand("eval", "Score a fitted model on a dataset");
    eval_cmd->add_option("--model", model_path, "model JSON")->required();
    eval_cmd->add_option("--data", data_path, "dataset to score")->required();
    eval_cmd->add_option("--out", out_path, "report path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo experiment plan");
    sweep->add_option("--config", config_path, "plan JSON")->required();
    sweep->add_option("--set", overrides, "key=value config override");
    sweep->add_option("--out", out_path, "output directory");
    sweep->add_option("--seed", seed_override, "master seed override");
    sweep->add_option("--threads", threads, "worker count (default: hardware)");

    auto* plot = app.add_subcommand("plot", "Render an error-curve SVG from long CSV");
    std::string axes = "loglog";
    int m_test = 500;
    plot->add_option("--csv", csv_path, "long-form CSV")->required();
    plot->add_option("--m-test", m_test, "test size used for the zero clamp");
    plot->add_option("--axes", axes, "loglog | loglinear");
    plot->add_option("--out", out_path, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(config_path, overrides, out_path, seed_override);
        if (cond->parsed())
            return cmd_conditions(scenario, gamma, mu, cross, m_max, margin_m, n_probe,
                                  seed);
        if (fit_cmd->parsed())
            return cmd_fit(train_path, h, lambda, penalty, max_iter, grad_tol, out_path);
        if (eval_cmd->parsed()) return cmd_eval(model_path, data_path, out_path);
        if (sweep->parsed())
            return cmd_sweep(config_path, overrides, out_path, seed_override, threads);
        if (plot->parsed()) return cmd_plot(csv_path, m_test, axes, out_path);
    } catch (const fdc::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
