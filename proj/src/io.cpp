#include "fdc/io.hpp"

#include <fstream>

#include "fdc/errors.hpp"

namespace fdc {

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector vector_from_json(const json& j) {
    Vector v(j.size());
    Eigen::Index i = 0;
    for (const auto& x : j) v(i++) = x.get<double>();
    return v;
}

std::string family_name(BasisFamily family) {
    return family == BasisFamily::SineOne ? "sine1" : "cosine1";
}

BasisFamily family_from_name(const std::string& name) {
    if (name == "sine1") return BasisFamily::SineOne;
    if (name == "cosine1") return BasisFamily::CosineOne;
    throw InvalidParameter("unknown basis family: " + name);
}

json obs_to_json(const FuncObs& obs) {
    json j{{"family", family_name(obs.basis.family)},
           {"J", obs.basis.truncation},
           {"coeffs", vector_to_json(obs.coeffs)}};
    if (obs.label) j["label"] = *obs.label;
    return j;
}

FuncObs obs_from_json(const json& j) {
    BasisId basis{family_from_name(j.at("family").get<std::string>()),
                  j.at("J").get<int>()};
    std::optional<int> label;
    if (j.contains("label")) label = j.at("label").get<int>();
    return make_obs(basis, vector_from_json(j.at("coeffs")), label);
}

void write_dataset(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& obs : data.items) out << obs_to_json(obs).dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    Dataset data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        data.items.push_back(obs_from_json(json::parse(line)));
        if (data.items.back().label) {
            (*data.items.back().label == 1 ? data.n_plus : data.n_minus) += 1;
        }
    }
    return data;
}

json spec_to_json(const SpectralSpec& spec) {
    return json{{"J", spec.J},
                {"theta", vector_to_json(spec.theta)},
                {"mu_plus", vector_to_json(spec.mu_plus)},
                {"mu_minus", vector_to_json(spec.mu_minus)},
                {"noise", spec.noise == NoiseLaw::StdNormal ? "std_normal" : "uniform_half"},
                {"basis_plus", family_name(spec.basis_plus.family)},
                {"basis_minus", family_name(spec.basis_minus.family)}};
}

SpectralSpec spec_from_json(const json& j) {
    SpectralSpec spec;
    spec.J = j.at("J").get<int>();
    spec.theta = vector_from_json(j.at("theta"));
    spec.mu_plus = vector_from_json(j.at("mu_plus"));
    spec.mu_minus = vector_from_json(j.at("mu_minus"));
    const std::string noise = j.at("noise").get<std::string>();
    if (noise == "std_normal")
        spec.noise = NoiseLaw::StdNormal;
    else if (noise == "uniform_half")
        spec.noise = NoiseLaw::UniformHalf;
    else
        throw InvalidParameter("unknown noise law: " + noise);
    spec.basis_plus = {family_from_name(j.at("basis_plus").get<std::string>()), spec.J};
    spec.basis_minus = {family_from_name(j.at("basis_minus").get<std::string>()), spec.J};
    validate(spec);
    return spec;
}

json ip_mode_to_json(const IpMode& mode) {
    if (std::holds_alternative<CoefficientMode>(mode)) return json{{"mode", "coefficient"}};
    return json{{"mode", "grid"}, {"m", std::get<GridMode>(mode).m}};
}

IpMode ip_mode_from_json(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "coefficient") return CoefficientMode{};
    if (mode == "grid") return GridMode{j.at("m").get<int>()};
    throw InvalidParameter("unknown inner-product mode: " + mode);
}

std::uint64_t dataset_content_hash(const std::vector<FuncObs>& items) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& obs : items) {
        const int fam = static_cast<int>(obs.basis.family);
        feed(&fam, sizeof fam);
        feed(&obs.basis.truncation, sizeof obs.basis.truncation);
        feed(obs.coeffs.data(), sizeof(double) * obs.coeffs.size());
        const int label = obs.label.value_or(0);
        feed(&label, sizeof label);
    }
    return h;
}

json model_to_json(const RkhsModel& model) {
    json train = json::array();
    for (const auto& obs : model.train_inputs) train.push_back(obs_to_json(obs));
    return json{
        {"method", "rkhs"},
        {"kernel", {{"bandwidth", model.kernel.bandwidth},
                    {"ip", ip_mode_to_json(model.kernel.ip_mode)}}},
        {"lambda", model.lambda},
        {"penalty",
         model.penalty_mode == PenaltyMode::SumSquares ? "sum_squares" : "rkhs_quadratic"},
        {"weights", vector_to_json(model.weights)},
        {"train_inputs", train},
        {"train_hash", dataset_content_hash(model.train_inputs)},
        {"fit_report", {{"iterations", model.fit_report.iterations},
                        {"final_objective", model.fit_report.final_objective},
                        {"final_grad_sup_norm", model.fit_report.final_grad_sup_norm},
                        {"converged", model.fit_report.converged}}}};
}

RkhsModel model_from_json(const json& j) {
    RkhsModel model;
    model.kernel.bandwidth = j.at("kernel").at("bandwidth").get<double>();
    model.kernel.ip_mode = ip_mode_from_json(j.at("kernel").at("ip"));
    model.lambda = j.at("lambda").get<double>();
    const std::string pen = j.at("penalty").get<std::string>();
    model.penalty_mode = pen == "sum_squares" ? PenaltyMode::SumSquares
                                              : PenaltyMode::RkhsQuadratic;
    for (const auto& item : j.at("train_inputs"))
        model.train_inputs.push_back(obs_from_json(item));
    model.weights = vector_from_json(j.at("weights"));
    if (model.weights.size() != static_cast<Eigen::Index>(model.train_inputs.size()))
        throw InvalidParameter("weight count does not match training inputs");
    if (j.contains("train_hash") &&
        j.at("train_hash").get<std::uint64_t>() != dataset_content_hash(model.train_inputs))
        throw InvalidParameter("training-set hash mismatch");
    if (j.contains("fit_report")) {
        const auto& fr = j.at("fit_report");
        model.fit_report.iterations = fr.at("iterations").get<int>();
        model.fit_report.final_objective = fr.at("final_objective").get<double>();
        model.fit_report.final_grad_sup_norm = fr.at("final_grad_sup_norm").get<double>();
        model.fit_report.converged = fr.at("converged").get<bool>();
    }
    return model;
}

}  // namespace fdc
