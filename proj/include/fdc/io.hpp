#pragma once

#include <string>

#include <json.hpp>

#include "fdc/basis.hpp"
#include "fdc/datagen.hpp"
#include "fdc/rkhs.hpp"

namespace fdc {

using json = nlohmann::json;

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

std::string family_name(BasisFamily family);
BasisFamily family_from_name(const std::string& name);

// Flat record: {"family": ..., "J": ..., "coeffs": [...], "label": ...}
json obs_to_json(const FuncObs& obs);
FuncObs obs_from_json(const json& j);

// One JSON object per line.
void write_dataset(const Dataset& data, const std::string& path);
Dataset read_dataset(const std::string& path);

json spec_to_json(const SpectralSpec& spec);
SpectralSpec spec_from_json(const json& j);

json ip_mode_to_json(const IpMode& mode);
IpMode ip_mode_from_json(const json& j);

// Model with embedded training coefficients and a content hash over them.
json model_to_json(const RkhsModel& model);
RkhsModel model_from_json(const json& j);

// FNV-1a over the canonical serialized training set; used to detect a
// model/dataset mismatch on reload.
std::uint64_t dataset_content_hash(const std::vector<FuncObs>& items);

}  // namespace fdc
