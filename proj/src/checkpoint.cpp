// SPDX-License-Identifier: Apache-2.0
#include "sembert/checkpoint.hpp"

#include <algorithm>
#include <fstream>

#include "sembert/error.hpp"

namespace sembert {

namespace {

constexpr const char* kFormat = "sembert-checkpoint";
constexpr int kVersion = 1;

}  // namespace

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["config"] = config_to_json(model.config());
  j["vocab"] = model.vocab().entries();
  j["labels"] = model.labels().labels();
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& p : model.all_params()) {
    auto values = p.tensor.values();
    params[p.name] = {{"shape", p.tensor.shape()},
                      {"values", std::vector<double>(values.begin(), values.end())}};
  }
  j["params"] = std::move(params);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("checkpoint " + path.string() + ": " + e.what());
  }
  try {
    if (j.at("format") != kFormat) throw ValidationError("not a sembert checkpoint");
    if (j.at("version") != kVersion) {
      throw ValidationError("unsupported checkpoint version " + j.at("version").dump());
    }
    Model model =
        Model::create(config_from_json(j.at("config")),
                      Vocab(j.at("vocab").get<std::vector<std::string>>()),
                      LabelVocab(j.at("labels").get<std::vector<std::string>>()));
    const auto& stored = j.at("params");
    for (auto& p : model.all_params()) {
      if (!stored.contains(p.name)) throw ValidationError("checkpoint lacks parameter " + p.name);
      const auto& entry = stored.at(p.name);
      const auto shape = entry.at("shape").get<num::Shape>();
      const auto values = entry.at("values").get<std::vector<double>>();
      if (shape != p.tensor.shape() || values.size() != p.tensor.size()) {
        throw ValidationError("parameter " + p.name + " has shape " + num::shape_str(shape) +
                              ", model expects " + num::shape_str(p.tensor.shape()));
      }
      std::copy(values.begin(), values.end(), p.tensor.data().begin());
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace sembert
