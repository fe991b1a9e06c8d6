// SPDX-License-Identifier: Apache-2.0
#include "sembert/config.hpp"

#include <fstream>
#include <set>

#include "sembert/error.hpp"

namespace sembert {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "task_kind", "num_labels",    "metric",        "fusion_mode",     "m",
      "d_srl",     "hidden",        "d",             "kernel_size",     "d_w",
      "d_enc",     "n_layers",      "n_heads",       "d_ff",            "max_positions",
      "learning_rate", "warmup_fraction", "weight_decay", "batch_size", "epochs",
      "stop_train_metric", "max_len", "seed",        "max_span_len",    "vocab",
      "label_vocab"};
  return keys;
}

void read(const json& j, const char* key, std::size_t& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ValidationError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

void read(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) {
    throw ValidationError(std::string("config key '") + key + "' must be a number");
  }
  out = j.at(key).get<double>();
}

void read(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_string()) {
    throw ValidationError(std::string("config key '") + key + "' must be a string");
  }
  out = j.at(key).get<std::string>();
}

template <typename Parse, typename T>
void read_enum(const json& j, const char* key, T& out, Parse parse) {
  std::string text;
  read(j, key, text);
  if (!text.empty()) out = parse(text);
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (epochs < 1 || epochs > kMaxEpochs) {
    fail("epochs must lie in [1, " + std::to_string(kMaxEpochs) + "]");
  }
  if (m < 1) fail("m must be at least 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0)) fail("warmup_fraction must lie in [0, 1]");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be non-negative");
  if (batch_size < 1) fail("batch_size must be at least 1");
  if (max_len < 3) fail("max_len must be at least 3");
  if (max_len > max_positions) {
    fail("max_len (" + std::to_string(max_len) + ") exceeds max_positions (" +
         std::to_string(max_positions) + ")");
  }
  if (kernel_size < 1) fail("kernel_size must be at least 1");
  if (d_w < 1 || d_srl < 1 || hidden < 1 || d < 1) fail("d_w, d_srl, hidden and d must be positive");
  if (max_span_len < 1) fail("max_span_len must be at least 1");
  if (task_kind == TaskKind::Classification && num_labels < 2) {
    fail("classification needs num_labels >= 2");
  }
  if (d_enc == 0 || n_heads == 0 || d_enc % n_heads != 0) {
    fail("d_enc must be a positive multiple of n_heads");
  }
  if (d_ff < 1) fail("d_ff must be positive");
}

EncoderConfig RunConfig::encoder_config(std::size_t vocab_size) const {
  EncoderConfig c;
  c.vocab_size = vocab_size;
  c.d_enc = d_enc;
  c.n_layers = n_layers;
  c.n_heads = n_heads;
  c.d_ff = d_ff;
  c.max_positions = max_positions;
  return c;
}

EmbedderConfig RunConfig::embedder_config(std::size_t num_srl_labels) const {
  return {num_srl_labels, d_srl, hidden, d, m};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known_keys().count(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  RunConfig c;
  read_enum(j, "task_kind", c.task_kind, parse_task_kind);
  read(j, "num_labels", c.num_labels);
  read_enum(j, "metric", c.metric, parse_metric_kind);
  read_enum(j, "fusion_mode", c.fusion_mode, parse_fusion_mode);
  read(j, "m", c.m);
  read(j, "d_srl", c.d_srl);
  read(j, "hidden", c.hidden);
  read(j, "d", c.d);
  read(j, "kernel_size", c.kernel_size);
  read(j, "d_w", c.d_w);
  read(j, "d_enc", c.d_enc);
  read(j, "n_layers", c.n_layers);
  read(j, "n_heads", c.n_heads);
  read(j, "d_ff", c.d_ff);
  read(j, "max_positions", c.max_positions);
  read(j, "learning_rate", c.learning_rate);
  read(j, "warmup_fraction", c.warmup_fraction);
  read(j, "weight_decay", c.weight_decay);
  read(j, "batch_size", c.batch_size);
  read(j, "epochs", c.epochs);
  if (j.contains("stop_train_metric") && !j.at("stop_train_metric").is_null()) {
    double v = 0.0;
    read(j, "stop_train_metric", v);
    c.stop_train_metric = v;
  }
  read(j, "max_len", c.max_len);
  read(j, "seed", c.seed);
  read(j, "max_span_len", c.max_span_len);
  read(j, "vocab", c.vocab);
  read(j, "label_vocab", c.label_vocab);
  c.validate();
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["task_kind"] = to_string(c.task_kind);
  j["num_labels"] = c.num_labels;
  j["metric"] = to_string(c.metric);
  j["fusion_mode"] = to_string(c.fusion_mode);
  j["m"] = c.m;
  j["d_srl"] = c.d_srl;
  j["hidden"] = c.hidden;
  j["d"] = c.d;
  j["kernel_size"] = c.kernel_size;
  j["d_w"] = c.d_w;
  j["d_enc"] = c.d_enc;
  j["n_layers"] = c.n_layers;
  j["n_heads"] = c.n_heads;
  j["d_ff"] = c.d_ff;
  j["max_positions"] = c.max_positions;
  j["learning_rate"] = c.learning_rate;
  j["warmup_fraction"] = c.warmup_fraction;
  j["weight_decay"] = c.weight_decay;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["stop_train_metric"] =
      c.stop_train_metric ? nlohmann::ordered_json(*c.stop_train_metric) : nullptr;
  j["max_len"] = c.max_len;
  j["seed"] = c.seed;
  j["max_span_len"] = c.max_span_len;
  j["vocab"] = c.vocab;
  j["label_vocab"] = c.label_vocab;
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write config file " + path.string());
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace sembert
