// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sembert/encoder.hpp"
#include "sembert/fusion.hpp"
#include "sembert/heads.hpp"
#include "sembert/metrics.hpp"
#include "sembert/semantic_embedder.hpp"

namespace sembert {

// Every knob of a run. The JSON form uses these field names as flat keys.
struct RunConfig {
  TaskKind task_kind = TaskKind::Classification;
  std::size_t num_labels = 3;
  MetricKind metric = MetricKind::Accuracy;
  FusionMode fusion_mode = FusionMode::SemBert;

  // Semantic side.
  std::size_t m = 3;
  std::size_t d_srl = 10;
  std::size_t hidden = 10;
  std::size_t d = 10;

  // Aligner.
  std::size_t kernel_size = 3;
  std::size_t d_w = 48;

  // Encoder.
  std::size_t d_enc = 48;
  std::size_t n_layers = 2;
  std::size_t n_heads = 4;
  std::size_t d_ff = 96;
  std::size_t max_positions = 128;

  // Optimization.
  double learning_rate = 1e-3;
  double warmup_fraction = 0.1;
  double weight_decay = 0.01;
  std::size_t batch_size = 16;
  std::size_t epochs = 3;
  // Stop once the train metric reaches this value; unset trains all epochs.
  std::optional<double> stop_train_metric;

  std::size_t max_len = 64;
  std::uint64_t seed = 42;
  std::size_t max_span_len = 30;
  // Wordpiece vocabulary file; empty derives one from the data.
  std::string vocab;
  // SRL label file; empty uses the standard 104-label inventory.
  std::string label_vocab;

  static constexpr std::size_t kMaxEpochs = 1000;

  void validate() const;
  EncoderConfig encoder_config(std::size_t vocab_size) const;
  EmbedderConfig embedder_config(std::size_t num_srl_labels) const;
};

// Keys are checked strictly: unknown keys and wrong types are rejected.
// Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace sembert
