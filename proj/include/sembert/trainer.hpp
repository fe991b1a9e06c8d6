// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "sembert/model.hpp"

namespace sembert {

struct EpochLog {
  std::size_t epoch = 0;
  // Mean per-example training loss over the epoch.
  double loss = 0.0;
  double train_metric = 0.0;
  std::optional<double> dev_metric;
  double learning_rate = 0.0;
};

nlohmann::ordered_json to_json(const EpochLog& log);

struct TrainResult {
  std::vector<EpochLog> epochs;
  // Epoch whose parameters the model holds after training (1-based).
  std::size_t kept_epoch = 0;
  std::optional<double> best_dev_metric;
  bool stopped_early = false;
  std::size_t steps = 0;
};

struct EvalResult {
  // The configured metric; mean SQuAD F1 for span tasks.
  double metric = 0.0;
  double exact_match = 0.0;
  std::vector<Prediction> predictions;
};

std::vector<PreparedExample> prepare_all(const Model& model, const std::vector<TaskExample>& data);

EvalResult evaluate(const Model& model, std::span<const PreparedExample> data, double tau = 0.0);

// Adam under the warm-up/linear-decay schedule, mini-batches from a seeded
// shuffle each epoch. With a dev set the parameters of the best dev epoch are
// restored at the end. Throws DivergenceError on a non-finite loss.
TrainResult train(Model& model, std::span<const PreparedExample> train_set,
                  std::span<const PreparedExample> dev_set,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace sembert
