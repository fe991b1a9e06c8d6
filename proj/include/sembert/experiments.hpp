// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sembert/config.hpp"
#include "sembert/dataset.hpp"
#include "sembert/model.hpp"
#include "sembert/trainer.hpp"

namespace sembert {

struct RunOutcome {
  Model model;
  TrainResult train;
  // Metric of the kept parameters on dev, or on train without a dev set.
  double metric = 0.0;
};

using EpochCallback = std::function<void(const std::string& run, const EpochLog&)>;

// Builds the vocabulary, model and prepared data from scratch and trains.
RunOutcome run_once(const RunConfig& config, const std::vector<TaskExample>& train_set,
                    const std::vector<TaskExample>& dev_set, const EpochCallback& on_epoch = {},
                    const std::string& run_name = "run");

struct SweepRow {
  std::string name;
  double value = 0.0;
  double dev_metric = 0.0;
  double train_metric = 0.0;
  std::size_t epochs_run = 0;
};

std::vector<SweepRow> sweep_m(const RunConfig& config, const std::vector<TaskExample>& train_set,
                              const std::vector<TaskExample>& dev_set,
                              const std::vector<std::size_t>& m_values = {1, 2, 3, 4, 5},
                              const EpochCallback& on_epoch = {});

// Corrupts the SRL labels of both splits with inject_noise at each p, using a
// noise stream seeded from config.seed, then retrains from the same seed.
std::vector<SweepRow> sweep_noise(const RunConfig& config,
                                  const std::vector<TaskExample>& train_set,
                                  const std::vector<TaskExample>& dev_set,
                                  const std::vector<double>& p_values = {0.0, 0.2, 0.4},
                                  const EpochCallback& on_epoch = {});

std::vector<TaskExample> with_label_noise(const std::vector<TaskExample>& data, double p,
                                          const LabelVocab& labels, num::Rng& rng);

// baseline, subword_ablation and sembert under one seed and budget.
std::vector<SweepRow> ablate(const RunConfig& config, const std::vector<TaskExample>& train_set,
                             const std::vector<TaskExample>& dev_set,
                             const EpochCallback& on_epoch = {});

nlohmann::ordered_json to_json(const SweepRow& row);

}  // namespace sembert
