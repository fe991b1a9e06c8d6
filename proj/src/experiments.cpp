// SPDX-License-Identifier: Apache-2.0
#include "sembert/experiments.hpp"

namespace sembert {

namespace {

constexpr std::uint64_t kNoiseStream = 0x4e4f495345ULL;

SweepRow row_for(std::string name, double value, const RunOutcome& out) {
  SweepRow row;
  row.name = std::move(name);
  row.value = value;
  row.dev_metric = out.metric;
  row.epochs_run = out.train.epochs.size();
  if (!out.train.epochs.empty()) {
    row.train_metric = out.train.epochs[out.train.kept_epoch - 1].train_metric;
  }
  return row;
}

}  // namespace

RunOutcome run_once(const RunConfig& config, const std::vector<TaskExample>& train_set,
                    const std::vector<TaskExample>& dev_set, const EpochCallback& on_epoch,
                    const std::string& run_name) {
  Vocab vocab = resolve_vocab(config, {&train_set, &dev_set});
  Model model = Model::create(config, std::move(vocab), resolve_labels(config));
  const auto train_prepared = prepare_all(model, train_set);
  const auto dev_prepared = prepare_all(model, dev_set);
  std::function<void(const EpochLog&)> cb;
  if (on_epoch) cb = [&](const EpochLog& log) { on_epoch(run_name, log); };
  TrainResult result = train(model, train_prepared, dev_prepared, cb);
  const double metric =
      dev_prepared.empty() ? evaluate(model, train_prepared).metric
                           : evaluate(model, dev_prepared).metric;
  return {std::move(model), std::move(result), metric};
}

std::vector<SweepRow> sweep_m(const RunConfig& config, const std::vector<TaskExample>& train_set,
                              const std::vector<TaskExample>& dev_set,
                              const std::vector<std::size_t>& m_values,
                              const EpochCallback& on_epoch) {
  std::vector<SweepRow> rows;
  for (std::size_t m : m_values) {
    RunConfig c = config;
    c.m = m;
    const std::string name = "m=" + std::to_string(m);
    rows.push_back(
        row_for(name, static_cast<double>(m), run_once(c, train_set, dev_set, on_epoch, name)));
  }
  return rows;
}

std::vector<TaskExample> with_label_noise(const std::vector<TaskExample>& data, double p,
                                          const LabelVocab& labels, num::Rng& rng) {
  std::vector<TaskExample> out = data;
  for (auto& ex : out) {
    ex.srl_a = inject_noise(ex.srl_a, p, labels, rng);
    ex.srl_b = inject_noise(ex.srl_b, p, labels, rng);
  }
  return out;
}

std::vector<SweepRow> sweep_noise(const RunConfig& config,
                                  const std::vector<TaskExample>& train_set,
                                  const std::vector<TaskExample>& dev_set,
                                  const std::vector<double>& p_values,
                                  const EpochCallback& on_epoch) {
  const LabelVocab labels = resolve_labels(config);
  std::vector<SweepRow> rows;
  for (double p : p_values) {
    num::Rng rng(config.seed ^ kNoiseStream);
    const auto noisy_train = with_label_noise(train_set, p, labels, rng);
    const auto noisy_dev = with_label_noise(dev_set, p, labels, rng);
    std::string name = "p=" + std::to_string(p);
    name.erase(name.find_last_not_of('0') + 1);
    if (name.back() == '.') name.pop_back();
    rows.push_back(row_for(name, p, run_once(config, noisy_train, noisy_dev, on_epoch, name)));
  }
  return rows;
}

std::vector<SweepRow> ablate(const RunConfig& config, const std::vector<TaskExample>& train_set,
                             const std::vector<TaskExample>& dev_set,
                             const EpochCallback& on_epoch) {
  std::vector<SweepRow> rows;
  for (auto mode : {FusionMode::Baseline, FusionMode::SubwordAblation, FusionMode::SemBert}) {
    RunConfig c = config;
    c.fusion_mode = mode;
    const std::string name = to_string(mode);
    rows.push_back(row_for(name, 0.0, run_once(c, train_set, dev_set, on_epoch, name)));
  }
  return rows;
}

nlohmann::ordered_json to_json(const SweepRow& row) {
  nlohmann::ordered_json j;
  j["name"] = row.name;
  j["value"] = row.value;
  j["dev_metric"] = row.dev_metric;
  j["train_metric"] = row.train_metric;
  j["epochs_run"] = row.epochs_run;
  return j;
}

}  // namespace sembert
