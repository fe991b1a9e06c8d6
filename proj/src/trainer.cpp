// SPDX-License-Identifier: Apache-2.0
#include "sembert/trainer.hpp"

#include <cmath>
#include <numeric>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"
#include "sembert/num/optim.hpp"

namespace sembert {

namespace {

constexpr std::uint64_t kShuffleStream = 0x53485546464c45ULL;

}  // namespace

nlohmann::ordered_json to_json(const EpochLog& log) {
  nlohmann::ordered_json j;
  j["epoch"] = log.epoch;
  j["loss"] = log.loss;
  j["train_metric"] = log.train_metric;
  j["dev_metric"] = log.dev_metric ? nlohmann::ordered_json(*log.dev_metric) : nullptr;
  j["learning_rate"] = log.learning_rate;
  return j;
}

std::vector<PreparedExample> prepare_all(const Model& model,
                                         const std::vector<TaskExample>& data) {
  std::vector<PreparedExample> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back(model.prepare(ex));
  return out;
}

EvalResult evaluate(const Model& model, std::span<const PreparedExample> data, double tau) {
  EvalResult result;
  if (data.empty()) return result;
  const auto& config = model.config();
  std::vector<double> preds, golds;
  double em = 0.0, f1 = 0.0;
  for (const auto& ex : data) {
    result.predictions.push_back(model.predict(ex, tau));
    const auto& p = result.predictions.back();
    switch (config.task_kind) {
      case TaskKind::Classification:
        preds.push_back(p.label);
        golds.push_back(ex.label);
        break;
      case TaskKind::Regression:
        preds.push_back(p.value);
        golds.push_back(ex.score);
        break;
      case TaskKind::Span: {
        auto s = squad_em_f1(p.text, ex.gold_texts);
        em += s.em;
        f1 += s.f1;
        break;
      }
    }
  }
  const double n = static_cast<double>(data.size());
  if (config.task_kind == TaskKind::Span) {
    result.metric = f1 / n;
    result.exact_match = em / n;
    return result;
  }
  try {
    result.metric = metric(config.metric, preds, golds);
  } catch (const DegenerateInputError&) {
    // Constant predictions carry no correlation.
    result.metric = 0.0;
  }
  return result;
}

TrainResult train(Model& model, std::span<const PreparedExample> train_set,
                  std::span<const PreparedExample> dev_set,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (train_set.empty()) throw PreconditionError("train: empty training set");
  const auto& config = model.config();
  const std::size_t n = train_set.size();
  const std::size_t batches = (n + config.batch_size - 1) / config.batch_size;
  num::ParamList params = model.params();
  num::Adam optimizer(params, {0.9, 0.999, 1e-8, config.weight_decay});
  num::WarmupLinearSchedule schedule(config.learning_rate, config.epochs * batches,
                                     config.warmup_fraction);
  num::Rng shuffle_rng(config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  std::vector<std::vector<double>> best_values;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double total_loss = 0.0;
    double lr = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(n, begin + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - begin);
      optimizer.zero_grad();
      for (std::size_t i = begin; i < end; ++i) {
        const auto& ex = train_set[order[i]];
        num::Tensor loss = model.loss(ex);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw DivergenceError("training diverged: loss " + std::to_string(value) +
                                " at epoch " + std::to_string(epoch) + ", step " +
                                std::to_string(result.steps + 1) + ", example \"" + ex.id +
                                "\"");
        }
        total_loss += value;
        num::affine(loss, scale).backward();
      }
      lr = schedule.at(result.steps);
      optimizer.step(lr);
      ++result.steps;
    }

    EpochLog log;
    log.epoch = epoch;
    log.loss = total_loss / static_cast<double>(n);
    log.learning_rate = lr;
    log.train_metric = evaluate(model, train_set).metric;
    if (!dev_set.empty()) {
      log.dev_metric = evaluate(model, dev_set).metric;
      if (!result.best_dev_metric || *log.dev_metric > *result.best_dev_metric) {
        result.best_dev_metric = log.dev_metric;
        result.kept_epoch = epoch;
        best_values = num::snapshot(params);
      }
    } else {
      result.kept_epoch = epoch;
    }
    result.epochs.push_back(log);
    if (on_epoch) on_epoch(log);
    if (config.stop_train_metric && log.train_metric >= *config.stop_train_metric) {
      result.stopped_early = epoch < config.epochs;
      break;
    }
  }
  if (!best_values.empty()) num::restore(params, best_values);
  return result;
}

}  // namespace sembert
