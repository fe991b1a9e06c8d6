// SPDX-License-Identifier: Apache-2.0
// Command-line driver: tokenization, data validation, training, evaluation,
// null-threshold tuning and the experiment sweeps.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "sembert/checkpoint.hpp"
#include "sembert/config.hpp"
#include "sembert/dataset.hpp"
#include "sembert/error.hpp"
#include "sembert/experiments.hpp"
#include "sembert/model.hpp"
#include "sembert/tokenizer.hpp"
#include "sembert/trainer.hpp"

namespace fs = std::filesystem;
using namespace sembert;

namespace {

constexpr const char* kRunRootEnv = "SEMBERT_RUN_ROOT";

// Flags shared by every command. Unset optionals leave the config value.
struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string run_name;
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> m;
  std::optional<std::size_t> max_len;
  std::optional<std::string> fusion_mode;
  std::optional<std::string> task_kind;
  std::optional<std::size_t> num_labels;
  std::optional<std::string> metric;
  std::optional<std::string> vocab;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--run-name", o.run_name, "Run directory name under $SEMBERT_RUN_ROOT");
  cmd->add_option("--epochs", o.epochs, "Training epochs");
  cmd->add_option("--learning-rate", o.learning_rate, "Peak learning rate");
  cmd->add_option("--batch-size", o.batch_size, "Mini-batch size");
  cmd->add_option("--m", o.m, "Predicate-argument structures per sentence");
  cmd->add_option("--max-len", o.max_len, "Maximum encoded length");
  cmd->add_option("--fusion-mode", o.fusion_mode, "sembert, subword_ablation or baseline");
  cmd->add_option("--task-kind", o.task_kind, "classification, regression or span");
  cmd->add_option("--num-labels", o.num_labels, "Number of classes");
  cmd->add_option("--metric", o.metric, "accuracy, f1_binary, matthews or pearson");
  cmd->add_option("--vocab", o.vocab, "Wordpiece vocabulary file");
}

RunConfig resolve_config(const CommonOptions& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("config " + o.config_path + ": " + e.what());
    }
  }
  if (o.seed) j["seed"] = *o.seed;
  if (o.epochs) j["epochs"] = *o.epochs;
  if (o.learning_rate) j["learning_rate"] = *o.learning_rate;
  if (o.batch_size) j["batch_size"] = *o.batch_size;
  if (o.m) j["m"] = *o.m;
  if (o.max_len) j["max_len"] = *o.max_len;
  if (o.fusion_mode) j["fusion_mode"] = *o.fusion_mode;
  if (o.task_kind) j["task_kind"] = *o.task_kind;
  if (o.num_labels) j["num_labels"] = *o.num_labels;
  if (o.metric) j["metric"] = *o.metric;
  if (o.vocab) j["vocab"] = *o.vocab;
  return config_from_json(j);
}

fs::path make_run_dir(const std::string& command, const CommonOptions& o, const RunConfig& c) {
  const char* root = std::getenv(kRunRootEnv);
  fs::path dir = fs::path(root && *root ? root : "runs") /
                 (o.run_name.empty() ? command + "-seed" + std::to_string(c.seed) : o.run_name);
  fs::create_directories(dir);
  std::cerr << "run_dir\t" << dir.string() << '\n';
  return dir;
}

DatasetSchema schema_of(const RunConfig& c) { return {c.task_kind, c.num_labels}; }

std::vector<TaskExample> read_data(const std::string& path, const RunConfig& c,
                                   const LabelVocab& labels) {
  std::vector<std::string> warnings;
  auto data = load_dataset(path, schema_of(c), labels, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return data;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed << v;
  return os.str();
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

// Appends one JSON line per epoch to <dir>/log.jsonl, tagged with the run.
class EpochLogger {
 public:
  explicit EpochLogger(const fs::path& path) : out_(path) {}
  void operator()(const std::string& run, const EpochLog& log) {
    auto j = to_json(log);
    j["run"] = run;
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void print_rows(const std::string& key, const std::vector<SweepRow>& rows, const fs::path& dir) {
  std::cout << key << "\tdev_metric\ttrain_metric\tepochs_run\n";
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    std::cout << r.name << '\t' << fmt(r.dev_metric) << '\t' << fmt(r.train_metric) << '\t'
              << r.epochs_run << '\n';
    all.push_back(to_json(r));
  }
  write_json(dir / "results.json", all);
}

int cmd_tokenize(const CommonOptions& o, const std::vector<std::string>& text) {
  const RunConfig c = resolve_config(o);
  if (c.vocab.empty()) throw ValidationError("tokenize needs --vocab or a config with \"vocab\"");
  const Vocab vocab = Vocab::load(c.vocab);
  std::string joined;
  for (const auto& t : text) joined += (joined.empty() ? "" : " ") + t;
  const auto s = tokenize(joined, vocab);
  std::cout << "position\tpiece\tword\n";
  std::vector<int> word_of(s.subwords.size(), -1);
  for (std::size_t w = 0; w < s.spans.size(); ++w) {
    for (std::size_t i = 0; i < s.spans[w].length; ++i) {
      word_of[s.spans[w].start + i] = static_cast<int>(w);
    }
  }
  for (std::size_t i = 0; i < s.subwords.size(); ++i) {
    std::cout << i << '\t' << vocab.token(s.subwords[i]) << '\t'
              << (word_of[i] < 0 ? std::string("-") : std::to_string(word_of[i])) << '\n';
  }
  return 0;
}

int cmd_validate(const CommonOptions& o, const std::string& data) {
  const RunConfig c = resolve_config(o);
  const LabelVocab labels = resolve_labels(c);
  const auto report = check_dataset(data, schema_of(c), labels);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "line\tstatus\tmessage\n";
  for (const auto& e : report.errors) {
    std::cout << e.line << '\t' << (e.malformed_json ? "parse_error" : "invalid") << '\t'
              << e.message << '\n';
  }
  std::cout << "-\tsummary\t" << report.examples.size() << " valid, " << report.errors.size()
            << " rejected\n";
  return report.errors.empty() ? 0 : 1;
}

int cmd_train(const CommonOptions& o, const std::string& train_path, const std::string& dev_path) {
  const RunConfig c = resolve_config(o);
  const LabelVocab labels = resolve_labels(c);
  const auto train_set = read_data(train_path, c, labels);
  const auto dev_set = dev_path.empty() ? std::vector<TaskExample>{} : read_data(dev_path, c, labels);
  const fs::path dir = make_run_dir("train", o, c);
  save_config(c, dir / "config.json");
  EpochLogger logger(dir / "log.jsonl");
  std::cout << "epoch\tloss\ttrain_metric\tdev_metric\n";
  auto outcome = run_once(c, train_set, dev_set, [&](const std::string& run, const EpochLog& log) {
    logger(run, log);
    std::cout << log.epoch << '\t' << fmt(log.loss) << '\t' << fmt(log.train_metric) << '\t'
              << (log.dev_metric ? fmt(*log.dev_metric) : std::string("-")) << '\n';
  });
  save_checkpoint(outcome.model, dir / "checkpoint.json");
  nlohmann::ordered_json summary;
  summary["kept_epoch"] = outcome.train.kept_epoch;
  summary["epochs_run"] = outcome.train.epochs.size();
  summary["stopped_early"] = outcome.train.stopped_early;
  summary["steps"] = outcome.train.steps;
  summary["metric"] = outcome.metric;
  write_json(dir / "summary.json", summary);
  return 0;
}

// Span evaluation rows as written to predictions.jsonl.
void write_span_predictions(const fs::path& path, std::span<const PreparedExample> data,
                            const EvalResult& result) {
  std::ofstream out(path);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = result.predictions[i];
    nlohmann::ordered_json j;
    j["id"] = data[i].id;
    j["pred"] = p.text;
    j["score"] = p.span.score;
    j["null_score"] = p.span.null_score;
    out << j.dump() << '\n';
  }
}

int cmd_eval(const CommonOptions& o, const std::string& checkpoint, const std::string& data,
             std::optional<double> tau, const std::string& threshold_file) {
  Model model = load_checkpoint(checkpoint);
  const RunConfig& c = model.config();
  double t = 0.0;
  if (!threshold_file.empty()) {
    std::ifstream in(threshold_file);
    nlohmann::json j;
    try {
      in >> j;
      t = j.at("tau").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("threshold file " + threshold_file + ": " + e.what());
    }
  }
  if (tau) t = *tau;
  const auto examples = read_data(data, c, model.labels());
  const auto prepared = prepare_all(model, examples);
  const auto result = evaluate(model, prepared, t);
  const fs::path dir = make_run_dir("eval", o, c);
  std::cout << "metric\tvalue\n";
  if (c.task_kind == TaskKind::Span) {
    std::cout << "exact_match\t" << fmt(result.exact_match) << "\nf1\t" << fmt(result.metric)
              << '\n';
    write_span_predictions(dir / "predictions.jsonl", prepared, result);
  } else {
    std::cout << to_string(c.metric) << '\t' << fmt(result.metric) << '\n';
  }
  nlohmann::ordered_json j;
  j["metric"] = result.metric;
  j["exact_match"] = result.exact_match;
  j["tau"] = t;
  j["examples"] = prepared.size();
  write_json(dir / "eval.json", j);
  return 0;
}

int cmd_tune(const CommonOptions& o, const std::string& checkpoint, const std::string& data) {
  Model model = load_checkpoint(checkpoint);
  const RunConfig& c = model.config();
  if (c.task_kind != TaskKind::Span) {
    throw ValidationError("tune-threshold needs a span checkpoint");
  }
  const auto examples = read_data(data, c, model.labels());
  if (examples.empty()) throw PreconditionError("tune-threshold: empty dev set");
  const auto prepared = prepare_all(model, examples);
  // Decode with tau = -inf so every example exposes its best span.
  const auto open = evaluate(model, prepared, -std::numeric_limits<double>::infinity());
  std::vector<ThresholdCandidate> dev;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const auto& p = open.predictions[i];
    const auto& gold = prepared[i].gold_texts;
    dev.push_back({p.span.score - p.span.null_score, squad_em_f1(p.text, gold).f1,
                   squad_em_f1("", gold).f1});
  }
  const NullThreshold best = tune_threshold(dev);
  const auto tuned = evaluate(model, prepared, best.tau);
  const fs::path dir = make_run_dir("tune-threshold", o, c);
  write_span_predictions(dir / "predictions.jsonl", prepared, tuned);
  nlohmann::ordered_json th;
  th["tau"] = best.tau;
  write_json(dir / "threshold.json", th);
  std::cout << "tau\tf1\texact_match\n"
            << fmt(best.tau) << '\t' << fmt(tuned.metric) << '\t' << fmt(tuned.exact_match)
            << '\n';
  return 0;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty value list");
  return out;
}

template <typename Sweep>
int cmd_sweep(const std::string& command, const std::string& key, const CommonOptions& o,
              const std::string& train_path, const std::string& dev_path, Sweep sweep) {
  const RunConfig c = resolve_config(o);
  const LabelVocab labels = resolve_labels(c);
  const auto train_set = read_data(train_path, c, labels);
  const auto dev_set = dev_path.empty() ? std::vector<TaskExample>{} : read_data(dev_path, c, labels);
  const fs::path dir = make_run_dir(command, o, c);
  save_config(c, dir / "config.json");
  EpochLogger logger(dir / "log.jsonl");
  auto rows = sweep(c, train_set, dev_set, std::ref(logger));
  print_rows(key, rows, dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SemBERT desk-scale toolkit"};
  app.require_subcommand(1);

  CommonOptions o;
  std::vector<std::string> text;
  std::string data, train_path, dev_path, checkpoint, threshold_file;
  std::optional<double> tau;
  std::string m_values = "1,2,3,4,5";
  std::string p_values = "0,0.2,0.4";

  auto* tok = app.add_subcommand("tokenize", "Print the wordpiece segmentation of a sentence");
  add_common(tok, o);
  tok->add_option("text", text, "Sentence words")->required();

  auto* validate = app.add_subcommand("validate-data", "Check a JSONL dataset and list every bad line");
  add_common(validate, o);
  validate->add_option("--data", data, "JSONL dataset")->required()->check(CLI::ExistingFile);

  auto* train_cmd = app.add_subcommand("train", "Train a model and save the kept checkpoint");
  add_common(train_cmd, o);
  train_cmd->add_option("--train", train_path, "Training JSONL")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", dev_path, "Dev JSONL")->check(CLI::ExistingFile);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  add_common(eval_cmd, o);
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", data, "JSONL dataset")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--tau", tau, "Null-answer threshold");
  eval_cmd->add_option("--threshold", threshold_file, "threshold.json from tune-threshold")
      ->check(CLI::ExistingFile);

  auto* tune = app.add_subcommand("tune-threshold", "Pick the null-answer threshold on dev");
  add_common(tune, o);
  tune->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  tune->add_option("--data", data, "Dev JSONL")->required()->check(CLI::ExistingFile);

  auto* sweep_m_cmd = app.add_subcommand("sweep-m", "Retrain for each m");
  add_common(sweep_m_cmd, o);
  sweep_m_cmd->add_option("--train", train_path, "Training JSONL")->required()->check(CLI::ExistingFile);
  sweep_m_cmd->add_option("--dev", dev_path, "Dev JSONL")->check(CLI::ExistingFile);
  sweep_m_cmd->add_option("--m-values", m_values, "Comma-separated m values");

  auto* sweep_p_cmd = app.add_subcommand("sweep-noise", "Retrain for each SRL label-noise fraction");
  add_common(sweep_p_cmd, o);
  sweep_p_cmd->add_option("--train", train_path, "Training JSONL")->required()->check(CLI::ExistingFile);
  sweep_p_cmd->add_option("--dev", dev_path, "Dev JSONL")->check(CLI::ExistingFile);
  sweep_p_cmd->add_option("--p-values", p_values, "Comma-separated noise fractions");

  auto* ablate_cmd = app.add_subcommand("ablate", "baseline / subword_ablation / sembert table");
  add_common(ablate_cmd, o);
  ablate_cmd->add_option("--train", train_path, "Training JSONL")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--dev", dev_path, "Dev JSONL")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tok->parsed()) return cmd_tokenize(o, text);
    if (validate->parsed()) return cmd_validate(o, data);
    if (train_cmd->parsed()) return cmd_train(o, train_path, dev_path);
    if (eval_cmd->parsed()) return cmd_eval(o, checkpoint, data, tau, threshold_file);
    if (tune->parsed()) return cmd_tune(o, checkpoint, data);
    if (sweep_m_cmd->parsed()) {
      std::vector<std::size_t> ms;
      for (double v : parse_list(m_values)) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
          throw ValidationError("m values must be integers >= 1");
        }
        ms.push_back(static_cast<std::size_t>(v));
      }
      return cmd_sweep("sweep-m", "m", o, train_path, dev_path,
                       [&](const auto& c, const auto& tr, const auto& dv, auto cb) {
                         return sweep_m(c, tr, dv, ms, cb);
                       });
    }
    if (sweep_p_cmd->parsed()) {
      const auto ps = parse_list(p_values);
      for (double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) throw RangeError("noise fractions must lie in [0, 1]");
      }
      return cmd_sweep("sweep-noise", "p", o, train_path, dev_path,
                       [&](const auto& c, const auto& tr, const auto& dv, auto cb) {
                         return sweep_noise(c, tr, dv, ps, cb);
                       });
    }
    if (ablate_cmd->parsed()) {
      return cmd_sweep("ablate", "mode", o, train_path, dev_path,
                       [&](const auto& c, const auto& tr, const auto& dv, auto cb) {
                         return ablate(c, tr, dv, cb);
                       });
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
