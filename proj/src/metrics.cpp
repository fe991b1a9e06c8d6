// SPDX-License-Identifier: Apache-2.0
#include "sembert/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "sembert/error.hpp"

namespace sembert {

namespace {

template <typename T>
void check_pair(std::span<const T> preds, std::span<const T> golds, const char* what) {
  if (preds.size() != golds.size()) {
    throw DimensionError(std::string(what) + ": " + std::to_string(preds.size()) +
                         " predictions for " + std::to_string(golds.size()) + " golds");
  }
  if (preds.empty()) throw PreconditionError(std::string(what) + ": no examples");
}

struct Confusion {
  double tp = 0, tn = 0, fp = 0, fn = 0;
};

Confusion confusion(std::span<const int> preds, std::span<const int> golds) {
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if ((preds[i] != 0 && preds[i] != 1) || (golds[i] != 0 && golds[i] != 1)) {
      throw RangeError("binary metric on a label other than 0/1");
    }
    if (preds[i] == 1) {
      (golds[i] == 1 ? c.tp : c.fp) += 1;
    } else {
      (golds[i] == 1 ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

std::vector<int> to_labels(std::span<const double> v) {
  std::vector<int> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(static_cast<int>(std::lround(x)));
  return out;
}

std::vector<std::string> answer_tokens(std::string_view text) {
  std::istringstream is(normalize_answer(text));
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

double token_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred == gold ? 1.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  double common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = common / static_cast<double>(pred.size());
  const double recall = common / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Accuracy:
      return "accuracy";
    case MetricKind::F1Binary:
      return "f1_binary";
    case MetricKind::Matthews:
      return "matthews";
    case MetricKind::Pearson:
      return "pearson";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view text) {
  if (text == "accuracy") return MetricKind::Accuracy;
  if (text == "f1_binary") return MetricKind::F1Binary;
  if (text == "matthews") return MetricKind::Matthews;
  if (text == "pearson") return MetricKind::Pearson;
  throw ValidationError("unknown metric '" + std::string(text) + "'");
}

double accuracy(std::span<const int> preds, std::span<const int> golds) {
  check_pair(preds, golds, "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == golds[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double f1_binary(std::span<const int> preds, std::span<const int> golds) {
  check_pair(preds, golds, "f1_binary");
  const auto c = confusion(preds, golds);
  const double denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2 * c.tp / denom;
}

double matthews(std::span<const int> preds, std::span<const int> golds) {
  check_pair(preds, golds, "matthews");
  const auto c = confusion(preds, golds);
  const double denom = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn);
  if (denom == 0) return 0.0;
  return (c.tp * c.tn - c.fp * c.fn) / std::sqrt(denom);
}

double pearson(std::span<const double> preds, std::span<const double> golds) {
  check_pair(preds, golds, "pearson");
  if (preds.size() < 2) throw PreconditionError("pearson: needs at least 2 examples");
  const double n = static_cast<double>(preds.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    mx += preds[i];
    my += golds[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    sxy += (preds[i] - mx) * (golds[i] - my);
    sxx += (preds[i] - mx) * (preds[i] - mx);
    syy += (golds[i] - my) * (golds[i] - my);
  }
  if (sxx == 0 || syy == 0) throw DegenerateInputError("pearson: zero variance input");
  return sxy / std::sqrt(sxx * syy);
}

double metric(MetricKind kind, std::span<const double> preds, std::span<const double> golds) {
  if (kind == MetricKind::Pearson) return pearson(preds, golds);
  const auto p = to_labels(preds);
  const auto g = to_labels(golds);
  switch (kind) {
    case MetricKind::Accuracy:
      return accuracy(p, g);
    case MetricKind::F1Binary:
      return f1_binary(p, g);
    default:
      return matthews(p, g);
  }
}

std::string normalize_answer(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
  std::istringstream is(cleaned);
  std::string out, tok;
  while (is >> tok) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

EmF1 squad_em_f1(std::string_view prediction, std::span<const std::string> golds) {
  static const std::vector<std::string> kNoAnswer{""};
  if (golds.empty()) golds = kNoAnswer;
  const std::string pred_norm = normalize_answer(prediction);
  const auto pred_toks = answer_tokens(prediction);
  EmF1 best;
  for (const auto& g : golds) {
    best.em = std::max(best.em, pred_norm == normalize_answer(g) ? 1.0 : 0.0);
    best.f1 = std::max(best.f1, token_f1(pred_toks, answer_tokens(g)));
  }
  return best;
}

}  // namespace sembert
