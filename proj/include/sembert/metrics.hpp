// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sembert {

enum class MetricKind { Accuracy, F1Binary, Matthews, Pearson };

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view text);

double accuracy(std::span<const int> preds, std::span<const int> golds);
// F1 of the positive class (label 1).
double f1_binary(std::span<const int> preds, std::span<const int> golds);
// Matthews correlation for binary labels; 0 when any marginal count is 0.
double matthews(std::span<const int> preds, std::span<const int> golds);
// Throws DegenerateInputError when either side has zero variance.
double pearson(std::span<const double> preds, std::span<const double> golds);

// Dispatch on kind; classification metrics round the inputs to labels.
double metric(MetricKind kind, std::span<const double> preds, std::span<const double> golds);

// SQuAD-style answer normalization: lowercase, drop punctuation, drop the
// articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);

struct EmF1 {
  double em = 0.0;
  double f1 = 0.0;
};

// An empty prediction means "no answer"; an empty gold list means the
// question is unanswerable. Scores are maxima over the gold answers.
EmF1 squad_em_f1(std::string_view prediction, std::span<const std::string> golds);

}  // namespace sembert
