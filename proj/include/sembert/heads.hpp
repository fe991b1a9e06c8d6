// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "sembert/num/param.hpp"

namespace sembert {

enum class TaskKind { Classification, Regression, Span };

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view text);

// One fully connected layer over the fused representation.
struct HeadParams {
  num::Tensor w;  // [width x outputs]
  num::Tensor b;  // [outputs]

  // Classification: num_classes outputs; regression: 1; span: 2 (start, end).
  static HeadParams init(TaskKind kind, std::size_t width, std::size_t num_classes,
                         num::Rng& rng);
  void append_to(num::ParamList& out, const std::string& prefix) const;
};

// Logits (or the regression score) from the first row of h.
num::Tensor classify(const num::Tensor& h, const HeadParams& head);

struct SpanLogits {
  num::Tensor start;  // [1 x rows]
  num::Tensor end;    // [1 x rows]
};
SpanLogits span_logits(const num::Tensor& h, const HeadParams& head);

// Mean of the start and end cross-entropies. `allowed` marks the positions
// that take part in the softmax (row 0 is the null answer).
num::Tensor span_loss(const SpanLogits& logits, std::span<const int> allowed, int start_target,
                      int end_target);

struct SpanPrediction {
  std::size_t start = 0;
  std::size_t end = 0;
  // Best candidate score s_i + e_j and the null score s_0 + e_0, both on
  // softmax-normalized start/end distributions.
  double score = 0.0;
  double null_score = 0.0;
  bool is_null = true;
};

// Position 0 carries the null answer; `candidates` marks the positions a
// span may use (position 0 is never a candidate). Start and end scores are
// softmax-normalized over position 0 and the candidates. The best span
// maximizes s_i + e_j over i <= j, j - i < max_span_len, and is returned
// only when its score exceeds null_score + tau.
SpanPrediction decode_span(std::span<const double> start_logits,
                           std::span<const double> end_logits, std::span<const int> candidates,
                           double tau, std::size_t max_span_len);

// Per dev example: the margin (best span score - null score) and the F1 the
// example earns when answered or when left null.
struct ThresholdCandidate {
  double margin = 0.0;
  double f1_answered = 0.0;
  double f1_null = 0.0;
};

struct NullThreshold {
  double tau = 0.0;
  double f1 = 0.0;
};

// Dev F1 when predicting non-null exactly for margin > tau.
double threshold_f1(std::span<const ThresholdCandidate> dev, double tau);

// Every distinct tau the sweep considers, ascending: one value below all
// margins, each observed margin, one value above all margins. The two
// outer values stand in for -inf/+inf and stay finite.
std::vector<double> threshold_grid(std::span<const ThresholdCandidate> dev);

// The grid value with the highest dev F1; ties go to the larger tau.
NullThreshold tune_threshold(std::span<const ThresholdCandidate> dev);

}  // namespace sembert
