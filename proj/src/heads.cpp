// SPDX-License-Identifier: Apache-2.0
#include "sembert/heads.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sembert/error.hpp"
#include "sembert/num/ops.hpp"

namespace sembert {

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Classification:
      return "classification";
    case TaskKind::Regression:
      return "regression";
    case TaskKind::Span:
      return "span";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "classification") return TaskKind::Classification;
  if (text == "regression") return TaskKind::Regression;
  if (text == "span") return TaskKind::Span;
  throw ValidationError("unknown task_kind '" + std::string(text) +
                        "' (expected classification, regression or span)");
}

HeadParams HeadParams::init(TaskKind kind, std::size_t width, std::size_t num_classes,
                            num::Rng& rng) {
  std::size_t outputs = 0;
  switch (kind) {
    case TaskKind::Classification:
      if (num_classes < 2) throw RangeError("classification needs at least 2 classes");
      outputs = num_classes;
      break;
    case TaskKind::Regression:
      outputs = 1;
      break;
    case TaskKind::Span:
      outputs = 2;
      break;
  }
  return {num::xavier_uniform(width, outputs, rng), num::zero_param({outputs})};
}

void HeadParams::append_to(num::ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".w", w, true});
  out.push_back({prefix + ".b", b, false});
}

num::Tensor classify(const num::Tensor& h, const HeadParams& head) {
  return num::linear(num::slice_rows(h, 0, 1), head.w, head.b);
}

SpanLogits span_logits(const num::Tensor& h, const HeadParams& head) {
  num::Tensor both = num::transpose(num::linear(h, head.w, head.b));
  return {num::slice_rows(both, 0, 1), num::slice_rows(both, 1, 1)};
}

num::Tensor span_loss(const SpanLogits& logits, std::span<const int> allowed, int start_target,
                      int end_target) {
  const int s[] = {start_target};
  const int e[] = {end_target};
  return num::affine(num::add(num::cross_entropy(logits.start, s, allowed),
                              num::cross_entropy(logits.end, e, allowed)),
                     0.5);
}

namespace {

// Softmax over position 0 and the candidate positions; others stay 0.
std::vector<double> normalized(std::span<const double> logits, std::span<const int> candidates) {
  auto in = [&](std::size_t i) { return i == 0 || candidates[i] != 0; };
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (in(i)) mx = std::max(mx, logits[i]);
  std::vector<double> p(logits.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (in(i)) z += (p[i] = std::exp(logits[i] - mx));
  for (auto& x : p) x /= z;
  return p;
}

}  // namespace

SpanPrediction decode_span(std::span<const double> start_logits,
                           std::span<const double> end_logits, std::span<const int> candidates,
                           double tau, std::size_t max_span_len) {
  const std::size_t n = start_logits.size();
  if (n == 0) throw PreconditionError("decode_span: no positions");
  if (end_logits.size() != n || candidates.size() != n) {
    throw DimensionError("decode_span: start/end/candidate lengths " + std::to_string(n) + "/" +
                         std::to_string(end_logits.size()) + "/" +
                         std::to_string(candidates.size()) + " differ");
  }
  if (max_span_len < 1) throw RangeError("max_span_len must be at least 1");
  bool any = false;
  for (std::size_t i = 1; i < n; ++i) any = any || candidates[i] != 0;
  if (!any) throw DecodeError("decode_span: every position is masked");

  const auto s = normalized(start_logits, candidates);
  const auto e = normalized(end_logits, candidates);
  SpanPrediction out;
  out.null_score = s[0] + e[0];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) {
    if (!candidates[i]) continue;
    for (std::size_t j = i; j < n && j - i < max_span_len; ++j) {
      if (!candidates[j]) continue;
      if (s[i] + e[j] > best) {
        best = s[i] + e[j];
        out.start = i;
        out.end = j;
      }
    }
  }
  out.score = best;
  out.is_null = !(best > out.null_score + tau);
  if (out.is_null) out.start = out.end = 0;
  return out;
}

double threshold_f1(std::span<const ThresholdCandidate> dev, double tau) {
  if (dev.empty()) throw PreconditionError("threshold_f1: empty dev set");
  double total = 0.0;
  for (const auto& c : dev) total += c.margin > tau ? c.f1_answered : c.f1_null;
  return total / static_cast<double>(dev.size());
}

std::vector<double> threshold_grid(std::span<const ThresholdCandidate> dev) {
  if (dev.empty()) throw PreconditionError("threshold_grid: empty dev set");
  std::vector<double> grid;
  grid.reserve(dev.size() + 2);
  for (const auto& c : dev) grid.push_back(c.margin);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const double below = grid.front() - 1.0;
  const double above = grid.back() + 1.0;
  grid.insert(grid.begin(), below);
  grid.push_back(above);
  return grid;
}

NullThreshold tune_threshold(std::span<const ThresholdCandidate> dev) {
  const auto grid = threshold_grid(dev);
  std::vector<ThresholdCandidate> sorted(dev.begin(), dev.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.margin < b.margin; });

  // Walk the grid upward; every example at or below tau flips to null.
  double total = 0.0;
  for (const auto& c : sorted) total += c.f1_answered;
  const double n = static_cast<double>(sorted.size());
  NullThreshold best{grid.front(), total / n};
  std::size_t next = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    while (next < sorted.size() && sorted[next].margin <= grid[g]) {
      total += sorted[next].f1_null - sorted[next].f1_answered;
      ++next;
    }
    if (total / n >= best.f1) best = {grid[g], total / n};
  }
  best.f1 = threshold_f1(dev, best.tau);
  return best;
}

}  // namespace sembert
