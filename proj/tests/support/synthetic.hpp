// SPDX-License-Identifier: Apache-2.0
// Synthetic data for end-to-end tests.
#pragma once

#include <string>
#include <vector>

#include "sembert/dataset.hpp"
#include "sembert/num/rng.hpp"
#include "sembert/srl.hpp"

namespace sembert::testing {

// Single-sentence 3-class data whose class is the role (ARG0, ARG1 or ARG2)
// of the one argument in the frame. Words are drawn from one pool
// independently of the class, so the text carries no signal.
inline std::vector<TaskExample> semantic_signal_set(std::size_t n, std::uint64_t seed,
                                                    const std::string& prefix) {
  static const std::vector<std::string> pool = {"alpha", "bravo", "delta", "echo",  "golf",
                                                "hotel", "india", "kilo",  "lima",  "mike",
                                                "oscar", "papa",  "romeo", "tango", "zulu"};
  static const char* roles[] = {"ARG0", "ARG1", "ARG2"};
  const LabelVocab labels = LabelVocab::standard();
  num::Rng rng(seed);
  std::vector<TaskExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    TaskExample ex;
    ex.id = prefix + "-" + std::to_string(i);
    ex.label = static_cast<int>(rng.below(3));
    const std::size_t len = 5 + rng.below(3);
    for (std::size_t w = 0; w < len; ++w) ex.words_a.push_back(pool[rng.below(pool.size())]);

    const std::size_t pred = rng.below(len);
    const std::size_t arg_len = 1 + rng.below(2);
    // Argument placed wholly before or after the predicate.
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + arg_len <= len; ++s) {
      if (s + arg_len <= pred || s > pred) starts.push_back(s);
    }
    const std::size_t start = starts[rng.below(starts.size())];
    std::vector<int> tags(len, labels.outside_id());
    tags[pred] = labels.verb_id();
    const std::string role = roles[ex.label];
    tags[start] = labels.id("B-" + role);
    for (std::size_t k = 1; k < arg_len; ++k) tags[start + k] = labels.id("I-" + role);
    ex.srl_a.frames.push_back({static_cast<int>(pred), tags});
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace sembert::testing
