// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "sembert/model.hpp"

namespace sembert {

// JSON document:
//   {"format": "sembert-checkpoint", "version": 1, "config": {...},
//    "vocab": [token, ...], "labels": [label, ...],
//    "params": {name: {"shape": [...], "values": [...]}, ...}}
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace sembert
