// Copyright 2026 The amimort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "amimort/model.h"

namespace amimort {

inline constexpr int kModelFormatVersion = 1;

// Versioned whitespace-separated text format: header, column names,
// ledger, then the algorithm block (member trees as node lists with
// explicit child indices, or logistic coefficients). Numbers use the
// shortest round-trip representation, so a reload predicts bit-identically.
// Training warnings are not persisted.
std::string serialize_model(const TrainedModel& model);
TrainedModel parse_model(const std::string& text);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace amimort
