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

#include <string>

#include "amimort/error.h"
#include "amimort/preprocess.h"

namespace amimort::detail {

inline void require_two_classes(const DesignMatrix& x, const std::string& who) {
  if (x.n_rows == 0) throw TrainingError(who + ": empty training data");
  bool pos = false;
  bool neg = false;
  for (int y : x.labels) (y == 1 ? pos : neg) = true;
  if (!pos || !neg) throw TrainingError(who + ": training data contains a single class");
}

}  // namespace amimort::detail
