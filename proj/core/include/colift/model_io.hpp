// Copyright 2026 The Colift Authors
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

#ifndef COLIFT_MODEL_IO_HPP_
#define COLIFT_MODEL_IO_HPP_

#include <filesystem>
#include <string>

#include "colift/model.hpp"

namespace colift {

// Model schema v1 (see docs/schemas/model_v1.md). Key order in emitted text
// is fixed so identical models serialize byte-identically.
KinematicModel model_from_json_text(const std::string& text, const std::string& origin);
std::string model_to_json_text(const KinematicModel& model);

KinematicModel load_model(const std::filesystem::path& path);
void save_model(const KinematicModel& model, const std::filesystem::path& path);

// Bakes a design into the model: group members take the gene's length
// multiplier / density / motor binding. The result's nominal_params()
// reproduce `params`, which is how design files round-trip.
KinematicModel apply_params(const KinematicModel& model, const HardwareParams& params);

}  // namespace colift

#endif  // COLIFT_MODEL_IO_HPP_
