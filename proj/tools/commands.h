// Copyright 2026 The dynpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <nlohmann/json.hpp>

#include "config.h"

namespace dynpec::cli {

// Each command writes its files under options.out and returns a summary
// document for stdout.
nlohmann::json run_learn(const Config &config, const Options &options);
nlohmann::json run_validate(const Config &config, const Options &options);
nlohmann::json run_mitigate(const Config &config, const Options &options);
nlohmann::json run_ptm(const Config &config, const Options &options);
nlohmann::json run_decompose(const Config &config, const Options &options);

}  // namespace dynpec::cli
