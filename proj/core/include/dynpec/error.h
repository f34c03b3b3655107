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

#include <stdexcept>
#include <string>

namespace dynpec {

/// Malformed input: bad labels, schema violations, inconsistent configs.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A requested sample budget exceeds the configured cap.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fits or solves that cannot produce a finite answer.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dynpec
