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

#include <string>
#include <vector>

namespace dynpec {

/// Per-depth fidelity estimates for one basis.
struct DecayData {
    std::string basis;
    std::vector<int> depths;
    std::vector<double> means;
    std::vector<double> stderrs;
};

struct FidelityEstimate {
    std::string basis;
    double A = 1;
    double f = 1;
    double A_stderr = 0;
    double f_stderr = 0;
};

/// Fits means[i] ~ A f^depths[i] by weighted Levenberg-Marquardt (weights
/// 1/stderr^2; unweighted when any stderr is zero). Starts from a log-linear
/// fit over the positive means and keeps f in (1e-6, 1]. Throws ConfigError
/// for fewer than two distinct depths and NumericalError when no mean is
/// positive.
FidelityEstimate fit_decay(const DecayData &data);

}  // namespace dynpec
