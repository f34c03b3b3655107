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

#include <Eigen/Dense>

namespace dynpec {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual = 0;  // ||A x - b||_2
    int iterations = 0;
};

/// Lawson-Hanson active-set solution of min ||A x - b||_2 subject to x >= 0.
/// Throws NumericalError for non-finite input or when the iteration limit
/// (3 * columns by default) is reached.
NnlsResult nnls(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, int max_iterations = 0);

}  // namespace dynpec
