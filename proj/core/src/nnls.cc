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

#include "dynpec/nnls.h"

#include <limits>
#include <vector>

#include "dynpec/error.h"

namespace dynpec {

namespace {

/// Least-squares solution restricted to the columns flagged in `passive`.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, const std::vector<bool> &passive) {
    std::vector<int> cols;
    for (int j = 0; j < static_cast<int>(passive.size()); j++) {
        if (passive[j]) cols.push_back(j);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
    if (cols.empty()) return z;
    Eigen::MatrixXd sub(A.rows(), cols.size());
    for (size_t k = 0; k < cols.size(); k++) sub.col(k) = A.col(cols[k]);
    Eigen::VectorXd s = sub.colPivHouseholderQr().solve(b);
    for (size_t k = 0; k < cols.size(); k++) z[cols[k]] = s[k];
    return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, int max_iterations) {
    if (A.rows() != b.size()) throw NumericalError("nnls: dimension mismatch");
    if (!A.allFinite() || !b.allFinite()) throw NumericalError("nnls: non-finite input");
    const int n = static_cast<int>(A.cols());
    if (max_iterations <= 0) max_iterations = 3 * std::max(n, 1) + 10;
    const double tol = 10 * std::numeric_limits<double>::epsilon() * A.norm() * std::max<Eigen::Index>(A.rows(), n);

    NnlsResult out;
    out.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    Eigen::VectorXd w = A.transpose() * (b - A * out.x);
    while (true) {
        int best = -1;
        double best_w = tol;
        for (int j = 0; j < n; j++) {
            if (!passive[j] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        if (++out.iterations > max_iterations) throw NumericalError("nnls: iteration limit reached");
        passive[best] = true;
        while (true) {
            Eigen::VectorXd z = solve_passive(A, b, passive);
            bool feasible = true;
            for (int j = 0; j < n; j++) {
                if (passive[j] && z[j] <= 0) feasible = false;
            }
            if (feasible) {
                out.x = z;
                break;
            }
            // Step back towards the last feasible point until a variable hits zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; j++) {
                if (passive[j] && z[j] <= 0) alpha = std::min(alpha, out.x[j] / (out.x[j] - z[j]));
            }
            out.x += alpha * (z - out.x);
            for (int j = 0; j < n; j++) {
                if (passive[j] && out.x[j] <= tol) {
                    passive[j] = false;
                    out.x[j] = 0;
                }
            }
        }
        w = A.transpose() * (b - A * out.x);
    }
    out.residual = (A * out.x - b).norm();
    return out;
}

}  // namespace dynpec
