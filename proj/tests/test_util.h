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
#include <complex>
#include <string>

#include "dynpec/rng.h"

namespace dynpec::testing {

using Mat = Eigen::MatrixXcd;

inline Mat single_pauli(char c) {
    const std::complex<double> i(0, 1);
    Mat m(2, 2);
    switch (c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1; break;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
    return out;
}

/// Matrix of an unsigned label; character j acts on bit j of the basis index.
inline Mat label_matrix(const std::string &label) {
    Mat out = Mat::Identity(1, 1);
    for (char c : label) out = kron(single_pauli(c), out);
    return out;
}

inline Mat random_density(int n, Rng &rng) {
    const int d = 1 << n;
    Mat a(d, d);
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) a(r, c) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    }
    Mat rho = a * a.adjoint();
    return rho / rho.trace();
}

inline double max_abs(const Mat &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace dynpec::testing
