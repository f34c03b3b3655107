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

#include "dynpec/decay_fit.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "dynpec/error.h"

namespace dynpec {

namespace {

constexpr double kMinF = 1e-6;

double clamp_f(double f) { return std::clamp(f, kMinF, 1.0); }

}  // namespace

FidelityEstimate fit_decay(const DecayData &data) {
    const size_t n = data.depths.size();
    if (data.means.size() != n || (!data.stderrs.empty() && data.stderrs.size() != n)) {
        throw ConfigError("decay data columns differ in length");
    }
    if (std::set<int>(data.depths.begin(), data.depths.end()).size() < 2) {
        throw ConfigError("decay fit needs at least two distinct depths");
    }
    for (size_t i = 0; i < n; i++) {
        if (!std::isfinite(data.means[i])) throw NumericalError("non-finite decay data for basis " + data.basis);
    }

    bool weighted = !data.stderrs.empty();
    for (double s : data.stderrs) weighted = weighted && s > 0 && std::isfinite(s);
    Eigen::VectorXd k(n), y(n), w(n);
    for (size_t i = 0; i < n; i++) {
        k[i] = data.depths[i];
        y[i] = data.means[i];
        w[i] = weighted ? 1.0 / (data.stderrs[i] * data.stderrs[i]) : 1.0;
    }

    // Log-linear start over positive means.
    double sw = 0, sk = 0, sl = 0, skk = 0, skl = 0;
    std::set<int> positive_depths;
    for (size_t i = 0; i < n; i++) {
        if (y[i] <= 0) continue;
        double wi = weighted ? w[i] * y[i] * y[i] : 1.0;
        double l = std::log(y[i]);
        sw += wi;
        sk += wi * k[i];
        sl += wi * l;
        skk += wi * k[i] * k[i];
        skl += wi * k[i] * l;
        positive_depths.insert(data.depths[i]);
    }
    if (positive_depths.empty()) throw NumericalError("all decay means are non-positive for basis " + data.basis);
    double A = 1, f = 1;
    if (positive_depths.size() >= 2) {
        double det = sw * skk - sk * sk;
        double slope = (sw * skl - sk * sl) / det;
        A = std::exp((sl - slope * sk) / sw);
        f = clamp_f(std::exp(slope));
    } else {
        A = std::exp(sl / sw);
    }

    auto cost = [&](double a, double ff) {
        double c = 0;
        for (size_t i = 0; i < n; i++) {
            double r = y[i] - a * std::pow(ff, k[i]);
            c += w[i] * r * r;
        }
        return c;
    };
    auto jacobian = [&](double a, double ff) {
        Eigen::MatrixXd J(n, 2);
        for (size_t i = 0; i < n; i++) {
            J(i, 0) = std::pow(ff, k[i]);
            J(i, 1) = k[i] == 0 ? 0.0 : a * k[i] * std::pow(ff, k[i] - 1);
        }
        return J;
    };

    double mu = 1e-3;
    double current = cost(A, f);
    for (int iter = 0; iter < 200; iter++) {
        Eigen::MatrixXd J = jacobian(A, f);
        Eigen::VectorXd r(n);
        for (size_t i = 0; i < n; i++) r[i] = y[i] - A * std::pow(f, k[i]);
        Eigen::Matrix2d JtJ = J.transpose() * w.asDiagonal() * J;
        Eigen::Vector2d g = J.transpose() * w.asDiagonal() * r;
        bool improved = false;
        for (int tries = 0; tries < 30; tries++) {
            Eigen::Matrix2d H = JtJ;
            H.diagonal() *= 1 + mu;
            H.diagonal().array() += 1e-300;
            Eigen::Vector2d step = H.ldlt().solve(g);
            double a2 = A + step[0], f2 = clamp_f(f + step[1]);
            double c2 = cost(a2, f2);
            if (std::isfinite(c2) && c2 <= current) {
                double rel = current - c2;
                A = a2;
                f = f2;
                current = c2;
                mu = std::max(mu / 3, 1e-12);
                improved = rel > 1e-15 * std::max(current, 1e-300);
                break;
            }
            mu *= 4;
        }
        if (!improved) break;
    }
    if (!std::isfinite(A) || !std::isfinite(f)) throw NumericalError("decay fit diverged for basis " + data.basis);

    FidelityEstimate est{data.basis, A, f, 0, 0};
    Eigen::MatrixXd J = jacobian(A, f);
    Eigen::Matrix2d JtJ = J.transpose() * w.asDiagonal() * J;
    Eigen::FullPivLU<Eigen::Matrix2d> lu(JtJ);
    if (lu.isInvertible()) {
        Eigen::Matrix2d cov = lu.inverse();
        if (!weighted) {
            double dof = static_cast<double>(n) - 2;
            cov *= dof > 0 ? current / dof : 0.0;
        }
        est.A_stderr = std::sqrt(std::max(cov(0, 0), 0.0));
        est.f_stderr = std::sqrt(std::max(cov(1, 1), 0.0));
    }
    return est;
}

}  // namespace dynpec
