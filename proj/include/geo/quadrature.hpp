// Copyright 2026 The geo Authors
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

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "geo/error.hpp"

namespace geo {

/// Gauss-Legendre rule of a given order on [-1, 1], nodes by Newton iteration
/// on P_n. For an integrand with 2n continuous derivatives the error is
///   (b-a)^(2n+1) (n!)^4 / ((2n+1) ((2n)!)^3) * max|f^(2n)|.
class GaussLegendre {
   public:
    explicit GaussLegendre(int order = 64) : nodes_(order), weights_(order) {
        if (order < 1) throw UsageError("quadrature order must be positive");
        const int n = order;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes_[i] = -x;
            nodes_[n - 1 - i] = x;
            weights_[i] = weights_[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
        }
    }

    int order() const noexcept {
        return static_cast<int>(nodes_.size());
    }

    template <class F>
    double integrate(F &&f, double a, double b) const {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
        return s * half;
    }

    /// Composite rule over `panels` equal sub-intervals.
    template <class F>
    double integrate(F &&f, double a, double b, int panels) const {
        double s = 0;
        const double w = (b - a) / panels;
        for (int p = 0; p < panels; ++p) s += integrate(f, a + p * w, a + (p + 1) * w);
        return s;
    }

   private:
    std::vector<double> nodes_, weights_;
};

}  // namespace geo
