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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "geo/error.hpp"

namespace geo {

using Vec = std::vector<double>;

/// Dense row-major rank-2 array over chart indices.
class Tensor2 {
   public:
    Tensor2() = default;
    explicit Tensor2(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    }

    std::size_t dim() const noexcept {
        return dim_;
    }
    double &operator()(std::size_t i, std::size_t j) {
        return data_[i * dim_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * dim_ + j];
    }
    std::span<const double> data() const noexcept {
        return data_;
    }
    double max_abs() const {
        double m = 0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

   private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Dense row-major rank-3 array over chart indices.
class Tensor3 {
   public:
    Tensor3() = default;
    explicit Tensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {
    }

    std::size_t dim() const noexcept {
        return dim_;
    }
    double &operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * dim_ + j) * dim_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * dim_ + j) * dim_ + k];
    }
    std::span<const double> data() const noexcept {
        return data_;
    }
    double max_abs() const {
        double m = 0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// T_ijk v^i v^j v^k
    double contract(std::span<const double> v) const {
        require_dim(v.size());
        double s = 0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) s += (*this)(i, j, k) * v[i] * v[j] * v[k];
        return s;
    }

    /// Largest deviation between any component and its index permutations.
    double permutation_residual() const {
        double r = 0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) {
                    const double v = (*this)(i, j, k);
                    for (double w : {(*this)(i, k, j), (*this)(j, i, k), (*this)(j, k, i), (*this)(k, i, j),
                                     (*this)(k, j, i)})
                        r = std::max(r, std::abs(v - w));
                }
        return r;
    }

    /// Average over the six index permutations.
    Tensor3 symmetrized() const {
        Tensor3 out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k)
                    out(i, j, k) = ((*this)(i, j, k) + (*this)(i, k, j) + (*this)(j, i, k) + (*this)(j, k, i) +
                                    (*this)(k, i, j) + (*this)(k, j, i)) /
                                   6.0;
        return out;
    }

   private:
    void require_dim(std::size_t n) const {
        if (n != dim_) throw DimensionMismatch("vector dimension does not match tensor dimension");
    }

    std::size_t dim_ = 0;
    std::vector<double> data_;
};

inline double contract(const Tensor2 &g, std::span<const double> u, std::span<const double> v) {
    double s = 0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j) s += g(i, j) * u[i] * v[j];
    return s;
}

// Chart transport. Old coordinates x are functions of new coordinates y;
// jac(i, a) = dx^i/dy^a and hess(i, a, b) = d2x^i/dy^a dy^b at the point.

/// g'_ab = g_ij J^i_a J^j_b
inline Tensor2 transport_metric(const Tensor2 &g, const Tensor2 &jac) {
    const std::size_t n = g.dim();
    Tensor2 out(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) s += g(i, j) * jac(i, a) * jac(j, b);
            out(a, b) = s;
        }
    return out;
}

/// Tensorial law T'_abc = T_ijk J^i_a J^j_b J^k_c (valid for the score-moment tensor).
inline Tensor3 transport_tensor(const Tensor3 &t, const Tensor2 &jac) {
    const std::size_t n = t.dim();
    Tensor3 tmp1(n), tmp2(n), out(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0;
                for (std::size_t i = 0; i < n; ++i) s += t(i, j, k) * jac(i, a);
                tmp1(a, j, k) = s;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0;
                for (std::size_t j = 0; j < n; ++j) s += tmp1(a, j, k) * jac(j, b);
                tmp2(a, b, k) = s;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                double s = 0;
                for (std::size_t k = 0; k < n; ++k) s += tmp2(a, b, k) * jac(k, c);
                out(a, b, c) = s;
            }
    return out;
}

/// Third derivative of D(P||P+dx) under a nonlinear change of chart. Because
/// the first derivative vanishes at dx = 0 the only extra piece is the
/// metric times the chart's second derivatives:
///   T'_abc = T_ijk J^i_a J^j_b J^k_c + g_ij (H^i_ab J^j_c + H^i_bc J^j_a + H^i_ca J^j_b)
inline Tensor3 transport_expansion_cubic(const Tensor3 &t, const Tensor2 &g, const Tensor2 &jac,
                                         const Tensor3 &hess) {
    const std::size_t n = t.dim();
    Tensor3 out = transport_tensor(t, jac);
    // gh(j, a, b) = g_ij H^i_ab
    Tensor3 gh(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double s = 0;
                for (std::size_t i = 0; i < n; ++i) s += g(i, j) * hess(i, a, b);
                gh(j, a, b) = s;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                double s = 0;
                for (std::size_t j = 0; j < n; ++j)
                    s += gh(j, a, b) * jac(j, c) + gh(j, b, c) * jac(j, a) + gh(j, c, a) * jac(j, b);
                out(a, b, c) += s;
            }
    return out;
}

}  // namespace geo
