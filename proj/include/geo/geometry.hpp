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

/// Metric and cubic coefficients of D(P||P+dx) by central finite differences.
///
/// Both stencils are nested central differences: the metric uses the corners
/// of the (i, j) square, the cubic term the 8 corners of the (i, j, k) cube.
/// With repeated indices corners coincide, so the stencil reaches 2h (metric)
/// and 3h (cubic) along an axis. Truncation error is O(h^2) for both; the
/// optional Richardson step combines h and h/2 to cancel it.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geo/divergence.hpp"
#include "geo/error.hpp"
#include "geo/tensor.hpp"

namespace geo {

inline constexpr double kDefaultMetricStep = 1e-3;
inline constexpr double kDefaultCubicStep = 5e-2;

struct ExtractOptions {
    double h = 0;  ///< 0 selects the per-order default
    /// evaluate at h, h/2, h/4; extrapolate (4A(h/4) - A(h/2))/3, the coarsest level
    /// only feeds the conditioning check
    bool richardson = true;
};

struct MetricTensor {
    Tensor2 components;
    Vec base_point;
    double step = 0;
    std::string method;
    double symmetry_residual = 0;  ///< relative, before symmetrization
    double min_eigenvalue = 0;
    bool positive_semidefinite = true;
};

struct CubicTensor {
    Tensor3 components;
    Vec base_point;
    double step = 0;
    std::string method;
    double symmetry_residual = 0;  ///< relative, before symmetrization
    double rounding_noise = 0;     ///< estimated absolute rounding error of the components
};

namespace detail {

/// Evaluates F(dx) = D(p || p + dx), caching by integer offset multiples of h.
template <Divergence D>
class StencilProbe {
   public:
    StencilProbe(const D &div, std::span<const double> p, double h) : div_(div), p_(p.begin(), p.end()), h_(h) {
    }

    double operator()(const std::vector<int> &offset) {
        auto it = cache_.find(offset);
        if (it != cache_.end()) return it->second;
        Vec q = p_;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += offset[i] * h_;
        if (!div_.contains(q)) throw DomainError(div_.id() + ": finite-difference stencil leaves the domain; reduce h");
        const double v = div_(p_, q);
        max_abs_ = std::max(max_abs_, std::abs(v));
        cache_.emplace(offset, v);
        return v;
    }

    double max_abs() const noexcept {
        return max_abs_;
    }

   private:
    const D &div_;
    Vec p_;
    double h_;
    double max_abs_ = 0;
    std::map<std::vector<int>, double> cache_;
};

template <Divergence D>
Tensor2 raw_metric(const D &div, std::span<const double> p, double h, double *max_f = nullptr) {
    const std::size_t n = div.dimension();
    StencilProbe<D> f(div, p, h);
    Tensor2 g(n);
    std::vector<int> off(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (int si : {-1, 1})
                for (int sj : {-1, 1}) {
                    std::fill(off.begin(), off.end(), 0);
                    off[i] += si;
                    off[j] += sj;
                    s += si * sj * f(off);
                }
            g(i, j) = s / (4 * h * h);
        }
    if (max_f) *max_f = std::max(*max_f, f.max_abs());
    return g;
}

struct RawCubic {
    Tensor3 t;
    double max_f = 0;
    double metric_scale = 0;  ///< max_i g_ii from the +-h axis points
};

template <Divergence D>
RawCubic raw_cubic(const D &div, std::span<const double> p, double h) {
    const std::size_t n = div.dimension();
    StencilProbe<D> f(div, p, h);
    RawCubic out{Tensor3(n)};
    std::vector<int> off(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double s = 0;
                for (int si : {-1, 1})
                    for (int sj : {-1, 1})
                        for (int sk : {-1, 1}) {
                            std::fill(off.begin(), off.end(), 0);
                            off[i] += si;
                            off[j] += sj;
                            off[k] += sk;
                            s += si * sj * sk * f(off);
                        }
                out.t(i, j, k) = s / (8 * h * h * h);
            }
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(off.begin(), off.end(), 0);
        off[i] = 1;
        const double fp = f(off);
        off[i] = -1;
        const double fm = f(off);
        out.metric_scale = std::max(out.metric_scale, std::abs(fp + fm) / (h * h));
    }
    out.max_f = f.max_abs();
    return out;
}

/// Rounding noise of an order-`order` difference quotient of a divergence whose
/// evaluation carries ~1e-16 absolute error on O(1) intermediate terms.
inline double rounding_noise(double max_f, double h, int order) {
    return 1e-16 * std::max(1.0, max_f) / std::pow(h, order);
}

/// Flags a Richardson ladder A(h), A(h/2), A(h/4) whose successive differences do
/// not shrink at roughly the expected factor 4 (allowing 10x either way).
inline void check_richardson(std::span<const double> a1, std::span<const double> a2, std::span<const double> a3,
                             double noise) {
    std::size_t worst = 0;
    double worst_d = -1;
    for (std::size_t i = 0; i < a1.size(); ++i) {
        const double d = std::abs(a1[i] - a2[i]);
        if (d > worst_d) worst_d = d, worst = i;
    }
    const double d1 = a1[worst] - a2[worst], d2 = a2[worst] - a3[worst];
    const double floor = 100 * noise;
    if (std::abs(d1) <= floor || std::abs(d2) <= floor) return;
    const double ratio = d1 / d2;
    if (ratio < 4.0 / 10 || ratio > 4.0 * 10)
        throw ConditioningError("Richardson differences shrink by " + std::to_string(ratio) +
                                " instead of ~4; the step is outside the asymptotic regime");
}

}  // namespace detail

/// g_ij = d2/dx_i dx_j D(p || p + dx) at dx = 0.
template <Divergence D>
MetricTensor extract_metric(const D &div, std::span<const double> p, ExtractOptions opts = {}) {
    const double h = opts.h > 0 ? opts.h : kDefaultMetricStep;
    if (!div.contains(p)) throw DomainError(div.id() + ": base point outside the domain");
    MetricTensor m;
    m.base_point.assign(p.begin(), p.end());
    m.step = h;
    double max_f = 0;
    Tensor2 raw = detail::raw_metric(div, p, h, &max_f);
    if (opts.richardson) {
        const Tensor2 half = detail::raw_metric(div, p, h / 2, &max_f);
        const Tensor2 quarter = detail::raw_metric(div, p, h / 4, &max_f);
        detail::check_richardson(raw.data(), half.data(), quarter.data(), detail::rounding_noise(max_f, h / 4, 2));
        Tensor2 r(raw.dim());
        for (std::size_t i = 0; i < raw.dim(); ++i)
            for (std::size_t j = 0; j < raw.dim(); ++j) r(i, j) = (4 * quarter(i, j) - half(i, j)) / 3;
        raw = r;
        m.method = "central-2+richardson";
    } else {
        m.method = "central-2";
    }
    const std::size_t n = raw.dim();
    double resid = 0;
    Tensor2 g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            resid = std::max(resid, std::abs(raw(i, j) - raw(j, i)));
            g(i, j) = 0.5 * (raw(i, j) + raw(j, i));
        }
    m.symmetry_residual = resid / std::max(g.max_abs(), std::numeric_limits<double>::min());
    Eigen::MatrixXd em(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) em(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em, Eigen::EigenvaluesOnly);
    m.min_eigenvalue = es.eigenvalues().minCoeff();
    m.positive_semidefinite = m.min_eigenvalue >= -1e-8;
    m.components = std::move(g);
    return m;
}

/// T_ijk = d3/dx_i dx_j dx_k D(p || p + dx) at dx = 0.
template <Divergence D>
CubicTensor extract_cubic(const D &div, std::span<const double> p, ExtractOptions opts = {}) {
    const double h = opts.h > 0 ? opts.h : kDefaultCubicStep;
    if (!div.contains(p)) throw DomainError(div.id() + ": base point outside the domain");
    CubicTensor c;
    c.base_point.assign(p.begin(), p.end());
    c.step = h;
    detail::RawCubic raw = detail::raw_cubic(div, p, h);
    double max_f = raw.max_f, h_min = h;
    const double scale = raw.metric_scale;
    Tensor3 t = raw.t;
    if (opts.richardson) {
        const detail::RawCubic half = detail::raw_cubic(div, p, h / 2);
        const detail::RawCubic quarter = detail::raw_cubic(div, p, h / 4);
        max_f = std::max({max_f, half.max_f, quarter.max_f});
        h_min = h / 4;
        detail::check_richardson(raw.t.data(), half.t.data(), quarter.t.data(), detail::rounding_noise(max_f, h_min, 3));
        for (std::size_t i = 0; i < t.dim(); ++i)
            for (std::size_t j = 0; j < t.dim(); ++j)
                for (std::size_t k = 0; k < t.dim(); ++k) t(i, j, k) = (4 * quarter.t(i, j, k) - half.t(i, j, k)) / 3;
        c.method = "corner-8+richardson";
    } else {
        c.method = "corner-8";
    }
    Tensor3 sym = t.symmetrized();
    c.symmetry_residual = t.permutation_residual() / std::max(sym.max_abs(), std::numeric_limits<double>::min());
    c.rounding_noise = detail::rounding_noise(max_f, h_min, 3);
    const double reference = std::max(sym.max_abs(), std::pow(scale, 1.5));
    if (c.rounding_noise > 0.01 * reference)
        throw NoisePanic("estimated rounding noise " + std::to_string(c.rounding_noise) +
                         " exceeds 1% of the tensor scale; increase h");
    c.components = std::move(sym);
    return c;
}

struct AsymmetryProbe {
    Vec base_point;
    Vec direction;
    std::vector<double> steps;
    std::vector<double> values;  ///< D(P||P+hv) - D(P+hv||P)
    std::size_t points_used = 0;
    bool identically_symmetric = false;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double cubic_coefficient = std::numeric_limits<double>::quiet_NaN();  ///< c in value ~ c h^3
    double t_vvv = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();  ///< c / T_vvv
};

/// For exponential families in natural coordinates
///   D(eta||eta+d) = psi''d^2/2 + psi'''d^3/6,  D(eta+d||eta) = psi''d^2/2 + psi'''d^3/3,
/// so the antisymmetric part is -(1/6) T_vvv h^3.
inline constexpr double kBregmanAsymmetryRatio = -1.0 / 6.0;

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <Divergence D>
AsymmetryProbe asymmetry_probe(const D &div, std::span<const double> p, std::span<const double> v,
                               std::span<const double> steps, ExtractOptions cubic_opts = {0, true}) {
    if (v.size() != div.dimension()) throw DimensionMismatch("direction dimension does not match the chart");
    if (steps.size() < 4) throw UsageError("asymmetry probe needs at least 4 step sizes");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0)) throw UsageError("step sizes must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1])) throw UsageError("step sizes must be strictly decreasing");
    }
    if (!div.contains(p)) throw DomainError(div.id() + ": base point outside the domain");
    AsymmetryProbe probe;
    probe.base_point.assign(p.begin(), p.end());
    probe.direction.assign(v.begin(), v.end());
    probe.steps.assign(steps.begin(), steps.end());
    std::vector<double> hs, vals;
    for (double h : steps) {
        Vec q(p.begin(), p.end());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += h * v[i];
        if (!div.contains(q)) throw DomainError(div.id() + ": displaced point leaves the domain");
        const double a = div(p, q) - div(q, p);
        probe.values.push_back(a);
        if (std::abs(a) > 100 * std::numeric_limits<double>::epsilon()) {
            hs.push_back(h);
            vals.push_back(a);
        }
    }
    probe.points_used = hs.size();
    if (hs.size() < 2) {
        probe.identically_symmetric = true;
        return probe;
    }
    probe.slope = loglog_slope(hs, vals);
    // a/h^3 = c + d h  ->  intercept c
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double y = vals[i] / (hs[i] * hs[i] * hs[i]);
        sx += hs[i], sy += y, sxx += hs[i] * hs[i], sxy += hs[i] * y;
    }
    const double d = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    probe.cubic_coefficient = (sy - d * sx) / n;
    const CubicTensor t = extract_cubic(div, p, cubic_opts);
    probe.t_vvv = t.components.contract(v);
    if (std::abs(probe.t_vvv) > 1e-9 * std::max(1.0, t.components.max_abs()))
        probe.ratio = probe.cubic_coefficient / probe.t_vvv;
    return probe;
}

struct ConvergenceRow {
    double h = 0;
    double metric_error = std::numeric_limits<double>::quiet_NaN();
    double cubic_error = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceReport {
    Vec base_point;
    std::vector<ConvergenceRow> rows;
    std::optional<double> metric_order;  ///< fitted slope of log error vs log h
    std::optional<double> cubic_order;
    bool metric_exact = false;  ///< every metric error below 1e-12
};

namespace detail {

inline double relative_error(std::span<const double> got, std::span<const double> want) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num = std::max(num, std::abs(got[i] - want[i]));
        den = std::max(den, std::abs(want[i]));
    }
    return den > 0 ? num / den : num;
}

inline std::optional<double> fitted_order(const std::vector<ConvergenceRow> &rows, double ConvergenceRow::*field) {
    std::vector<double> hs, es;
    for (const auto &r : rows) {
        const double e = r.*field;
        if (std::isfinite(e) && e > 1e-13) hs.push_back(r.h), es.push_back(e);
    }
    if (hs.size() < 2) return std::nullopt;
    return loglog_slope(hs, es);
}

}  // namespace detail

/// Plain (non-extrapolated) extraction error across a ladder of steps against
/// oracle tensors in the same chart.
template <Divergence D>
ConvergenceReport convergence_report(const D &div, std::span<const double> p, std::span<const double> ladder,
                                     const std::optional<Tensor2> &metric_oracle,
                                     const std::optional<Tensor3> &cubic_oracle) {
    if (ladder.empty()) throw UsageError("convergence ladder is empty");
    if (!div.contains(p)) throw DomainError(div.id() + ": base point outside the domain");
    ConvergenceReport rep;
    rep.base_point.assign(p.begin(), p.end());
    for (double h : ladder) {
        if (!(h > 0)) throw UsageError("ladder steps must be positive");
        ConvergenceRow row{h};
        if (metric_oracle) {
            const Tensor2 g = detail::raw_metric(div, p, h);
            row.metric_error = detail::relative_error(g.data(), metric_oracle->data());
        }
        if (cubic_oracle) {
            const detail::RawCubic t = detail::raw_cubic(div, p, h);
            row.cubic_error = detail::relative_error(t.t.data(), cubic_oracle->data());
        }
        rep.rows.push_back(row);
    }
    rep.metric_order = detail::fitted_order(rep.rows, &ConvergenceRow::metric_error);
    rep.cubic_order = detail::fitted_order(rep.rows, &ConvergenceRow::cubic_error);
    rep.metric_exact = metric_oracle.has_value() && std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto &r) {
                           return r.metric_error < 1e-12;
                       });
    return rep;
}

}  // namespace geo
