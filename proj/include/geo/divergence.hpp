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

/// Directed divergences on closed-form classical families.
///
/// Convention, used by every module: D(p||q) = E_p[log p - log q]. The first
/// argument is the expansion base; extraction differentiates in the second.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <numbers>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "geo/error.hpp"
#include "geo/quadrature.hpp"
#include "geo/tensor.hpp"

namespace geo {

/// Anything geometry extraction can differentiate: a chart dimension, an open
/// domain predicate and D(p, q).
template <class D>
concept Divergence = requires(const D &d, std::span<const double> x) {
    { d.dimension() } -> std::convertible_to<std::size_t>;
    { d.contains(x) } -> std::convertible_to<bool>;
    { d(x, x) } -> std::convertible_to<double>;
    { d.id() } -> std::convertible_to<std::string>;
};

/// log(1 + a) - a with full relative precision near a = 0.
inline double log1pmx(double a) {
    if (std::abs(a) < 0.25) {
        // -a^2/2 + a^3/3 - a^4/4 + ...
        double term = -a * a;
        double sum = 0;
        for (int n = 2; n < 200; ++n) {
            const double add = term / n;
            sum += add;
            if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
            term *= -a;
        }
        return sum;
    }
    return std::log1p(a) - a;
}

struct CoordinatePoint {
    std::vector<double> coords;
    std::string family_id;
};

struct Direction {
    std::vector<double> components;
};

enum class FamilyKind { gaussian_fixed_sigma, exponential_scale, bernoulli, categorical, gaussian_full };

class ClassicalFamily {
   public:
    static constexpr double kDefaultMargin = 1e-9;

    static ClassicalFamily gaussian_fixed_sigma(double sigma = 1.0) {
        if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("gaussian sigma must be positive");
        ClassicalFamily f(FamilyKind::gaussian_fixed_sigma);
        f.sigma_ = sigma;
        return f;
    }
    static ClassicalFamily exponential_scale() {
        return ClassicalFamily(FamilyKind::exponential_scale);
    }
    static ClassicalFamily bernoulli(double margin = kDefaultMargin) {
        ClassicalFamily f(FamilyKind::bernoulli);
        f.margin_ = margin;
        return f;
    }
    static ClassicalFamily categorical(int k, double margin = kDefaultMargin) {
        if (k < 2) throw DomainError("categorical family needs k >= 2");
        ClassicalFamily f(FamilyKind::categorical);
        f.k_ = k;
        f.margin_ = margin;
        return f;
    }
    static ClassicalFamily gaussian_full() {
        return ClassicalFamily(FamilyKind::gaussian_full);
    }

    FamilyKind kind() const noexcept {
        return kind_;
    }
    double sigma() const noexcept {
        return sigma_;
    }
    int categories() const noexcept {
        return k_;
    }
    double margin() const noexcept {
        return margin_;
    }

    std::string id() const {
        switch (kind_) {
            case FamilyKind::gaussian_fixed_sigma: return "gaussian:" + format_number(sigma_);
            case FamilyKind::exponential_scale: return "exponential";
            case FamilyKind::bernoulli: return "bernoulli";
            case FamilyKind::categorical: return "categorical:" + std::to_string(k_);
            case FamilyKind::gaussian_full: return "gaussian-full";
        }
        return {};
    }

    std::string chart_name() const {
        switch (kind_) {
            case FamilyKind::gaussian_fixed_sigma: return "mean";
            case FamilyKind::exponential_scale: return "rate";
            case FamilyKind::bernoulli: return "probability";
            case FamilyKind::categorical: return "simplex";
            case FamilyKind::gaussian_full: return "mean-sd";
        }
        return {};
    }

    std::size_t dimension() const noexcept {
        switch (kind_) {
            case FamilyKind::categorical: return static_cast<std::size_t>(k_ - 1);
            case FamilyKind::gaussian_full: return 2;
            default: return 1;
        }
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != dimension()) return false;
        for (double v : x)
            if (!std::isfinite(v)) return false;
        switch (kind_) {
            case FamilyKind::gaussian_fixed_sigma: return true;
            case FamilyKind::exponential_scale: return x[0] > 0;
            case FamilyKind::bernoulli: return x[0] > margin_ && x[0] < 1 - margin_;
            case FamilyKind::categorical: {
                double rest = 1;
                for (double v : x) {
                    if (!(v > margin_)) return false;
                    rest -= v;
                }
                return rest > margin_;
            }
            case FamilyKind::gaussian_full: return x[1] > 0;
        }
        return false;
    }

    /// D(p||q).
    double operator()(std::span<const double> p, std::span<const double> q) const {
        require(p);
        require(q);
        if (std::equal(p.begin(), p.end(), q.begin())) return 0.0;
        switch (kind_) {
            case FamilyKind::gaussian_fixed_sigma: {
                const double d = q[0] - p[0];
                return d * d / (2 * sigma_ * sigma_);
            }
            case FamilyKind::exponential_scale:
                return -log1pmx((q[0] - p[0]) / p[0]);
            case FamilyKind::bernoulli: {
                const double d = q[0] - p[0];
                return -p[0] * log1pmx(d / p[0]) - (1 - p[0]) * log1pmx(-d / (1 - p[0]));
            }
            case FamilyKind::categorical: {
                // sum_i p_i (d_i / p_i) = sum_i d_i = 0, so each log term may carry its linear part
                double d_last = 0, p_last = 1, sum = 0;
                for (std::size_t a = 0; a < p.size(); ++a) {
                    const double d = q[a] - p[a];
                    d_last -= d;
                    p_last -= p[a];
                    sum -= p[a] * log1pmx(d / p[a]);
                }
                return sum - p_last * log1pmx(d_last / p_last);
            }
            case FamilyKind::gaussian_full: {
                const double dmu = p[0] - q[0];
                const double w = (p[1] - q[1]) * (p[1] + q[1]) / (q[1] * q[1]);
                return -0.5 * log1pmx(w) + dmu * dmu / (2 * q[1] * q[1]);
            }
        }
        return 0.0;
    }

    void require(std::span<const double> x) const {
        if (x.size() != dimension())
            throw DimensionMismatch(id() + ": expected " + std::to_string(dimension()) + " coordinates, got " +
                                    std::to_string(x.size()));
        if (!contains(x)) throw DomainError(id() + ": point outside the open parameter domain");
    }

   private:
    explicit ClassicalFamily(FamilyKind k) : kind_(k) {
    }

    static std::string format_number(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    FamilyKind kind_;
    double sigma_ = 1.0;
    int k_ = 2;
    double margin_ = kDefaultMargin;
};

static_assert(Divergence<ClassicalFamily>);

inline double evaluate(const ClassicalFamily &family, const CoordinatePoint &p, const CoordinatePoint &q) {
    const std::string id = family.id();
    if (p.family_id != id || q.family_id != id)
        throw UsageError("point family '" + (p.family_id != id ? p.family_id : q.family_id) +
                         "' does not match family '" + id + "'");
    return family(p.coords, q.coords);
}

/// Closed-form Fisher information in the family's default chart.
inline Tensor2 fisher_metric(const ClassicalFamily &family, std::span<const double> x) {
    family.require(x);
    Tensor2 g(family.dimension());
    switch (family.kind()) {
        case FamilyKind::gaussian_fixed_sigma: g(0, 0) = 1 / (family.sigma() * family.sigma()); break;
        case FamilyKind::exponential_scale: g(0, 0) = 1 / (x[0] * x[0]); break;
        case FamilyKind::bernoulli: g(0, 0) = 1 / (x[0] * (1 - x[0])); break;
        case FamilyKind::categorical: {
            double last = 1;
            for (double v : x) last -= v;
            for (std::size_t a = 0; a < x.size(); ++a)
                for (std::size_t b = 0; b < x.size(); ++b) g(a, b) = (a == b ? 1 / x[a] : 0.0) + 1 / last;
            break;
        }
        case FamilyKind::gaussian_full:
            g(0, 0) = 1 / (x[1] * x[1]);
            g(1, 1) = 2 / (x[1] * x[1]);
            break;
    }
    return g;
}

enum class ScoreMomentMethod { closed_form, quadrature };

/// Amari-Chentsov tensor E[d_i l d_j l d_k l] in the default chart. Discrete
/// families sum over outcomes exactly; continuous ones use closed forms, or
/// Gauss-Legendre over a +-12 sd (Gaussian) or [0, 60/theta] (exponential)
/// window when `method` is quadrature. Truncated tails are below 1e-25.
inline Tensor3 score_moment_tensor(const ClassicalFamily &family, std::span<const double> x,
                                   ScoreMomentMethod method = ScoreMomentMethod::closed_form,
                                   int quadrature_order = 64) {
    family.require(x);
    const std::size_t n = family.dimension();
    Tensor3 t(n);
    switch (family.kind()) {
        case FamilyKind::gaussian_fixed_sigma: {
            if (method == ScoreMomentMethod::quadrature) {
                const double s = family.sigma();
                GaussLegendre gl(quadrature_order);
                t(0, 0, 0) = gl.integrate(
                    [&](double z) {
                        const double score = z / s;
                        return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi) * score * score * score;
                    },
                    -12, 12, 8);
            }
            break;
        }
        case FamilyKind::exponential_scale: {
            const double th = x[0];
            if (method == ScoreMomentMethod::closed_form) {
                t(0, 0, 0) = -2 / (th * th * th);
            } else {
                GaussLegendre gl(quadrature_order);
                t(0, 0, 0) = gl.integrate(
                    [&](double v) {
                        const double s = 1 / th - v;
                        return th * std::exp(-th * v) * s * s * s;
                    },
                    0, 60 / th, 8);
            }
            break;
        }
        case FamilyKind::bernoulli: {
            const double p = x[0];
            const double s1 = 1 / p, s0 = -1 / (1 - p);
            t(0, 0, 0) = p * s1 * s1 * s1 + (1 - p) * s0 * s0 * s0;
            break;
        }
        case FamilyKind::categorical: {
            const int k = family.categories();
            std::vector<double> probs(x.begin(), x.end());
            double last = 1;
            for (double v : x) last -= v;
            probs.push_back(last);
            std::vector<double> score(n);
            for (int outcome = 0; outcome < k; ++outcome) {
                for (std::size_t b = 0; b < n; ++b)
                    score[b] = (static_cast<int>(b) == outcome ? 1 / probs[b] : 0.0) -
                               (outcome == k - 1 ? 1 / last : 0.0);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        for (std::size_t c = 0; c < n; ++c)
                            t(a, b, c) += probs[outcome] * score[a] * score[b] * score[c];
            }
            break;
        }
        case FamilyKind::gaussian_full: {
            const double s = x[1];
            if (method == ScoreMomentMethod::closed_form) {
                const double s3 = s * s * s;
                t(0, 0, 1) = t(0, 1, 0) = t(1, 0, 0) = 2 / s3;
                t(1, 1, 1) = 8 / s3;
            } else {
                GaussLegendre gl(quadrature_order);
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t b = 0; b < 2; ++b)
                        for (std::size_t c = 0; c < 2; ++c)
                            t(a, b, c) = gl.integrate(
                                [&](double z) {
                                    const double sc[2] = {z / s, (z * z - 1) / s};
                                    return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi) * sc[a] *
                                           sc[b] * sc[c];
                                },
                                -12, 12, 8);
            }
            break;
        }
    }
    return t;
}

/// Map between a family's default chart and its natural (canonical) parameters,
/// with first and second derivatives in both directions and the log-partition.
class NaturalChart {
   public:
    explicit NaturalChart(ClassicalFamily family) : family_(std::move(family)) {
    }

    const ClassicalFamily &family() const noexcept {
        return family_;
    }
    std::size_t dimension() const noexcept {
        return family_.dimension();
    }

    Vec to_natural(std::span<const double> x) const {
        family_.require(x);
        const std::size_t n = dimension();
        Vec eta(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: eta[0] = x[0] / (family_.sigma() * family_.sigma()); break;
            case FamilyKind::exponential_scale: eta[0] = -x[0]; break;
            case FamilyKind::bernoulli: eta[0] = std::log(x[0] / (1 - x[0])); break;
            case FamilyKind::categorical: {
                const double last = last_prob(x);
                for (std::size_t a = 0; a < n; ++a) eta[a] = std::log(x[a] / last);
                break;
            }
            case FamilyKind::gaussian_full:
                eta[0] = x[0] / (x[1] * x[1]);
                eta[1] = -1 / (2 * x[1] * x[1]);
                break;
        }
        return eta;
    }

    bool natural_in_domain(std::span<const double> eta) const {
        if (eta.size() != dimension()) return false;
        for (double v : eta)
            if (!std::isfinite(v)) return false;
        switch (family_.kind()) {
            case FamilyKind::exponential_scale: return eta[0] < 0;
            case FamilyKind::gaussian_full: return eta[1] < 0;
            default: break;
        }
        return family_.contains(from_natural_unchecked(eta));
    }

    Vec from_natural(std::span<const double> eta) const {
        if (!natural_in_domain(eta)) throw DomainError(family_.id() + ": natural parameters outside domain");
        return from_natural_unchecked(eta);
    }

    /// J(i, a) = d x^i / d eta^a
    Tensor2 jacobian_from_natural(std::span<const double> eta) const {
        const Vec x = from_natural(eta);
        const std::size_t n = dimension();
        Tensor2 j(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: j(0, 0) = family_.sigma() * family_.sigma(); break;
            case FamilyKind::exponential_scale: j(0, 0) = -1; break;
            case FamilyKind::bernoulli: j(0, 0) = x[0] * (1 - x[0]); break;
            case FamilyKind::categorical:
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) j(a, b) = x[a] * ((a == b ? 1.0 : 0.0) - x[b]);
                break;
            case FamilyKind::gaussian_full: {
                const double e1 = eta[0], e2 = eta[1];
                j(0, 0) = -1 / (2 * e2);
                j(0, 1) = e1 / (2 * e2 * e2);
                j(1, 0) = 0;
                j(1, 1) = std::pow(-2 * e2, -1.5);
                break;
            }
        }
        return j;
    }

    /// H(i, a, b) = d2 x^i / d eta^a d eta^b
    Tensor3 hessian_from_natural(std::span<const double> eta) const {
        const Vec x = from_natural(eta);
        const std::size_t n = dimension();
        Tensor3 h(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma:
            case FamilyKind::exponential_scale: break;
            case FamilyKind::bernoulli: h(0, 0, 0) = x[0] * (1 - x[0]) * (1 - 2 * x[0]); break;
            case FamilyKind::categorical:
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        for (std::size_t c = 0; c < n; ++c) {
                            const double dab = a == b, dac = a == c, dbc = b == c;
                            h(a, b, c) = x[a] * (dac - x[c]) * dab - x[a] * (dac - x[c]) * x[b] -
                                         x[a] * x[b] * (dbc - x[c]);
                        }
                break;
            case FamilyKind::gaussian_full: {
                const double e1 = eta[0], e2 = eta[1];
                h(0, 0, 1) = h(0, 1, 0) = 1 / (2 * e2 * e2);
                h(0, 1, 1) = -e1 / (e2 * e2 * e2);
                h(1, 1, 1) = 3 * std::pow(-2 * e2, -2.5);
                break;
            }
        }
        return h;
    }

    /// J(a, i) = d eta^a / d x^i
    Tensor2 jacobian_to_natural(std::span<const double> x) const {
        family_.require(x);
        const std::size_t n = dimension();
        Tensor2 j(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: j(0, 0) = 1 / (family_.sigma() * family_.sigma()); break;
            case FamilyKind::exponential_scale: j(0, 0) = -1; break;
            case FamilyKind::bernoulli: j(0, 0) = 1 / (x[0] * (1 - x[0])); break;
            case FamilyKind::categorical: {
                const double last = last_prob(x);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b) j(a, b) = (a == b ? 1 / x[a] : 0.0) + 1 / last;
                break;
            }
            case FamilyKind::gaussian_full: {
                const double mu = x[0], s = x[1];
                j(0, 0) = 1 / (s * s);
                j(0, 1) = -2 * mu / (s * s * s);
                j(1, 0) = 0;
                j(1, 1) = 1 / (s * s * s);
                break;
            }
        }
        return j;
    }

    /// H(a, i, j) = d2 eta^a / d x^i d x^j
    Tensor3 hessian_to_natural(std::span<const double> x) const {
        family_.require(x);
        const std::size_t n = dimension();
        Tensor3 h(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma:
            case FamilyKind::exponential_scale: break;
            case FamilyKind::bernoulli: {
                const double p = x[0], q = 1 - x[0];
                h(0, 0, 0) = -(1 - 2 * p) / (p * p * q * q);
                break;
            }
            case FamilyKind::categorical: {
                const double last = last_prob(x);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        for (std::size_t c = 0; c < n; ++c)
                            h(a, b, c) = (a == b && a == c ? -1 / (x[a] * x[a]) : 0.0) + 1 / (last * last);
                break;
            }
            case FamilyKind::gaussian_full: {
                const double mu = x.front(), s = x.back();
                h(0, 0, 1) = h(0, 1, 0) = -2 / (s * s * s);
                h(0, 1, 1) = 6 * mu / (s * s * s * s);
                h(1, 1, 1) = -3 / (s * s * s * s);
                break;
            }
        }
        return h;
    }

    /// psi(eta), up to an eta-independent constant.
    double log_partition(std::span<const double> eta) const {
        if (!natural_in_domain(eta)) throw DomainError(family_.id() + ": natural parameters outside domain");
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: {
                const double s2 = family_.sigma() * family_.sigma();
                return 0.5 * s2 * eta[0] * eta[0];
            }
            case FamilyKind::exponential_scale: return -std::log(-eta[0]);
            case FamilyKind::bernoulli: return softplus(eta[0]);
            case FamilyKind::categorical: {
                double m = 0;
                for (double v : eta) m = std::max(m, v);
                double s = std::exp(-m);
                for (double v : eta) s += std::exp(v - m);
                return m + std::log(s);
            }
            case FamilyKind::gaussian_full:
                return -eta[0] * eta[0] / (4 * eta[1]) - 0.5 * std::log(-2 * eta[1]);
        }
        return 0;
    }

    /// grad psi(eta): the expectation parameters.
    Vec log_partition_gradient(std::span<const double> eta) const {
        const std::size_t n = dimension();
        Vec out(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: out[0] = family_.sigma() * family_.sigma() * eta[0]; break;
            case FamilyKind::exponential_scale: out[0] = -1 / eta[0]; break;
            case FamilyKind::bernoulli:
            case FamilyKind::categorical: out = from_natural(eta); break;
            case FamilyKind::gaussian_full: {
                const double mu = -eta[0] / (2 * eta[1]);
                out[0] = mu;
                out[1] = mu * mu - 1 / (2 * eta[1]);
                break;
            }
        }
        return out;
    }

   private:
    static double softplus(double v) {
        return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
    }

    static double last_prob(std::span<const double> x) {
        double last = 1;
        for (double v : x) last -= v;
        return last;
    }

    Vec from_natural_unchecked(std::span<const double> eta) const {
        const std::size_t n = dimension();
        Vec x(n);
        switch (family_.kind()) {
            case FamilyKind::gaussian_fixed_sigma: x[0] = eta[0] * family_.sigma() * family_.sigma(); break;
            case FamilyKind::exponential_scale: x[0] = -eta[0]; break;
            case FamilyKind::bernoulli: x[0] = 1 / (1 + std::exp(-eta[0])); break;
            case FamilyKind::categorical: {
                double m = 0;
                for (double v : eta) m = std::max(m, v);
                double z = std::exp(-m);
                for (double v : eta) z += std::exp(v - m);
                for (std::size_t a = 0; a < n; ++a) x[a] = std::exp(eta[a] - m) / z;
                break;
            }
            case FamilyKind::gaussian_full: {
                const double var = -1 / (2 * eta[1]);
                x[0] = eta[0] * var;
                x[1] = std::sqrt(var);
                break;
            }
        }
        return x;
    }

    ClassicalFamily family_;
};

/// Natural-parameter chart of a built-in exponential family. Every built-in
/// classical family is one, so this never throws UnsupportedFamily for them.
inline NaturalChart natural_chart(const ClassicalFamily &family) {
    return NaturalChart(family);
}

/// A classical family viewed through its natural parameters.
class NaturalChartDivergence {
   public:
    explicit NaturalChartDivergence(ClassicalFamily family) : chart_(std::move(family)) {
    }

    const NaturalChart &chart() const noexcept {
        return chart_;
    }
    std::string id() const {
        return chart_.family().id();
    }
    std::string chart_name() const {
        return "natural";
    }
    std::size_t dimension() const noexcept {
        return chart_.dimension();
    }
    bool contains(std::span<const double> eta) const {
        return chart_.natural_in_domain(eta);
    }
    double operator()(std::span<const double> p, std::span<const double> q) const {
        if (std::equal(p.begin(), p.end(), q.begin(), q.end())) {
            chart_.from_natural(p);
            return 0.0;
        }
        const Vec xp = chart_.from_natural(p), xq = chart_.from_natural(q);
        return chart_.family()(xp, xq);
    }

   private:
    NaturalChart chart_;
};

static_assert(Divergence<NaturalChartDivergence>);

/// Score-moment tensor expressed in natural coordinates.
inline Tensor3 score_moment_tensor_natural(const ClassicalFamily &family, std::span<const double> x) {
    const NaturalChart chart(family);
    const Vec eta = chart.to_natural(x);
    return transport_tensor(score_moment_tensor(family, x), chart.jacobian_from_natural(eta));
}

/// The exact cubic coefficient of D(x||x+dx) in the default chart. In natural
/// coordinates it coincides with the score-moment tensor; in any other chart
/// it picks up a metric times chart-curvature term.
inline Tensor3 expansion_cubic_oracle(const ClassicalFamily &family, std::span<const double> x) {
    const NaturalChart chart(family);
    const Vec eta = chart.to_natural(x);
    const Tensor3 t_nat = score_moment_tensor_natural(family, x);
    const Tensor2 g_nat = transport_metric(fisher_metric(family, x), chart.jacobian_from_natural(eta));
    return transport_expansion_cubic(t_nat, g_nat, chart.jacobian_to_natural(x), chart.hessian_to_natural(x));
}

/// Closed-form reference tensors at a point given in either the default chart
/// or natural coordinates of the family.
struct ChartOracles {
    Tensor2 metric;           ///< Fisher information
    Tensor3 score_moment;     ///< Amari-Chentsov tensor (a true tensor)
    Tensor3 expansion_cubic;  ///< third derivative of D(x||x+dx) in this chart
};

inline ChartOracles oracles_in_chart(const ClassicalFamily &family, std::span<const double> coords, bool natural) {
    if (!natural) return {fisher_metric(family, coords), score_moment_tensor(family, coords),
                          expansion_cubic_oracle(family, coords)};
    const NaturalChart chart(family);
    const Vec x = chart.from_natural(coords);
    const Tensor2 jac = chart.jacobian_from_natural(coords);
    Tensor3 t = transport_tensor(score_moment_tensor(family, x), jac);
    return {transport_metric(fisher_metric(family, x), jac), t, t};
}

}  // namespace geo
