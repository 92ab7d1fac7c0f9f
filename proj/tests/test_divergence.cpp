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


#include <cmath>
#include <random>

#include "geo/divergence.hpp"
#include "gtest/gtest.h"

using namespace geo;

namespace {

double categorical_kl(const Vec &p, const Vec &q) {
    double s = 0, lp = 1, lq = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p[i] * std::log(p[i] / q[i]);
        lp -= p[i], lq -= q[i];
    }
    return s + lp * std::log(lp / lq);
}

std::vector<ClassicalFamily> all_families() {
    return {ClassicalFamily::gaussian_fixed_sigma(1.3), ClassicalFamily::exponential_scale(),
            ClassicalFamily::bernoulli(), ClassicalFamily::categorical(3), ClassicalFamily::gaussian_full()};
}

Vec interior_point(const ClassicalFamily &f) {
    switch (f.kind()) {
        case FamilyKind::gaussian_fixed_sigma: return {0.4};
        case FamilyKind::exponential_scale: return {1.7};
        case FamilyKind::bernoulli: return {0.3};
        case FamilyKind::categorical: return {0.2, 0.5};
        case FamilyKind::gaussian_full: return {-0.3, 1.4};
    }
    return {};
}

}  // namespace

TEST(log1pmx, matches_direct_form_away_from_zero) {
    for (double a : {-0.9, -0.5, -0.2, 0.1, 0.24, 0.26, 1.0, 7.0})
        EXPECT_NEAR(log1pmx(a), std::log1p(a) - a, 1e-15 * std::max(1.0, std::abs(a)));
}

TEST(log1pmx, keeps_relative_precision_near_zero) {
    // -a^2/2 + a^3/3 - a^4/4
    for (double a : {1e-3, -1e-3, 1e-6}) {
        const double series = -a * a / 2 + a * a * a / 3 - a * a * a * a / 4;
        EXPECT_NEAR(log1pmx(a) / series, 1.0, 1e-9);
    }
}

TEST(divergence, spec_examples) {
    const auto cat2 = ClassicalFamily::categorical(2);
    EXPECT_EQ(cat2(Vec{0.5}, Vec{0.5}), 0.0);
    EXPECT_NEAR(ClassicalFamily::exponential_scale()(Vec{1}, Vec{2}), 1 - std::log(2.0), 1e-15);
    EXPECT_NEAR(ClassicalFamily::gaussian_fixed_sigma(1)(Vec{0}, Vec{0.1}), 0.005, 1e-16);
}

TEST(divergence, categorical_matches_direct_sum) {
    const auto cat = ClassicalFamily::categorical(4);
    const Vec p{0.1, 0.2, 0.3}, q{0.25, 0.25, 0.25};
    EXPECT_NEAR(cat(p, q), categorical_kl(p, q), 1e-15);
    EXPECT_NEAR(ClassicalFamily::bernoulli()(Vec{0.7}, Vec{0.3}), 0.4 * std::log(7.0 / 3.0), 1e-15);
}

TEST(divergence, gaussian_full_closed_form) {
    const auto g = ClassicalFamily::gaussian_full();
    const double m1 = 0.2, s1 = 0.8, m2 = -0.5, s2 = 1.7;
    const double want = std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2 * s2 * s2) - 0.5;
    EXPECT_NEAR(g(Vec{m1, s1}, Vec{m2, s2}), want, 1e-14);
}

TEST(divergence, domain_and_usage_errors) {
    const auto b = ClassicalFamily::bernoulli();
    EXPECT_THROW(b(Vec{1.0}, Vec{0.5}), DomainError);
    EXPECT_THROW(b(Vec{0.5, 0.1}, Vec{0.5}), DimensionMismatch);
    EXPECT_THROW(ClassicalFamily::exponential_scale()(Vec{-1}, Vec{1}), DomainError);
    EXPECT_THROW(ClassicalFamily::categorical(3)(Vec{0.6, 0.5}, Vec{0.2, 0.2}), DomainError);
    const auto e = ClassicalFamily::exponential_scale();
    EXPECT_THROW(evaluate(e, {{1.0}, "bernoulli"}, {{2.0}, "exponential"}), UsageError);
    EXPECT_NEAR(evaluate(e, {{1.0}, "exponential"}, {{2.0}, "exponential"}), 1 - std::log(2.0), 1e-15);
}

TEST(divergence, nonnegative_on_random_pairs) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (const auto &f : all_families()) {
        int checked = 0;
        while (checked < 10000) {
            Vec p, q;
            switch (f.kind()) {
                case FamilyKind::gaussian_fixed_sigma: p = {u(rng) * 10 - 5}; q = {u(rng) * 10 - 5}; break;
                case FamilyKind::exponential_scale: p = {u(rng) * 5}; q = {u(rng) * 5}; break;
                case FamilyKind::bernoulli: p = {u(rng)}; q = {u(rng)}; break;
                case FamilyKind::categorical: p = {u(rng), u(rng)}; q = {u(rng), u(rng)}; break;
                case FamilyKind::gaussian_full: p = {u(rng) * 4 - 2, u(rng) * 3}; q = {u(rng) * 4 - 2, u(rng) * 3}; break;
            }
            if (!f.contains(p) || !f.contains(q)) continue;
            ASSERT_GE(f(p, q), 0.0) << f.id();
            ++checked;
        }
    }
}

TEST(fisher_metric, closed_forms) {
    EXPECT_DOUBLE_EQ(fisher_metric(ClassicalFamily::gaussian_fixed_sigma(2), Vec{3})(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(fisher_metric(ClassicalFamily::exponential_scale(), Vec{2})(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(fisher_metric(ClassicalFamily::bernoulli(), Vec{0.5})(0, 0), 4.0);
    const Tensor2 g = fisher_metric(ClassicalFamily::categorical(3), Vec{0.2, 0.3});
    EXPECT_NEAR(g(0, 0), 1 / 0.2 + 1 / 0.5, 1e-12);
    EXPECT_NEAR(g(0, 1), 1 / 0.5, 1e-12);
    EXPECT_NEAR(g(1, 1), 1 / 0.3 + 1 / 0.5, 1e-12);
    const Tensor2 gg = fisher_metric(ClassicalFamily::gaussian_full(), Vec{0, 2});
    EXPECT_NEAR(gg(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(gg(1, 1), 0.5, 1e-15);
    EXPECT_EQ(gg(0, 1), 0.0);
}

TEST(score_moment, spec_examples) {
    EXPECT_EQ(score_moment_tensor(ClassicalFamily::gaussian_fixed_sigma(1), Vec{0.7}).max_abs(), 0.0);
    EXPECT_NEAR(score_moment_tensor_natural(ClassicalFamily::exponential_scale(), Vec{1})(0, 0, 0), 2.0, 1e-12);
    EXPECT_NEAR(score_moment_tensor_natural(ClassicalFamily::bernoulli(), Vec{0.5})(0, 0, 0), 0.0, 1e-12);
}

TEST(score_moment, quadrature_agrees_with_closed_form) {
    for (const auto &f : all_families()) {
        const Vec x = interior_point(f);
        const Tensor3 a = score_moment_tensor(f, x, ScoreMomentMethod::closed_form);
        const Tensor3 b = score_moment_tensor(f, x, ScoreMomentMethod::quadrature);
        const double scale = std::max(1.0, a.max_abs());
        for (std::size_t i = 0; i < a.data().size(); ++i)
            EXPECT_NEAR(a.data()[i], b.data()[i], 1e-9 * scale) << f.id();
    }
}

TEST(score_moment, categorical_by_enumeration) {
    // E[s_a s_b s_c] with s_a(x) = [x=a]/p_a - [x=k]/p_k
    const Vec p{0.2, 0.3};
    const double pk = 0.5;
    const Tensor3 t = score_moment_tensor(ClassicalFamily::categorical(3), p);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c) {
                double want = 0;
                for (int x = 0; x < 3; ++x) {
                    const double px = x < 2 ? p[x] : pk;
                    auto s = [&](std::size_t i) { return (x == static_cast<int>(i) ? 1 / p[i] : 0.0) - (x == 2 ? 1 / pk : 0.0); };
                    want += px * s(a) * s(b) * s(c);
                }
                EXPECT_NEAR(t(a, b, c), want, 1e-12);
            }
}

TEST(natural_chart, spec_examples) {
    const NaturalChart e(ClassicalFamily::exponential_scale());
    EXPECT_DOUBLE_EQ(e.to_natural(Vec{1.5})[0], -1.5);
    EXPECT_DOUBLE_EQ(e.jacobian_to_natural(Vec{1.5})(0, 0), -1.0);
    const NaturalChart b(ClassicalFamily::bernoulli());
    EXPECT_NEAR(b.to_natural(Vec{0.8})[0], std::log(4.0), 1e-15);
    const NaturalChart g(ClassicalFamily::gaussian_fixed_sigma(1));
    EXPECT_DOUBLE_EQ(g.to_natural(Vec{0.3})[0], 0.3);
}

TEST(natural_chart, round_trip_and_derivatives_by_finite_differences) {
    for (const auto &f : all_families()) {
        const NaturalChart chart(f);
        const Vec x = interior_point(f);
        const Vec eta = chart.to_natural(x);
        const Vec back = chart.from_natural(eta);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-13) << f.id();

        const std::size_t n = x.size();
        const double h = 1e-5;
        const Tensor2 jt = chart.jacobian_to_natural(x);
        const Tensor3 ht = chart.hessian_to_natural(x);
        const Tensor2 jf = chart.jacobian_from_natural(eta);
        const Tensor3 hf = chart.hessian_from_natural(eta);
        for (std::size_t a = 0; a < n; ++a) {
            Vec xp = x, xm = x, ep = eta, em = eta;
            xp[a] += h, xm[a] -= h, ep[a] += h, em[a] -= h;
            const Vec tp = chart.to_natural(xp), tm = chart.to_natural(xm);
            const Vec fp = chart.from_natural(ep), fm = chart.from_natural(em);
            const Tensor2 jtp = chart.jacobian_to_natural(xp), jtm = chart.jacobian_to_natural(xm);
            const Tensor2 jfp = chart.jacobian_from_natural(ep), jfm = chart.jacobian_from_natural(em);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(jt(i, a), (tp[i] - tm[i]) / (2 * h), 1e-6 * std::max(1.0, std::abs(jt(i, a)))) << f.id();
                EXPECT_NEAR(jf(i, a), (fp[i] - fm[i]) / (2 * h), 1e-6 * std::max(1.0, std::abs(jf(i, a)))) << f.id();
                for (std::size_t b = 0; b < n; ++b) {
                    EXPECT_NEAR(ht(i, a, b), (jtp(i, b) - jtm(i, b)) / (2 * h), 1e-5 * std::max(1.0, std::abs(ht(i, a, b))))
                        << f.id();
                    EXPECT_NEAR(hf(i, a, b), (jfp(i, b) - jfm(i, b)) / (2 * h), 1e-5 * std::max(1.0, std::abs(hf(i, a, b))))
                        << f.id();
                }
            }
        }
    }
}

TEST(natural_chart, bregman_identity) {
    // KL(p||q) = psi(eta_q) - psi(eta_p) - <grad psi(eta_p), eta_q - eta_p>
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const auto &f : all_families()) {
        const NaturalChart chart(f);
        for (int trial = 0; trial < 200; ++trial) {
            Vec p = interior_point(f), q = interior_point(f);
            for (double &v : p) v *= 0.6 + 0.5 * u(rng);
            for (double &v : q) v *= 0.6 + 0.5 * u(rng);
            if (!f.contains(p) || !f.contains(q)) continue;
            const Vec ep = chart.to_natural(p), eq = chart.to_natural(q);
            const Vec grad = chart.log_partition_gradient(ep);
            double breg = chart.log_partition(eq) - chart.log_partition(ep);
            for (std::size_t i = 0; i < ep.size(); ++i) breg -= grad[i] * (eq[i] - ep[i]);
            const double kl = f(p, q);
            EXPECT_NEAR(kl, breg, 1e-12 * std::max(1.0, std::abs(kl)) + 1e-14) << f.id();
        }
    }
}

TEST(natural_chart, score_moment_is_third_derivative_of_log_partition) {
    for (const auto &f : all_families()) {
        const NaturalChart chart(f);
        const Vec x = interior_point(f);
        const Vec eta = chart.to_natural(x);
        const Tensor3 t = score_moment_tensor_natural(f, x);
        const std::size_t n = eta.size();
        const double h = 1e-3;
        // third derivative from central differences of the analytic gradient
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                auto gi = [&](double di, double dj) {
                    Vec e = eta;
                    e[i] += di, e[j] += dj;
                    return chart.log_partition_gradient(e);
                };
                const Vec pp = gi(h, h), pm = gi(h, -h), mp = gi(-h, h), mm = gi(-h, -h);
                for (std::size_t k = 0; k < n; ++k) {
                    const double fd = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * h * h);
                    EXPECT_NEAR(t(i, j, k), fd, 1e-4 * std::max(1.0, t.max_abs())) << f.id();
                }
            }
    }
}

TEST(natural_chart_divergence, matches_default_chart) {
    const auto f = ClassicalFamily::categorical(3);
    const NaturalChartDivergence nd(f);
    const NaturalChart chart(f);
    const Vec p{0.2, 0.3}, q{0.4, 0.1};
    EXPECT_NEAR(nd(chart.to_natural(p), chart.to_natural(q)), f(p, q), 1e-14);
    EXPECT_EQ(nd.chart_name(), "natural");
}
