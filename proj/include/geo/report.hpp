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

/// JSON serialization of report records. Complex numbers are [re, im] pairs;
/// tensors are flat row-major arrays with their dimension alongside.

#include "json.hpp"

#include "geo/estimation.hpp"
#include "geo/geometry.hpp"
#include "geo/quantum.hpp"
#include "geo/roundtrip.hpp"

namespace geo {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

inline json to_json(const Complex &z) {
    return json::array({z.real(), z.imag()});
}

inline json to_json(const PureState &s) {
    json a = json::array();
    for (std::size_t i = 0; i < s.dimension(); ++i) a.push_back(to_json(s[i]));
    return a;
}

inline json to_json(const DensityMatrix &rho) {
    json entries = json::array();
    const CMat &m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(to_json(m(i, j)));
    return {{"dimension", rho.dimension()}, {"entries", entries}};
}

inline json to_json(const Tensor2 &t) {
    return {{"dimension", t.dim()}, {"components", to_json(t.data())}};
}

inline json to_json(const Tensor3 &t) {
    return {{"dimension", t.dim()}, {"components", to_json(t.data())}};
}

inline json to_json(const MetricTensor &m) {
    return {{"dimension", m.components.dim()},
            {"components", to_json(m.components.data())},
            {"base_point", to_json(m.base_point)},
            {"h", m.step},
            {"method", m.method},
            {"symmetry_residual", m.symmetry_residual},
            {"min_eigenvalue", m.min_eigenvalue},
            {"positive_semidefinite", m.positive_semidefinite}};
}

inline json to_json(const CubicTensor &c) {
    return {{"dimension", c.components.dim()},
            {"components", to_json(c.components.data())},
            {"base_point", to_json(c.base_point)},
            {"h", c.step},
            {"method", c.method},
            {"symmetry_residual", c.symmetry_residual},
            {"rounding_noise", c.rounding_noise}};
}

inline json rational_field(const Rational &r) {
    return to_fraction_string(r);
}

inline json to_json(const GapReport &g) {
    return {{"N", g.n_copies},
            {"s", to_fraction_string(g.spin)},
            {"s_decimal", to_double(g.spin)},
            {"f_col", to_fraction_string(g.f_col)},
            {"f_col_decimal", to_double(g.f_col)},
            {"f_seq", to_fraction_string(g.f_seq)},
            {"f_seq_decimal", to_double(g.f_seq)},
            {"gap", to_fraction_string(g.gap)},
            {"gap_decimal", to_double(g.gap)},
            {"special_cased", g.special_cased}};
}

inline json to_json(const RunningStats &s) {
    return {{"mean", s.mean()}, {"standard_error", s.standard_error()}, {"count", s.count()}};
}

inline json to_json(const TriangleReport &r) {
    json legs = json::array();
    for (int i = 0; i < 3; ++i) {
        const RunningStats &s = r.leg_stats[i];
        legs.push_back({{"distribution", r.legs[i].to_string()},
                        {"mean", s.mean()},
                        {"sd", std::sqrt(s.variance())},
                        {"third_central_moment", s.third_central_moment()},
                        {"skewness", s.skewness()}});
    }
    return {{"samples", r.samples},
            {"seed", r.seed},
            {"exact_log_return", to_json(r.exact)},
            {"quadratic_truncated", to_json(r.quadratic)},
            {"cubic_truncated", to_json(r.cubic)},
            {"cubic_contribution", to_json(r.cubic_term)},
            {"exact_minus_quadratic", to_json(r.quadratic_gap)},
            {"exact_minus_cubic", to_json(r.cubic_gap)},
            {"truncation_hierarchy_holds", std::abs(r.cubic_gap.mean()) <= std::abs(r.quadratic_gap.mean())},
            {"legs", legs},
            {"rejections", r.rejections},
            {"max_identity_error", r.max_identity_error}};
}

inline const char *sign_word(double v) {
    return v > 0 ? "positive" : v < 0 ? "negative" : "zero";
}

inline json to_json(const DemonReport &d) {
    json steps = json::array();
    for (const DemonStep &s : d.steps)
        steps.push_back({{"from", to_json(s.from)}, {"step", to_json(s.step)}, {"surcharge", s.surcharge}});
    return {{"family", d.family_id},
            {"tensor_method", d.tensor_method},
            {"convention", d.convention == StepConvention::left ? "left" : "midpoint"},
            {"waypoints", d.waypoints},
            {"steps", steps},
            {"total", d.total},
            {"reversed_total", d.reversed_total},
            {"forward_plus_reversed", d.total + d.reversed_total},
            {"sign_observed", sign_word(d.total)},
            {"fourth_order_scale", d.fourth_order_scale},
            {"max_step", d.max_step},
            {"cancellation_bound", d.cancellation_bound},
            {"within_bound", d.within_bound}};
}

inline json to_json(const SpreadEstimate &s) {
    return {{"mean", s.mean},
            {"standard_error", s.standard_error},
            {"samples", s.samples},
            {"seed", s.seed},
            {"sampler", s.sampler},
            {"tensor_method", s.tensor_method}};
}

inline json to_json(const FidelityEstimate &f) {
    return {{"mean", f.mean},
            {"standard_error", f.standard_error},
            {"trials", f.trials},
            {"seed", f.seed},
            {"strategy", f.strategy == GuessStrategy::fixed ? "fixed" : "aligned"}};
}

}  // namespace geo
