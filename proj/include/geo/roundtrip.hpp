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

/// Round-trip costs: the three-leg log-return expansion, the cubic work
/// surcharge along paths, and its average over a user-supplied trade measure.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "geo/divergence.hpp"
#include "geo/error.hpp"
#include "geo/geometry.hpp"
#include "geo/montecarlo.hpp"
#include "geo/parse.hpp"

namespace geo {

// ---------------------------------------------------------------------------
// Triangle

enum class LegKind { gaussian, skew_normal, shifted_lognormal, point };

/// Distribution of one leg's simple return x (log-return is log(1+x)).
///   gaussian:          location + scale Z
///   skew-normal:       location xi, scale omega, shape alpha (Azzalini)
///   shifted-lognormal: mean location, sd scale; |shape| is the log-sd, its
///                      sign the sign of the skew
///   point:             x = location
struct LegDistribution {
    LegKind kind = LegKind::gaussian;
    double location = 0;
    double scale = 0;
    double shape = 0;

    static LegDistribution parse(const std::string &spec) {
        const auto colon = spec.find(':');
        const std::string name = spec.substr(0, colon);
        const std::vector<double> args = colon == std::string::npos ? std::vector<double>{} : parse_list(spec.substr(colon + 1));
        LegDistribution d;
        auto need = [&](std::size_t n) {
            if (args.size() != n)
                throw UsageError("leg '" + name + "' takes " + std::to_string(n) + " parameters, got " +
                                 std::to_string(args.size()));
        };
        if (name == "gaussian") {
            need(2);
            d = {LegKind::gaussian, args[0], args[1], 0};
        } else if (name == "skewnormal" || name == "skew-normal") {
            need(3);
            d = {LegKind::skew_normal, args[0], args[1], args[2]};
        } else if (name == "lognormal" || name == "shifted-lognormal") {
            need(3);
            d = {LegKind::shifted_lognormal, args[0], args[1], args[2]};
        } else if (name == "point") {
            need(1);
            d = {LegKind::point, args[0], 0, 0};
        } else {
            throw UsageError("unknown leg distribution '" + name + "'");
        }
        d.validate();
        return d;
    }

    void validate() const {
        if (!std::isfinite(location) || !std::isfinite(scale) || !std::isfinite(shape))
            throw DomainError("leg parameters must be finite");
        if (kind != LegKind::point && !(scale > 0)) throw DomainError("leg scale must be positive");
    }

    std::string to_string() const {
        auto num = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        switch (kind) {
            case LegKind::gaussian: return "gaussian:" + num(location) + "," + num(scale);
            case LegKind::skew_normal: return "skewnormal:" + num(location) + "," + num(scale) + "," + num(shape);
            case LegKind::shifted_lognormal: return "lognormal:" + num(location) + "," + num(scale) + "," + num(shape);
            case LegKind::point: return "point:" + num(location);
        }
        return {};
    }

    double sample(Engine &eng, std::normal_distribution<double> &normal) const {
        switch (kind) {
            case LegKind::gaussian: return location + scale * normal(eng);
            case LegKind::skew_normal: {
                const double delta = shape / std::sqrt(1 + shape * shape);
                const double u0 = normal(eng), v = normal(eng);
                return location + scale * (delta * std::abs(u0) + std::sqrt(1 - delta * delta) * v);
            }
            case LegKind::shifted_lognormal: {
                if (shape == 0) return location + scale * normal(eng);
                const double s = std::abs(shape);
                const double mean = std::exp(0.5 * s * s);
                const double sd = std::sqrt(std::expm1(s * s) * std::exp(s * s));
                const double y = (std::exp(s * normal(eng)) - mean) / sd;
                return location + (shape > 0 ? 1.0 : -1.0) * scale * y;
            }
            case LegKind::point: return location;
        }
        return 0;
    }
};

struct TriangleReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::array<LegDistribution, 3> legs;
    RunningStats exact;          ///< sum_i log(1 + x_i)
    RunningStats quadratic;      ///< sum_i (x_i - x_i^2/2)
    RunningStats cubic;          ///< sum_i (x_i - x_i^2/2 + x_i^3/3)
    RunningStats cubic_term;     ///< (1/3) sum_i x_i^3
    RunningStats quadratic_gap;  ///< exact - quadratic
    RunningStats cubic_gap;      ///< exact - cubic
    std::array<RunningStats, 3> leg_stats;
    std::uint64_t rejections = 0;
    double max_identity_error = 0;  ///< |sum log(1+x) - log prod(1+x)|
};

namespace detail {

inline void merge_triangle(TriangleReport &acc, const TriangleReport &part) {
    acc.exact.merge(part.exact);
    acc.quadratic.merge(part.quadratic);
    acc.cubic.merge(part.cubic);
    acc.cubic_term.merge(part.cubic_term);
    acc.quadratic_gap.merge(part.quadratic_gap);
    acc.cubic_gap.merge(part.cubic_gap);
    for (int i = 0; i < 3; ++i) acc.leg_stats[i].merge(part.leg_stats[i]);
    acc.rejections += part.rejections;
    acc.max_identity_error = std::max(acc.max_identity_error, part.max_identity_error);
}

}  // namespace detail

/// Draws independent legs, rejecting draws with 1 + x <= 0.
inline TriangleReport triangle_simulate(const std::array<LegDistribution, 3> &legs, std::uint64_t samples,
                                        std::uint64_t seed, unsigned threads = 0) {
    if (samples < 1000) throw UsageError("triangle simulation needs at least 10^3 samples");
    for (const auto &l : legs) l.validate();
    TriangleReport rep = run_chunked<TriangleReport>(
        samples, seed, threads,
        [&legs](Engine &eng, std::uint64_t, std::uint64_t count) {
            std::normal_distribution<double> normal;
            TriangleReport part;
            const std::uint64_t reject_cap = 100 * (count + 1);
            for (std::uint64_t t = 0; t < count; ++t) {
                std::array<double, 3> x{};
                for (int i = 0; i < 3; ++i) {
                    double v = legs[i].sample(eng, normal);
                    while (!(1 + v > 0)) {
                        if (++part.rejections > reject_cap) break;
                        v = legs[i].sample(eng, normal);
                    }
                    if (!(1 + v > 0)) return part;  // overflow is reported by the caller
                    x[i] = v;
                    part.leg_stats[i].add(v);
                }
                double exact = 0, quad = 0, cube = 0, prod = 1;
                for (double v : x) {
                    exact += std::log1p(v);
                    quad += v - 0.5 * v * v;
                    cube += v * v * v / 3;
                    prod *= 1 + v;
                }
                part.exact.add(exact);
                part.quadratic.add(quad);
                part.cubic.add(quad + cube);
                part.cubic_term.add(cube);
                part.quadratic_gap.add(exact - quad);
                part.cubic_gap.add(exact - (quad + cube));
                part.max_identity_error = std::max(part.max_identity_error, std::abs(exact - std::log(prod)));
            }
            return part;
        },
        detail::merge_triangle);
    const double draws = static_cast<double>(3 * samples + rep.rejections);
    if (rep.exact.count() != samples || static_cast<double>(rep.rejections) > 0.01 * draws)
        throw RejectionOverflow(std::to_string(rep.rejections) + " draws violated 1 + x > 0 (more than 1%)");
    rep.samples = samples;
    rep.seed = seed;
    rep.legs = legs;
    return rep;
}

// ---------------------------------------------------------------------------
// Work surcharge

/// Source of the cubic tensor field T(x) together with the chart domain.
struct SurchargeModel {
    std::string family_id;
    std::string tensor_method;  ///< "extract" or "oracle"
    std::size_t dimension = 0;
    std::function<bool(std::span<const double>)> contains;
    std::function<Tensor3(std::span<const double>)> cubic;

    template <Divergence D>
    static SurchargeModel extracted(const D &div, ExtractOptions opts = {0, true}) {
        return {div.id(), "extract", div.dimension(), [div](std::span<const double> x) { return div.contains(x); },
                [div, opts](std::span<const double> x) { return extract_cubic(div, x, opts).components; }};
    }

    /// Closed-form expansion coefficient in the family's default chart.
    static SurchargeModel oracle(const ClassicalFamily &family) {
        return {family.id(), "oracle", family.dimension(),
                [family](std::span<const double> x) { return family.contains(x); },
                [family](std::span<const double> x) { return expansion_cubic_oracle(family, x); }};
    }
};

/// (1/6) T_ijk(from) dx^i dx^j dx^k
inline double work_surcharge(const SurchargeModel &model, std::span<const double> from, std::span<const double> step) {
    if (from.size() != model.dimension || step.size() != model.dimension)
        throw DimensionMismatch("point and step must match the chart dimension");
    Vec to(from.begin(), from.end());
    for (std::size_t i = 0; i < to.size(); ++i) to[i] += step[i];
    if (!model.contains(from) || !model.contains(to)) throw DomainError("surcharge step leaves the domain");
    return model.cubic(from).contract(step) / 6.0;
}

struct PathSpec {
    std::string family_id;
    std::vector<Vec> waypoints;
};

/// Reads one comma-separated waypoint per line; blank lines and '#' comments skipped.
inline PathSpec parse_path(const std::string &text, const std::string &family_id) {
    PathSpec path{family_id, {}};
    for (const std::string &raw : split(text, '\n')) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        path.waypoints.push_back(parse_list(line));
    }
    return path;
}

enum class StepConvention { left, midpoint };

struct DemonStep {
    Vec from;
    Vec step;
    double surcharge = 0;
};

struct DemonReport {
    std::string family_id;
    std::string tensor_method;
    StepConvention convention = StepConvention::left;
    std::vector<Vec> waypoints;
    std::vector<DemonStep> steps;
    double total = 0;
    double reversed_total = 0;
    double fourth_order_scale = 0;  ///< C: (1/6) sup |d/ds T(u,u,u)| along the path
    double max_step = 0;
    double cancellation_bound = 0;  ///< C * max_step^4 * steps
    bool within_bound = true;
};

namespace detail {

inline double path_sum(const SurchargeModel &model, const std::vector<Vec> &pts, StepConvention conv,
                       std::vector<DemonStep> *steps) {
    double total = 0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Vec step(pts[k].size()), at = pts[k];
        for (std::size_t i = 0; i < step.size(); ++i) {
            step[i] = pts[k + 1][i] - pts[k][i];
            if (conv == StepConvention::midpoint) at[i] += 0.5 * step[i];
        }
        Vec to = pts[k + 1];
        if (!model.contains(pts[k]) || !model.contains(to)) throw DomainError("path waypoint outside the domain");
        const double w = model.cubic(at).contract(step) / 6.0;
        total += w;
        if (steps) steps->push_back({pts[k], step, w});
    }
    return total;
}

}  // namespace detail

/// Sum of cubic surcharges along the path and along its reverse.
inline DemonReport demon_work(const SurchargeModel &model, const PathSpec &path,
                              StepConvention convention = StepConvention::left) {
    if (path.waypoints.size() < 2) throw UsageError("a path needs at least 2 waypoints");
    for (const Vec &w : path.waypoints) {
        if (w.size() != model.dimension) throw DimensionMismatch("waypoint dimension does not match the chart");
        if (!model.contains(w)) throw DomainError("path waypoint outside the domain");
    }
    DemonReport rep;
    rep.family_id = path.family_id.empty() ? model.family_id : path.family_id;
    rep.tensor_method = model.tensor_method;
    rep.convention = convention;
    rep.waypoints = path.waypoints;
    rep.total = detail::path_sum(model, path.waypoints, convention, &rep.steps);
    std::vector<Vec> reversed(path.waypoints.rbegin(), path.waypoints.rend());
    rep.reversed_total = detail::path_sum(model, reversed, convention, nullptr);

    // Per step, forward + reverse = (1/6)(T(a) - T(b))(d^3) at left points, so by
    // the mean value theorem it is bounded by (1/6) sup|d/ds T(u,u,u)| |d|^4.
    // The sup is taken over quarter-segment difference quotients.
    std::size_t moving = 0;
    for (const DemonStep &s : rep.steps) {
        double len = 0;
        for (double v : s.step) len += v * v;
        len = std::sqrt(len);
        if (len == 0) continue;
        ++moving;
        rep.max_step = std::max(rep.max_step, len);
        Vec u(s.step.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = s.step[i] / len;
        double prev = 0;
        for (int q = 0; q <= 4; ++q) {
            Vec x = s.from;
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.25 * q * s.step[i];
            const double tuuu = model.cubic(x).contract(u);
            if (q > 0) rep.fourth_order_scale = std::max(rep.fourth_order_scale, std::abs(tuuu - prev) / (0.25 * len) / 6);
            prev = tuuu;
        }
    }
    const double m4 = rep.max_step * rep.max_step * rep.max_step * rep.max_step;
    rep.cancellation_bound = rep.fourth_order_scale * m4 * static_cast<double>(moving);
    rep.within_bound = std::abs(rep.total + rep.reversed_total) <= rep.cancellation_bound * (1 + 1e-9) + 1e-15;
    return rep;
}

// ---------------------------------------------------------------------------
// Spread

enum class SamplerKind { fixed, symmetric, uniform, gaussian };

/// Distribution over (point, step) trades.
///   fixed:P..,S..          always (P, S)
///   symmetric:P..,S..      (P, +S) or (P, -S) with equal probability
///   uniform:LO..,HI..,S..  P uniform in the box, step +-S
///   gaussian:P..,sigma     step components iid N(0, sigma^2)
struct TradeSampler {
    SamplerKind kind = SamplerKind::fixed;
    Vec point, step, lo, hi;
    double sigma = 0;
    std::string spec;

    static TradeSampler parse(const std::string &text, std::size_t dim) {
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw UsageError("sampler spec needs 'kind:numbers'");
        const std::string name = text.substr(0, colon);
        const std::vector<double> v = parse_list(text.substr(colon + 1));
        TradeSampler s;
        s.spec = text;
        auto slice = [&](std::size_t from) { return Vec(v.begin() + from, v.begin() + from + dim); };
        auto need = [&](std::size_t n) {
            if (v.size() != n)
                throw UsageError("sampler '" + name + "' needs " + std::to_string(n) + " numbers for a " +
                                 std::to_string(dim) + "-dimensional chart");
        };
        if (name == "fixed" || name == "symmetric") {
            need(2 * dim);
            s.kind = name == "fixed" ? SamplerKind::fixed : SamplerKind::symmetric;
            s.point = slice(0);
            s.step = slice(dim);
        } else if (name == "uniform") {
            need(3 * dim);
            s.kind = SamplerKind::uniform;
            s.lo = slice(0);
            s.hi = slice(dim);
            s.step = slice(2 * dim);
            for (std::size_t i = 0; i < dim; ++i)
                if (!(s.lo[i] <= s.hi[i])) throw UsageError("uniform sampler needs lo <= hi");
        } else if (name == "gaussian") {
            need(dim + 1);
            s.kind = SamplerKind::gaussian;
            s.point = slice(0);
            s.sigma = v[dim];
            if (!(s.sigma > 0)) throw UsageError("gaussian sampler sigma must be positive");
        } else {
            throw UsageError("unknown sampler '" + name + "'");
        }
        return s;
    }

    bool fixed_point() const noexcept {
        return kind != SamplerKind::uniform;
    }

    void draw(Engine &eng, Vec &p, Vec &dx) const {
        std::uniform_real_distribution<double> unit;
        switch (kind) {
            case SamplerKind::fixed:
                p = point, dx = step;
                break;
            case SamplerKind::symmetric: {
                p = point, dx = step;
                if (unit(eng) < 0.5)
                    for (double &v : dx) v = -v;
                break;
            }
            case SamplerKind::uniform: {
                p.resize(lo.size());
                for (std::size_t i = 0; i < lo.size(); ++i) p[i] = lo[i] + (hi[i] - lo[i]) * unit(eng);
                dx = step;
                if (unit(eng) < 0.5)
                    for (double &v : dx) v = -v;
                break;
            }
            case SamplerKind::gaussian: {
                std::normal_distribution<double> normal(0.0, sigma);
                p = point;
                dx.resize(point.size());
                for (double &v : dx) v = normal(eng);
                break;
            }
        }
    }
};

struct SpreadEstimate {
    double mean = 0;
    double standard_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string sampler;
    std::string tensor_method;
};

/// Monte-Carlo mean of the work surcharge over sampled trades.
inline SpreadEstimate spread_estimate(const SurchargeModel &model, const TradeSampler &sampler, std::uint64_t samples,
                                      std::uint64_t seed, unsigned threads = 0) {
    if (samples < 1) throw UsageError("spread estimate needs at least one sample");
    std::optional<Tensor3> fixed_t;
    if (sampler.fixed_point()) {
        if (sampler.point.size() != model.dimension) throw DimensionMismatch("sampler point dimension");
        if (!model.contains(sampler.point)) throw DomainError("sampler point outside the domain");
        fixed_t = model.cubic(sampler.point);
    }
    const RunningStats stats = run_chunked<RunningStats>(
        samples, seed, threads,
        [&](Engine &eng, std::uint64_t, std::uint64_t count) {
            RunningStats s;
            Vec p, dx;
            for (std::uint64_t t = 0; t < count; ++t) {
                sampler.draw(eng, p, dx);
                Vec to = p;
                for (std::size_t i = 0; i < to.size(); ++i) to[i] += dx[i];
                if (!model.contains(p) || !model.contains(to)) throw DomainError("sampled trade leaves the domain");
                const Tensor3 t3 = fixed_t ? *fixed_t : model.cubic(p);
                s.add(t3.contract(dx) / 6.0);
            }
            return s;
        },
        [](RunningStats &acc, const RunningStats &part) { acc.merge(part); });
    return {stats.mean(), stats.standard_error(), samples, seed, sampler.spec, model.tensor_method};
}

}  // namespace geo
