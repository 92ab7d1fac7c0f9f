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

/// Command-line front end. Every invocation resolves its options (defaults
/// included) into a config object, executes it and writes one report. A report
/// can be re-run from its own config with `geo --replay report.json`.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geo/any_divergence.hpp"
#include "geo/estimation.hpp"
#include "geo/geometry.hpp"
#include "geo/quantum.hpp"
#include "geo/report.hpp"
#include "geo/roundtrip.hpp"

namespace geo::cli {

namespace detail {

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Vec vec(const json &j) {
    return j.get<Vec>();
}

inline json complex_list(const std::string &text) {
    json a = json::array();
    for (const std::string &part : split(text, ',')) {
        const Complex z = parse_complex(part);
        a.push_back(json::array({z.real(), z.imag()}));
    }
    return a;
}

/// Amplitude entries may be numbers, [re, im] pairs or complex literals.
inline json amplitudes_from_json(const json &state) {
    if (!state.is_array()) throw UsageError("a state must be an array of amplitudes");
    json a = json::array();
    for (const json &amp : state) {
        if (amp.is_number()) {
            a.push_back(json::array({amp.get<double>(), 0.0}));
        } else if (amp.is_array() && amp.size() == 2) {
            a.push_back(json::array({amp[0].get<double>(), amp[1].get<double>()}));
        } else if (amp.is_string()) {
            const Complex z = parse_complex(amp.get<std::string>());
            a.push_back(json::array({z.real(), z.imag()}));
        } else {
            throw UsageError("unrecognized amplitude entry " + amp.dump());
        }
    }
    return a;
}

inline PureState state_from_json(const json &pairs) {
    CVec v(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) v(i) = Complex(pairs[i][0].get<double>(), pairs[i][1].get<double>());
    return PureState::normalized(std::move(v));
}

inline std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline ResolvedFamily family_of(const json &cfg) {
    return resolve_family(cfg.at("family").get<std::string>(), cfg.value("chart", std::string("default")),
                          cfg.value("eps", 1e-3));
}

inline std::optional<ChartOracles> oracles_of(const ResolvedFamily &f, std::span<const double> at) {
    if (!f.classical) return std::nullopt;
    return oracles_in_chart(*f.classical, at, f.natural);
}

inline SurchargeModel surcharge_model(const ResolvedFamily &f, const json &cfg) {
    const std::string method = cfg.at("tensor").get<std::string>();
    if (method == "extract") return SurchargeModel::extracted(f.divergence, {cfg.at("h_cubic").get<double>(), true});
    if (method != "oracle") throw UsageError("tensor source must be 'extract' or 'oracle'");
    if (!f.classical) throw UnsupportedFamily(f.divergence.id() + " has no closed-form cubic oracle");
    const ClassicalFamily fam = *f.classical;
    const bool natural = f.natural;
    const AnyDivergence div = f.divergence;
    return {fam.id(), "oracle", fam.dimension(), [div](std::span<const double> x) { return div.contains(x); },
            [fam, natural](std::span<const double> x) { return oracles_in_chart(fam, x, natural).expansion_cubic; }};
}

// --- executors -------------------------------------------------------------

inline json exec_gap(const json &cfg) {
    if (!cfg.at("table").is_null()) {
        const auto rows = gap_table(cfg.at("table").get<std::uint64_t>());
        json out = json::array();
        bool decreasing = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.push_back(to_json(rows[i]));
            if (i >= 2 && !(rows[i].gap < rows[i - 1].gap)) decreasing = false;
        }
        return {{"rows", out}, {"gap_strictly_decreasing_from_N2", decreasing}};
    }
    return to_json(gap_report(cfg.at("n").get<std::uint64_t>()));
}

inline json exec_estimate(const json &cfg) {
    if (cfg.at("copies").get<int>() != 1)
        throw UsageError("only single-copy (--copies 1) estimation is simulated; use `geo gap` for N >= 2");
    const std::string strategy = cfg.at("strategy").get<std::string>();
    if (strategy != "aligned" && strategy != "fixed") throw UsageError("strategy must be 'aligned' or 'fixed'");
    const FidelityEstimate f =
        mc_single_copy_fidelity(cfg.at("trials").get<std::uint64_t>(), cfg.at("seed").get<std::uint64_t>(),
                                strategy == "fixed" ? GuessStrategy::fixed : GuessStrategy::outcome_aligned,
                                cfg.at("threads").get<unsigned>());
    json out = to_json(f);
    const Rational ref = strategy == "fixed" ? Rational(1, 2) : gap_report(1).f_col;
    out["reference"] = to_fraction_string(ref);
    out["reference_decimal"] = to_double(ref);
    out["z_score"] = f.standard_error > 0 ? (f.mean - to_double(ref)) / f.standard_error : 0.0;
    return out;
}

inline json exec_divergence(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const Vec p = vec(cfg.at("p")), q = vec(cfg.at("q"));
    double value;
    if (f.classical && !f.natural)
        value = evaluate(*f.classical, {p, f.classical->id()}, {q, f.classical->id()});
    else
        value = f.divergence(p, q);
    return {{"family", f.divergence.id()}, {"chart", f.divergence.chart_name()}, {"value", value}};
}

inline json exec_tensor(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const Vec at = vec(cfg.at("at"));
    const bool rich = cfg.at("richardson").get<bool>();
    const MetricTensor g = extract_metric(f.divergence, at, {cfg.at("h_metric").get<double>(), rich});
    const CubicTensor t = extract_cubic(f.divergence, at, {cfg.at("h_cubic").get<double>(), rich});
    json out = {{"family", f.divergence.id()},
                {"chart", f.divergence.chart_name()},
                {"metric", to_json(g)},
                {"cubic", to_json(t)}};
    if (auto o = oracles_of(f, at)) {
        out["oracle"] = {{"metric", to_json(o->metric)},
                         {"expansion_cubic", to_json(o->expansion_cubic)},
                         {"score_moment", to_json(o->score_moment)},
                         {"metric_delta", geo::detail::relative_error(g.components.data(), o->metric.data())},
                         {"cubic_delta", geo::detail::relative_error(t.components.data(), o->expansion_cubic.data())}};
    } else {
        out["oracle"] = nullptr;
        const auto colon = cfg.at("family").get<std::string>().find(':');
        const QuantumChart qc = QuantumChart::parse(cfg.at("family").get<std::string>().substr(colon + 1),
                                                    cfg.at("eps").get<double>());
        out["state"] = to_json(qc.point(at));
    }
    return out;
}

inline json exec_asymmetry(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const Vec at = vec(cfg.at("at")), dir = vec(cfg.at("dir")), steps = vec(cfg.at("steps"));
    const AsymmetryProbe pr = asymmetry_probe(f.divergence, at, dir, steps, {cfg.at("h_cubic").get<double>(), true});
    json out = {{"family", f.divergence.id()},
                {"chart", f.divergence.chart_name()},
                {"steps", to_json(pr.steps)},
                {"values", to_json(pr.values)},
                {"points_used", pr.points_used},
                {"identically_symmetric", pr.identically_symmetric},
                {"slope", pr.slope},
                {"cubic_coefficient", pr.cubic_coefficient},
                {"t_vvv", pr.t_vvv},
                {"ratio", pr.ratio},
                {"bregman_ratio", kBregmanAsymmetryRatio},
                {"one_third_ratio", 1.0 / 3.0},
                {"matches_one_third", std::isfinite(pr.ratio) && std::abs(pr.ratio - 1.0 / 3.0) < 0.05 / 3.0}};
    if (auto o = oracles_of(f, at)) {
        const double svvv = o->score_moment.contract(dir);
        out["score_moment_vvv"] = svvv;
        out["ratio_to_score_moment"] =
            std::abs(svvv) > 1e-12 ? json(pr.cubic_coefficient / svvv) : json(nullptr);
    }
    return out;
}

inline json exec_convergence(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const Vec at = vec(cfg.at("at")), ladder = vec(cfg.at("ladder"));
    const auto o = oracles_of(f, at);
    const ConvergenceReport rep =
        convergence_report(f.divergence, at, ladder, o ? std::optional<Tensor2>(o->metric) : std::nullopt,
                           o ? std::optional<Tensor3>(o->expansion_cubic) : std::nullopt);
    json rows = json::array();
    for (const auto &r : rep.rows) rows.push_back({{"h", r.h}, {"metric_error", r.metric_error}, {"cubic_error", r.cubic_error}});
    return {{"family", f.divergence.id()},
            {"chart", f.divergence.chart_name()},
            {"rows", rows},
            {"metric_order", rep.metric_order ? json(*rep.metric_order) : json(nullptr)},
            {"cubic_order", rep.cubic_order ? json(*rep.cubic_order) : json(nullptr)},
            {"metric_exact", rep.metric_exact},
            {"oracle_available", o.has_value()}};
}

inline std::array<LegDistribution, 3> legs_of(const json &cfg) {
    const auto specs = cfg.at("legs").get<std::vector<std::string>>();
    if (specs.size() != 3) throw UsageError("exactly three legs are required");
    return {LegDistribution::parse(specs[0]), LegDistribution::parse(specs[1]), LegDistribution::parse(specs[2])};
}

inline json exec_triangle(const json &cfg) {
    auto legs = legs_of(cfg);
    const auto samples = cfg.at("samples").get<std::uint64_t>();
    const auto seed = cfg.at("seed").get<std::uint64_t>();
    const auto threads = cfg.at("threads").get<unsigned>();
    const Vec shapes = vec(cfg.at("sweep_shapes"));
    if (shapes.empty()) return to_json(triangle_simulate(legs, samples, seed, threads));
    if (std::none_of(legs.begin(), legs.end(), [](const auto &l) { return l.kind == LegKind::skew_normal; }))
        throw UsageError("a shape sweep needs at least one skew-normal leg");
    json sweep = json::array();
    for (double shape : shapes) {
        for (auto &l : legs)
            if (l.kind == LegKind::skew_normal) l.shape = shape;
        const TriangleReport r = triangle_simulate(legs, samples, seed, threads);
        sweep.push_back({{"shape", shape},
                         {"cubic_contribution", to_json(r.cubic_term)},
                         {"exact_log_return", to_json(r.exact)}});
    }
    return {{"sweep", sweep}};
}

inline json exec_demon(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const SurchargeModel model = surcharge_model(f, cfg);
    PathSpec path{f.divergence.id(), cfg.at("waypoints").get<std::vector<Vec>>()};
    const std::string conv = cfg.at("convention").get<std::string>();
    if (conv != "left" && conv != "midpoint") throw UsageError("convention must be 'left' or 'midpoint'");
    return to_json(demon_work(model, path, conv == "left" ? StepConvention::left : StepConvention::midpoint));
}

inline json exec_spread(const json &cfg) {
    const ResolvedFamily f = family_of(cfg);
    const SurchargeModel model = surcharge_model(f, cfg);
    const TradeSampler sampler = TradeSampler::parse(cfg.at("sampler").get<std::string>(), model.dimension);
    return to_json(spread_estimate(model, sampler, cfg.at("samples").get<std::uint64_t>(),
                                   cfg.at("seed").get<std::uint64_t>(), cfg.at("threads").get<unsigned>()));
}

inline json exec_holonomy(const json &cfg) {
    std::vector<PureState> loop;
    for (const json &s : cfg.at("states")) loop.push_back(state_from_json(s));
    json links = json::array();
    for (std::size_t k = 0; k < loop.size(); ++k)
        links.push_back(fubini_study_distance(loop[k], loop[(k + 1) % loop.size()]));
    json out = {{"phase", bargmann_phase(loop)}, {"states", loop.size()}, {"link_distances", links}};
    if (cfg.at("veronese").get<bool>()) {
        std::vector<PureState> nu;
        for (const PureState &s : loop) nu.push_back(veronese_embed(s));
        out["veronese_phase"] = bargmann_phase(nu);
        const GapReport g = gap_report(2);
        out["spin1_gap"] = to_fraction_string(g.gap);
        out["spin1_gap_decimal"] = to_double(g.gap);
    }
    return out;
}

inline json exec_veronese(const json &cfg) {
    const PureState q = state_from_json(cfg.at("state"));
    const PureState nu = veronese_embed(q);
    json out = {{"state", to_json(q)}, {"embedded", to_json(nu)}, {"embedded_norm", nu.amplitudes().norm()}};
    if (!cfg.at("other").is_null()) {
        const PureState r = state_from_json(cfg.at("other"));
        const PureState nr = veronese_embed(r);
        out["overlap"] = std::abs(inner(q, r));
        out["embedded_overlap"] = std::abs(inner(nu, nr));
        out["fubini_study"] = fubini_study_distance(q, r);
        out["embedded_fubini_study"] = fubini_study_distance(nu, nr);
    }
    return out;
}

}  // namespace detail

/// Runs a resolved config and returns the report document (without timestamp).
inline json execute(const json &cfg) {
    const std::string sub = cfg.at("subcommand").get<std::string>();
    json result;
    if (sub == "gap") result = detail::exec_gap(cfg);
    else if (sub == "estimate") result = detail::exec_estimate(cfg);
    else if (sub == "divergence") result = detail::exec_divergence(cfg);
    else if (sub == "tensor") result = detail::exec_tensor(cfg);
    else if (sub == "asymmetry") result = detail::exec_asymmetry(cfg);
    else if (sub == "convergence") result = detail::exec_convergence(cfg);
    else if (sub == "triangle") result = detail::exec_triangle(cfg);
    else if (sub == "demon") result = detail::exec_demon(cfg);
    else if (sub == "spread") result = detail::exec_spread(cfg);
    else if (sub == "holonomy") result = detail::exec_holonomy(cfg);
    else if (sub == "veronese") result = detail::exec_veronese(cfg);
    else throw UsageError("unknown subcommand '" + sub + "'");
    return {{"schema_version", kSchemaVersion}, {"kind", sub}, {"config", cfg}, {"result", result}};
}

namespace detail {

struct Table {
    std::string columns_note;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline Table plot_table(const json &doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    const json &r = doc.at("result");
    Table t;
    if (kind == "gap") {
        t.columns_note = "N copies; collective-local gap, collective and sequential fidelity as decimals";
        t.header = {"N", "gap", "f_col", "f_seq"};
        const json rows = r.contains("rows") ? r.at("rows") : json::array({r});
        for (const json &row : rows)
            t.rows.push_back({std::to_string(row.at("N").get<std::uint64_t>()), num(row.at("gap_decimal")),
                              num(row.at("f_col_decimal")), num(row.at("f_seq_decimal"))});
        return t;
    }
    if (kind == "convergence") {
        t.columns_note = "log10 step; log10 relative error of the metric and cubic extraction";
        t.header = {"log10_h", "log10_metric_error", "log10_cubic_error"};
        auto lg = [](const json &v) { return v.is_number() ? num(std::log10(v.get<double>())) : std::string("nan"); };
        for (const json &row : r.at("rows"))
            t.rows.push_back({num(std::log10(row.at("h").get<double>())), lg(row.at("metric_error")),
                              lg(row.at("cubic_error"))});
        return t;
    }
    if (kind == "triangle" && r.contains("sweep")) {
        t.columns_note = "skew-normal shape; mean cubic contribution (1/3)sum x^3 and its standard error";
        t.header = {"shape", "mean_cubic_contribution", "standard_error"};
        for (const json &row : r.at("sweep"))
            t.rows.push_back({num(row.at("shape")), num(row.at("cubic_contribution").at("mean")),
                              num(row.at("cubic_contribution").at("standard_error"))});
        return t;
    }
    throw UnsupportedReportKind("no plot data for '" + kind + "' reports (gap, convergence, triangle sweep)");
}

inline Table csv_table(const json &doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    const json &r = doc.at("result");
    Table t;
    if (kind == "gap") {
        t.columns_note = "exact rationals as p/q with decimal companions";
        t.header = {"N", "s", "f_col", "f_col_decimal", "f_seq", "f_seq_decimal", "gap", "gap_decimal", "special_cased"};
        const json rows = r.contains("rows") ? r.at("rows") : json::array({r});
        for (const json &row : rows)
            t.rows.push_back({std::to_string(row.at("N").get<std::uint64_t>()), row.at("s").get<std::string>(),
                              row.at("f_col").get<std::string>(), num(row.at("f_col_decimal")),
                              row.at("f_seq").get<std::string>(), num(row.at("f_seq_decimal")),
                              row.at("gap").get<std::string>(), num(row.at("gap_decimal")),
                              row.at("special_cased").get<bool>() ? "true" : "false"});
        return t;
    }
    if (kind == "convergence") {
        t.columns_note = "step; relative extraction error against the closed-form oracle";
        t.header = {"h", "metric_error", "cubic_error"};
        auto n = [](const json &v) { return v.is_number() ? num(v.get<double>()) : std::string("nan"); };
        for (const json &row : r.at("rows"))
            t.rows.push_back({num(row.at("h")), n(row.at("metric_error")), n(row.at("cubic_error"))});
        return t;
    }
    if (kind == "asymmetry") {
        t.columns_note = "step; D(P||P+hv) - D(P+hv||P)";
        t.header = {"h", "antisymmetric_value"};
        for (std::size_t i = 0; i < r.at("steps").size(); ++i)
            t.rows.push_back({num(r.at("steps")[i]), num(r.at("values")[i])});
        return t;
    }
    if (kind == "demon") {
        t.columns_note = "step index; start point; displacement; cubic surcharge";
        t.header = {"step", "from", "displacement", "surcharge"};
        auto joined = [](const json &v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
            return s;
        };
        std::size_t k = 0;
        for (const json &s : r.at("steps"))
            t.rows.push_back({std::to_string(k++), joined(s.at("from")), joined(s.at("step")), num(s.at("surcharge"))});
        return t;
    }
    if (kind == "triangle") {
        if (r.contains("sweep")) return plot_table(doc);
        t.columns_note = "statistic; sample mean; standard error";
        t.header = {"statistic", "mean", "standard_error"};
        for (const char *key : {"exact_log_return", "quadratic_truncated", "cubic_truncated", "cubic_contribution",
                                "exact_minus_quadratic", "exact_minus_cubic"})
            t.rows.push_back({key, num(r.at(key).at("mean")), num(r.at(key).at("standard_error"))});
        return t;
    }
    throw UnsupportedReportKind("no CSV layout for '" + kind + "' reports");
}

inline std::string render_table(const json &doc, const Table &t, const std::string &generated_at) {
    std::string s = "# geo " + doc.at("kind").get<std::string>() + " report, schema " +
                    std::to_string(doc.at("schema_version").get<int>()) + "\n";
    s += "# columns: " + t.columns_note + "\n";
    s += "# config: " + doc.at("config").dump() + "\n";
    s += "# generated_at: " + generated_at + "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
    s += "\n";
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
        s += "\n";
    }
    return s;
}

}  // namespace detail

/// CSV plot table for sweep-like reports (gap table, convergence ladder,
/// triangle shape sweep).
inline std::string emit_plot_data(const json &doc, const std::string &generated_at = "") {
    return detail::render_table(doc, detail::plot_table(doc), generated_at);
}

inline std::string render(json doc, const std::string &format, const std::string &generated_at) {
    if (format == "json") {
        doc["generated_at"] = generated_at;
        return doc.dump(2) + "\n";
    }
    if (format == "csv") return detail::render_table(doc, detail::csv_table(doc), generated_at);
    if (format == "plot-csv") return emit_plot_data(doc, generated_at);
    throw UsageError("unknown format '" + format + "'");
}

inline void write_atomically(const std::string &path, const std::string &text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) throw UsageError("cannot write '" + tmp.string() + "'");
        o << text;
        if (!o.flush()) throw UsageError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw UsageError("cannot move report into '" + path + "': " + ec.message());
}

/// Entry point: returns the process exit code (0 ok, 1 validation, 2 numerical).
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Divergence geometry toolkit: metric and cubic coefficients, estimation gaps, round-trip costs", "geo"};
    std::string format, out_path, replay;
    app.add_option("--format", format, "json | csv | plot-csv (default: $GEO_DEFAULT_FORMAT or json)")
        ->check(CLI::IsMember({"json", "csv", "plot-csv"}));
    app.add_option("--out", out_path, "write the report to this path instead of stdout");
    app.add_option("--replay", replay, "re-run the config embedded in a JSON report");
    app.require_subcommand(0, 1);
    app.fallthrough();

    // shared option storage
    std::string family, chart = "default", at, dir, steps = "0.1,0.05,0.025,0.0125", ladder = "0.1,0.05,0.025,0.0125";
    std::string p, q, path_file, sampler, tensor = "extract", convention = "left", strategy = "aligned";
    std::string loop_file, state, other, sweep;
    std::vector<std::string> legs, states;
    double eps = 1e-3, h_metric = kDefaultMetricStep, h_cubic = kDefaultCubicStep;
    bool richardson = true, veronese = false;
    std::uint64_t seed = 0, trials = 1000000, samples = 0, n = 0, table = 0;
    int copies = 1;
    unsigned threads = 0;

    auto add_family = [&](CLI::App *s, bool with_chart = true) {
        s->add_option("--family", family, "family spec, e.g. exponential, categorical:3, qre:bloch")->required();
        if (with_chart) s->add_option("--chart", chart, "default | natural (classical families)");
        s->add_option("--eps", eps, "smoothing for quantum divergences");
    };

    auto *gap = app.add_subcommand("gap", "collective vs sequential fidelity gap (exact rationals)");
    auto *gap_n = gap->add_option("--n", n, "number of copies N");
    auto *gap_t = gap->add_option("--table", table, "tabulate N = 1..table");
    gap_n->excludes(gap_t);

    auto *est = app.add_subcommand("estimate", "Monte-Carlo single-copy estimation fidelity");
    est->add_option("--copies", copies);
    est->add_option("--trials", trials);
    est->add_option("--seed", seed)->required();
    est->add_option("--strategy", strategy, "aligned | fixed");
    est->add_option("--threads", threads);

    auto *dv = app.add_subcommand("divergence", "evaluate D(p||q)");
    add_family(dv);
    dv->add_option("--p", p)->required();
    dv->add_option("--q", q)->required();

    auto *ts = app.add_subcommand("tensor", "extract metric and cubic tensors at a point");
    add_family(ts);
    ts->add_option("--at", at)->required();
    ts->add_option("--h-metric", h_metric);
    ts->add_option("--h-cubic", h_cubic);
    ts->add_flag("--richardson,!--no-richardson", richardson, "Richardson-extrapolate both tensors (default on)");

    auto *as = app.add_subcommand("asymmetry", "antisymmetric part D(P||P+hv) - D(P+hv||P)");
    add_family(as);
    as->add_option("--at", at)->required();
    as->add_option("--dir", dir)->required();
    as->add_option("--steps", steps);
    as->add_option("--h-cubic", h_cubic);

    auto *cv = app.add_subcommand("convergence", "extraction error across a ladder of steps");
    add_family(cv);
    cv->add_option("--at", at)->required();
    cv->add_option("--ladder", ladder);

    auto *tr = app.add_subcommand("triangle", "three-leg round-trip log-return simulation");
    tr->add_option("--legs", legs, "three leg distributions")->required()->expected(3);
    tr->add_option("--samples", samples)->default_val(1000000);
    tr->add_option("--seed", seed)->required();
    tr->add_option("--sweep-shapes", sweep, "comma list of skew-normal shapes to sweep");
    tr->add_option("--threads", threads);

    auto *dm = app.add_subcommand("demon", "cubic work along a path and its reverse");
    add_family(dm);
    dm->add_option("--path", path_file, "one waypoint per line")->required();
    dm->add_option("--convention", convention, "left | midpoint");
    dm->add_option("--tensor", tensor, "extract | oracle");
    dm->add_option("--h-cubic", h_cubic);

    auto *sp = app.add_subcommand("spread", "average cubic surcharge over sampled trades");
    add_family(sp);
    sp->add_option("--sampler", sampler)->required();
    sp->add_option("--samples", samples)->default_val(10000);
    sp->add_option("--seed", seed)->required();
    sp->add_option("--tensor", tensor, "extract | oracle");
    sp->add_option("--h-cubic", h_cubic);
    sp->add_option("--threads", threads);

    auto *ho = app.add_subcommand("holonomy", "geometric phase of a closed loop of states");
    ho->add_option("--loop", loop_file, "JSON array of amplitude arrays");
    ho->add_option("--state", states, "state amplitudes, repeat for each loop vertex");
    ho->add_flag("--veronese", veronese, "also report the loop embedded in the spin-1 symmetric subspace");

    auto *vr = app.add_subcommand("veronese", "embed a qubit state into the symmetric two-qubit subspace");
    vr->add_option("--state", state)->required();
    vr->add_option("--other", other, "second qubit state for overlap comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\nhint: run `geo --help` or `geo <subcommand> --help`\n";
        return 1;
    }

    try {
        json cfg;
        if (!replay.empty()) {
            if (!app.get_subcommands().empty()) throw UsageError("--replay takes no subcommand");
            json doc;
            try {
                doc = json::parse(detail::read_file(replay));
            } catch (const json::exception &e) {
                throw UsageError("'" + replay + "' is not a JSON report: " + e.what());
            }
            if (!doc.contains("config")) throw UsageError("'" + replay + "' has no embedded config");
            cfg = doc.at("config");
            if (!format.empty() && format != cfg.at("format").get<std::string>())
                throw UsageError("--format conflicts with the replayed config");
        } else {
            if (app.get_subcommands().empty()) throw UsageError("a subcommand is required (see geo --help)");
            const std::string sub = app.get_subcommands().front()->get_name();
            std::string fmt_source = "flag";
            if (format.empty()) {
                const char *env = std::getenv("GEO_DEFAULT_FORMAT");
                if (env && *env) {
                    format = env;
                    fmt_source = "env";
                    if (format != "json" && format != "csv" && format != "plot-csv")
                        throw UsageError("GEO_DEFAULT_FORMAT must be json, csv or plot-csv");
                } else {
                    format = "json";
                    fmt_source = "default";
                }
            }
            cfg = {{"subcommand", sub}, {"format", format}, {"format_source", fmt_source}};
            auto fam = [&] {
                cfg["family"] = family;
                cfg["chart"] = chart;
                cfg["eps"] = eps;
            };
            if (sub == "gap") {
                if (gap_n->count() == 0 && gap_t->count() == 0) throw UsageError("gap needs --n or --table");
                cfg["n"] = gap_n->count() ? json(n) : json(nullptr);
                cfg["table"] = gap_t->count() ? json(table) : json(nullptr);
            } else if (sub == "estimate") {
                cfg.update({{"copies", copies}, {"trials", trials}, {"seed", seed}, {"strategy", strategy}, {"threads", threads}});
            } else if (sub == "divergence") {
                fam();
                cfg["p"] = parse_list(p);
                cfg["q"] = parse_list(q);
            } else if (sub == "tensor") {
                fam();
                cfg.update({{"at", parse_list(at)}, {"h_metric", h_metric}, {"h_cubic", h_cubic}, {"richardson", richardson}});
            } else if (sub == "asymmetry") {
                fam();
                cfg.update({{"at", parse_list(at)}, {"dir", parse_list(dir)}, {"steps", parse_list(steps)}, {"h_cubic", h_cubic}});
            } else if (sub == "convergence") {
                fam();
                cfg.update({{"at", parse_list(at)}, {"ladder", parse_list(ladder)}});
            } else if (sub == "triangle") {
                cfg.update({{"legs", legs}, {"samples", samples}, {"seed", seed}, {"sweep_shapes", parse_list(sweep)}, {"threads", threads}});
            } else if (sub == "demon") {
                fam();
                const ResolvedFamily rf = resolve_family(family, chart, eps);
                cfg.update({{"path_file", path_file},
                            {"waypoints", parse_path(detail::read_file(path_file), rf.divergence.id()).waypoints},
                            {"convention", convention},
                            {"tensor", tensor},
                            {"h_cubic", h_cubic}});
            } else if (sub == "spread") {
                fam();
                cfg.update({{"sampler", sampler}, {"samples", samples}, {"seed", seed}, {"tensor", tensor}, {"h_cubic", h_cubic}, {"threads", threads}});
            } else if (sub == "holonomy") {
                json list = json::array();
                if (!loop_file.empty()) {
                    json doc;
                    try {
                        doc = json::parse(detail::read_file(loop_file));
                    } catch (const json::exception &e) {
                        throw UsageError("'" + loop_file + "' is not valid JSON: " + e.what());
                    }
                    if (!doc.is_array()) throw UsageError("loop file must hold an array of states");
                    for (const json &s : doc) list.push_back(detail::amplitudes_from_json(s));
                }
                for (const std::string &s : states) list.push_back(detail::complex_list(s));
                if (list.empty()) throw UsageError("holonomy needs --loop or --state");
                cfg.update({{"loop_file", loop_file}, {"states", list}, {"veronese", veronese}});
            } else if (sub == "veronese") {
                cfg["state"] = detail::complex_list(state);
                cfg["other"] = other.empty() ? json(nullptr) : detail::complex_list(other);
            }
        }

        const json doc = execute(cfg);
        const std::string text = render(doc, cfg.at("format").get<std::string>(), detail::utc_now());
        if (out_path.empty())
            out << text;
        else
            write_atomically(out_path, text);
        return 0;
    } catch (const GeoError &e) {
        err << e.kind() << ": " << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const json::exception &e) {
        err << "UsageError: malformed config: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace geo::cli
