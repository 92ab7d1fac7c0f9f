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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "geo/cli.hpp"

using namespace geo;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool ok = true;
    std::string detail;
};

struct Check {
    Verdict &v;
    void operator()(bool cond, const std::string &what) const {
        if (!cond && v.ok) v.detail = what;
        v.ok = v.ok && cond;
    }
};

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel_max(std::span<const double> got, std::span<const double> want) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        num = std::max(num, std::abs(got[i] - want[i]));
        den = std::max(den, std::abs(want[i]));
    }
    return num / den;
}

PureState haar_qubit(std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    CVec v(2);
    v << Complex(n(rng), n(rng)), Complex(n(rng), n(rng));
    return PureState::normalized(std::move(v));
}

struct CliOutcome {
    int code;
    std::string out, err;
};

CliOutcome cli_run(std::vector<std::string> args) {
    args.insert(args.begin(), "geo");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string strip_timestamp(const std::string &text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.find("generated_at") == std::string::npos) kept += line + "\n";
    return kept;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

Verdict ac1() {
    Verdict v;
    Check check{v};
    const CliOutcome r = cli_run({"gap", "--table", "100"});
    check(r.code == 0, "gap --table exited " + std::to_string(r.code));
    if (r.code != 0) return v;
    const json rows = json::parse(r.out).at("result").at("rows");
    check(rows.size() == 100, "expected 100 rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto n = rows[i].at("N").get<std::uint64_t>();
        // (N+1)/(N+2) is already in lowest terms since consecutive integers are coprime
        const Rational want(BigInt(n + 1), BigInt(n + 2));
        check(rows[i].at("f_col") == to_fraction_string(want), "f_col wrong at N=" + std::to_string(n));
        if (i >= 2) {
            const Rational a = gap_report(n).gap, b = gap_report(n - 1).gap;
            check(a < b, "gap not strictly decreasing at N=" + std::to_string(n));
        }
    }
    check(rows[1].at("gap") == "1/6", "gap(2) != 1/6");
    check(rows[2].at("gap") == "1/12", "gap(3) != 1/12");
    check(rows[0].at("gap") == "0/1" && rows[0].at("special_cased").get<bool>(), "gap(1) not 0 with special-case flag");
    v.detail = v.ok ? "f_col=(N+1)/(N+2) for N=1..100; gap(1)=0 special-cased, gap(2)=1/6, gap(3)=1/12" : v.detail;
    return v;
}

Verdict ac2() {
    Verdict v;
    Check check{v};
    std::string d;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const FidelityEstimate f = mc_single_copy_fidelity(1000000, seed);
        const double z = (f.mean - 2.0 / 3.0) / f.standard_error;
        check(std::abs(z) < 4, fmt("seed %.0f: z=%.2f", static_cast<double>(seed), z));
        d += fmt("%.6f(z=%+.2f) ", f.mean, z);
    }
    if (v.ok) v.detail = "means " + d;
    return v;
}

Verdict ac3() {
    Verdict v;
    Check check{v};
    double worst = 0;
    struct Case {
        ClassicalFamily fam;
        std::vector<double> points;
        std::function<double(double)> fisher;
    };
    const double sigma = 1.7;
    const std::vector<Case> cases{
        {ClassicalFamily::gaussian_fixed_sigma(sigma), {-3, -0.5, 0, 1.2, 40}, [=](double) { return 1 / (sigma * sigma); }},
        {ClassicalFamily::exponential_scale(), {0.2, 0.5, 1, 2.5, 8}, [](double t) { return 1 / (t * t); }},
        {ClassicalFamily::bernoulli(), {0.1, 0.3, 0.5, 0.7, 0.9}, [](double p) { return 1 / (p * (1 - p)); }},
    };
    for (const auto &c : cases)
        for (double x : c.points) {
            const double g = extract_metric(c.fam, Vec{x}).components(0, 0);
            const double err = std::abs(g - c.fisher(x)) / c.fisher(x);
            worst = std::max(worst, err);
            check(err < 1e-6, c.fam.id() + fmt(" at %g: rel error %.3g", x, err));
        }
    if (v.ok) v.detail = fmt("worst relative error %.3g over 15 points", worst);
    return v;
}

Verdict ac4() {
    Verdict v;
    Check check{v};
    double worst = 0;
    const std::vector<std::pair<ClassicalFamily, std::vector<Vec>>> cases{
        {ClassicalFamily::exponential_scale(), {{0.5}, {0.8}, {1.0}, {1.7}, {3.0}}},
        {ClassicalFamily::bernoulli(), {{0.15}, {0.3}, {0.45}, {0.65}, {0.8}}},
        {ClassicalFamily::categorical(3), {{0.2, 0.3}, {1.0 / 3, 1.0 / 3}, {0.5, 0.25}, {0.1, 0.6}, {0.25, 0.15}}},
    };
    for (const auto &[fam, points] : cases) {
        const NaturalChart chart(fam);
        const NaturalChartDivergence nat(fam);
        for (const Vec &x : points) {
            // score-moment tensor in the default chart, transported to natural coordinates
            const Vec eta = chart.to_natural(x);
            const Tensor3 oracle = transport_tensor(score_moment_tensor(fam, x), chart.jacobian_from_natural(eta));
            const CubicTensor t = extract_cubic(nat, eta);
            double err = rel_max(t.components.data(), oracle.data());
            if (oracle.max_abs() == 0) err = t.components.max_abs();
            worst = std::max(worst, err);
            check(err < 1e-3, fam.id() + " at " + fmt("(%g, %g)", x[0], x.size() > 1 ? x[1] : 0) + fmt(": %.3g", err));
        }
    }
    if (v.ok) v.detail = fmt("natural chart, worst relative error %.3g over 15 points", worst);
    return v;
}

Verdict ac5() {
    Verdict v;
    Check check{v};
    const Vec steps{0.1, 0.05, 0.025, 0.0125};
    struct Case {
        ClassicalFamily fam;
        std::vector<Vec> points;  // default-chart coordinates
        std::vector<Vec> dirs;    // natural-chart directions, rescaled to unit Fisher length
    };
    const std::vector<Case> cases{
        {ClassicalFamily::exponential_scale(), {{0.7}, {1.0}, {2.0}}, {{1}, {-0.5}}},
        {ClassicalFamily::bernoulli(), {{0.2}, {0.35}, {0.7}}, {{1}, {-1}}},
        {ClassicalFamily::categorical(3), {{0.2, 0.3}, {0.5, 0.2}}, {{1, 0}, {0.6, -0.8}, {0.3, 0.9}}},
        {ClassicalFamily::gaussian_full(), {{0, 1}, {0.5, 1.4}}, {{0, 1}, {0.6, 0.4}, {1, 0}}},
    };
    double lo = 1e9, hi = -1e9, slope_lo = 1e9, slope_hi = -1e9, sum = 0;
    int count = 0;
    for (const auto &c : cases) {
        const NaturalChart chart(c.fam);
        const NaturalChartDivergence nat(c.fam);
        for (const Vec &x : c.points)
            for (const Vec &raw_dir : c.dirs) {
                const Vec eta = chart.to_natural(x);
                const Tensor2 g = transport_metric(fisher_metric(c.fam, x), chart.jacobian_from_natural(eta));
                Vec dir = raw_dir;
                const double len = std::sqrt(contract(g, dir, dir));
                for (double &d : dir) d /= len;
                // directions along which the cubic oracle vanishes carry no ratio
                if (std::abs(score_moment_tensor_natural(c.fam, x).contract(dir)) < 1e-8) continue;
                const AsymmetryProbe p = asymmetry_probe(nat, eta, dir, steps);
                check(p.slope >= 2.8 && p.slope <= 3.2, c.fam.id() + fmt(": slope %.3f", p.slope));
                slope_lo = std::min(slope_lo, p.slope), slope_hi = std::max(slope_hi, p.slope);
                lo = std::min(lo, p.ratio), hi = std::max(hi, p.ratio);
                sum += p.ratio, ++count;
            }
    }
    const double mean = sum / count;
    check((hi - lo) / std::abs(mean) < 0.05, fmt("ratio spread [%.4f, %.4f]", lo, hi));
    check(std::abs(mean - kBregmanAsymmetryRatio) < 0.05 * std::abs(kBregmanAsymmetryRatio),
          fmt("mean ratio %.4f vs oracle %.4f", mean, kBregmanAsymmetryRatio));
    // the report itself must flag the printed 1/3
    const CliOutcome r = cli_run({"asymmetry", "--family", "exponential", "--chart", "natural", "--at", "-1", "--dir", "1"});
    check(r.code == 0 && !json::parse(r.out).at("result").at("matches_one_third").get<bool>(),
          "asymmetry report does not flag the 1/3 discrepancy");
    if (v.ok)
        v.detail = fmt("%.0f probes, slopes in [%.3f, %.3f], ", count, slope_lo, slope_hi) +
                   fmt("ratio in [%.4f, %.4f] vs -1/6 (printed 1/3 does not match)", lo, hi);
    return v;
}

Verdict ac6() {
    Verdict v;
    Check check{v};
    std::mt19937_64 rng(2026);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const PureState p = haar_qubit(rng), q = haar_qubit(rng);
        const double o = std::abs(inner(p, q));
        worst = std::max(worst, std::abs(std::abs(inner(veronese_embed(p), veronese_embed(q))) - o * o));
    }
    check(worst < 1e-12, fmt("max deviation %.3g", worst));
    if (v.ok) v.detail = fmt("10^4 pairs, max deviation %.3g", worst);
    return v;
}

Verdict ac7() {
    Verdict v;
    Check check{v};
    const double s = 1 / std::numbers::sqrt2;
    std::vector<PureState> loop{PureState::basis(2, 0), PureState::normalized({s, s}),
                                PureState::normalized({Complex(s), Complex(0, s)})};
    const double phase = bargmann_phase(loop);
    check(std::abs(phase + kPi / 4) < 1e-9, fmt("octant phase %.12f", phase));
    std::vector<PureState> rev(loop.rbegin(), loop.rend());
    const double back = bargmann_phase(rev);
    check(std::abs(back + phase) < 1e-9, fmt("reversed phase %.12f", back));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<PureState> r;
        for (const auto &st : loop) r.push_back(st.rephased(ang(rng)));
        worst = std::max(worst, std::abs(bargmann_phase(r) - phase));
    }
    check(worst < 1e-12, fmt("rephasing changed the phase by %.3g", worst));
    if (v.ok) v.detail = fmt("phase %.12f, reversed %.12f, rephasing drift %.2g", phase, back, worst);
    return v;
}

Verdict ac8() {
    Verdict v;
    Check check{v};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    const double eps = 1e-14;
    double worst = 0;
    for (int k : {2, 3}) {
        const auto cat = ClassicalFamily::categorical(k);
        for (int i = 0; i < 1000; ++i) {
            Vec p(k), q(k);
            double sp = 0, sq = 0;
            for (int j = 0; j < k; ++j) p[j] = u(rng), q[j] = u(rng), sp += p[j], sq += q[j];
            for (int j = 0; j < k; ++j) p[j] /= sp, q[j] /= sq;
            const double qre = quantum_relative_entropy(DensityMatrix::diagonal(p), DensityMatrix::diagonal(q), eps);
            const double kl = cat(Vec(p.begin(), p.end() - 1), Vec(q.begin(), q.end() - 1));
            worst = std::max(worst, std::abs(qre - kl));
        }
    }
    check(worst < 1e-10, fmt("max |QRE - KL| = %.3g", worst));
    if (v.ok) v.detail = fmt("10^3 qubit + 10^3 qutrit pairs, max |QRE - KL| = %.3g", worst);
    return v;
}

Verdict ac9() {
    Verdict v;
    Check check{v};
    const auto g = LegDistribution::parse("gaussian:0,0.01");
    const TriangleReport sym = triangle_simulate({g, g, g}, 1000000, 11);
    const double zs = sym.cubic_term.mean() / sym.cubic_term.standard_error();
    check(std::abs(zs) < 3, fmt("symmetric legs: z=%.2f", zs));
    const auto s = LegDistribution::parse("skewnormal:0,0.02,-4");
    const TriangleReport skew = triangle_simulate({s, s, s}, 1000000, 11);
    const double zk = skew.cubic_term.mean() / skew.cubic_term.standard_error();
    check(zk < -3, fmt("negatively skewed legs: z=%.2f", zk));
    if (v.ok) v.detail = fmt("symmetric z=%+.2f, skewed mean %.3g (z=%.1f)", zs, skew.cubic_term.mean(), zk);
    return v;
}

Verdict ac10() {
    Verdict v;
    Check check{v};
    const SurchargeModel model = SurchargeModel::extracted(ClassicalFamily::exponential_scale());
    std::vector<Vec> ramp;
    for (int i = 0; i <= 10; ++i) ramp.push_back({0.5 + 0.1 * i});
    const std::vector<std::vector<Vec>> paths{
        {{1.0}, {1.1}, {1.2}},
        {{1.0}, {1.3}, {0.8}, {1.0}},
        ramp,
    };
    std::string d;
    for (const auto &pts : paths) {
        const DemonReport r = demon_work(model, {"exponential", pts});
        const double residual = std::abs(r.total + r.reversed_total);
        check(r.within_bound, fmt("|W + W_rev| = %.3g exceeds bound %.3g", residual, r.cancellation_bound));
        d += fmt("%.2g<=%.2g ", residual, r.cancellation_bound);
    }
    if (v.ok) v.detail = "|W + W_rev| vs bound: " + d;
    return v;
}

Verdict ac11() {
    Verdict v;
    Check check{v};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("geo_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"estimate", {"estimate", "--seed", "5", "--trials", "200000"}},
        {"estimate-fixed", {"estimate", "--seed", "5", "--trials", "50000", "--strategy", "fixed", "--threads", "3"}},
        {"triangle", {"triangle", "--legs", "skewnormal:0,0.02,-3", "gaussian:0,0.01", "lognormal:0,0.01,-1",
                      "--samples", "200000", "--seed", "8"}},
        {"triangle-sweep", {"triangle", "--legs", "skewnormal:0,0.02,0", "skewnormal:0,0.02,0", "skewnormal:0,0.02,0",
                            "--samples", "50000", "--seed", "8", "--sweep-shapes", "-4,0,4", "--format", "plot-csv"}},
        {"triangle-csv", {"triangle", "--legs", "gaussian:0,0.01", "gaussian:0,0.01", "gaussian:0,0.01", "--samples",
                          "50000", "--seed", "2", "--format", "csv"}},
        {"spread", {"spread", "--family", "exponential", "--sampler", "uniform:0.5,2,0.1", "--seed", "3"}},
        {"spread-gaussian", {"spread", "--family", "bernoulli", "--sampler", "gaussian:0.4,0.02", "--seed", "3",
                             "--samples", "2000", "--tensor", "oracle"}},
    };
    int compared = 0;
    for (const auto &[name, args] : runs) {
        const fs::path first = dir / (name + ".1"), replayed = dir / (name + ".2"), source = dir / (name + ".json");
        // the JSON copy carries the config; the replay re-renders in the recorded format
        std::vector<std::string> a = args;
        a.insert(a.end(), {"--out", first.string()});
        const CliOutcome r1 = cli_run(a);
        check(r1.code == 0, name + ": exit " + std::to_string(r1.code) + " " + r1.err);
        if (r1.code != 0) continue;
        std::vector<std::string> aj = args;
        aj.erase(std::remove(aj.begin(), aj.end(), "plot-csv"), aj.end());
        aj.erase(std::remove(aj.begin(), aj.end(), "csv"), aj.end());
        aj.erase(std::remove(aj.begin(), aj.end(), "--format"), aj.end());
        aj.insert(aj.end(), {"--format", "json", "--out", source.string()});
        check(cli_run(aj).code == 0, name + ": json run failed");
        json doc = json::parse(slurp(source));
        const std::string fmt_name = a.end() != std::find(a.begin(), a.end(), "--format")
                                         ? *(std::find(a.begin(), a.end(), "--format") + 1)
                                         : std::string("json");
        doc["config"]["format"] = fmt_name;
        doc["config"]["format_source"] = "flag";
        if (fmt_name == "json") doc["config"]["format_source"] = "default";
        std::ofstream(source) << doc.dump(2);
        const CliOutcome r2 = cli_run({"--replay", source.string(), "--out", replayed.string()});
        check(r2.code == 0, name + ": replay exit " + std::to_string(r2.code) + " " + r2.err);
        check(strip_timestamp(slurp(first)) == strip_timestamp(slurp(replayed)), name + ": replay differs");
        ++compared;
    }
    fs::remove_all(dir);
    if (v.ok) v.detail = std::to_string(compared) + " stochastic reports replayed byte-identically (timestamp line excluded)";
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        const char *id;
        const char *title;
        double budget_s;
        Verdict (*fn)();
    };
    const Criterion criteria[] = {
        {"AC1", "gap table exactness", 1, ac1},
        {"AC2", "single-copy fidelity", 10, ac2},
        {"AC3", "metric oracle equivalence", 5, ac3},
        {"AC4", "cubic oracle equivalence", 30, ac4},
        {"AC5", "asymmetry scaling and ratio", 30, ac5},
        {"AC6", "Veronese identity", 5, ac6},
        {"AC7", "holonomy", 1, ac7},
        {"AC8", "commuting reduction", 10, ac8},
        {"AC9", "triangle nullity and sign", 60, ac9},
        {"AC10", "demon antisymmetry", 10, ac10},
        {"AC11", "reproducibility", 60, ac11},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            v.ok = false;
            v.detail += fmt(" [runtime %.2fs over budget %.0fs]", secs, c.budget_s);
        }
        if (!v.ok) ++failures;
        std::printf("%-4s %s  %s (%.2fs/%.0fs): %s\n", c.id, v.ok ? "PASS" : "FAIL", c.title, secs, c.budget_s,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
