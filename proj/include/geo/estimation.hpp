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

/// Collective vs sequential single-parameter estimation fidelities for N
/// copies of a qubit, in exact rational arithmetic, and a Monte-Carlo check
/// of the N = 1 value.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geo/error.hpp"
#include "geo/montecarlo.hpp"

namespace geo {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Always "p/q", including integers ("0/1").
inline std::string to_fraction_string(const Rational &r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational &r) {
    return static_cast<double>(r);
}

struct GapReport {
    std::uint64_t n_copies = 0;
    Rational spin;
    Rational f_col;
    Rational f_seq;
    Rational gap;
    /// N = 1: the tabulated gap is 0 (both protocols coincide) although
    /// 1/(N(N+1)) would give 1/2.
    bool special_cased = false;
};

inline GapReport gap_report(std::uint64_t n) {
    if (n < 1) throw UsageError("number of copies must be at least 1");
    const BigInt bn(n);
    GapReport r;
    r.n_copies = n;
    r.spin = Rational(bn, 2);
    r.f_col = Rational(bn + 1, bn + 2);
    if (n == 1) {
        r.gap = 0;
        r.special_cased = true;
    } else {
        r.gap = Rational(BigInt(1), bn * (bn + 1));
    }
    r.f_seq = r.f_col - r.gap;
    return r;
}

inline std::vector<GapReport> gap_table(std::uint64_t n_max) {
    if (n_max < 1) throw UsageError("table size must be at least 1");
    std::vector<GapReport> out;
    out.reserve(n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n) out.push_back(gap_report(n));
    return out;
}

enum class GuessStrategy {
    outcome_aligned,  ///< guess the basis state the measurement reported
    fixed,            ///< always guess |0>, ignoring the outcome
};

struct FidelityEstimate {
    double mean = 0;
    double standard_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    GuessStrategy strategy = GuessStrategy::outcome_aligned;
};

/// Haar-random qubit (two complex Gaussian amplitudes, normalized), one
/// z-measurement, guess scored by |<guess|true>|^2. Tends to 2/3 for the
/// outcome-aligned guess and 1/2 for the fixed one.
inline FidelityEstimate mc_single_copy_fidelity(std::uint64_t trials, std::uint64_t seed,
                                                GuessStrategy strategy = GuessStrategy::outcome_aligned,
                                                unsigned threads = 0) {
    if (trials < 10000) throw UsageError("at least 10^4 trials are required");
    const RunningStats stats = run_chunked<RunningStats>(
        trials, seed, threads,
        [strategy](Engine &eng, std::uint64_t, std::uint64_t count) {
            std::normal_distribution<double> normal;
            std::uniform_real_distribution<double> uniform;
            RunningStats s;
            for (std::uint64_t t = 0; t < count; ++t) {
                const std::complex<double> a(normal(eng), normal(eng)), b(normal(eng), normal(eng));
                const double pa = std::norm(a), pb = std::norm(b);
                const double p0 = pa / (pa + pb);
                const bool outcome0 = uniform(eng) < p0;
                double fidelity;
                if (strategy == GuessStrategy::fixed)
                    fidelity = p0;
                else
                    fidelity = outcome0 ? p0 : 1 - p0;
                s.add(fidelity);
            }
            return s;
        },
        [](RunningStats &acc, const RunningStats &part) { acc.merge(part); });
    return {stats.mean(), stats.standard_error(), trials, seed, strategy};
}

}  // namespace geo
