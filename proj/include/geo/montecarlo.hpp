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
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace geo {

using Engine = std::mt19937_64;

/// Engine for one Monte-Carlo chunk, seeded from (seed, chunk index) only, so a
/// chunk draws the same numbers whatever thread or order runs it.
inline Engine chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32), 0x9e3779b9u};
    return Engine(seq);
}

/// Streaming count / mean / second and third central moments, mergeable.
class RunningStats {
   public:
    void add(double x) {
        const double n1 = static_cast<double>(n_);
        ++n_;
        const double n = static_cast<double>(n_);
        const double delta = x - mean_;
        const double delta_n = delta / n;
        const double term1 = delta * delta_n * n1;
        mean_ += delta_n;
        m3_ += term1 * delta_n * (n - 2) - 3 * delta_n * m2_;
        m2_ += term1;
    }

    void merge(const RunningStats &o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double delta = o.mean_ - mean_;
        const double m2 = m2_ + o.m2_ + delta * delta * na * nb / n;
        const double m3 = m3_ + o.m3_ + delta * delta * delta * na * nb * (na - nb) / (n * n) +
                          3 * delta * (na * o.m2_ - nb * m2_) / n;
        mean_ += delta * nb / n;
        m2_ = m2;
        m3_ = m3;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept {
        return n_;
    }
    double mean() const noexcept {
        return mean_;
    }
    double variance() const noexcept {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double standard_error() const noexcept {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    /// Population third central moment.
    double third_central_moment() const noexcept {
        return n_ > 0 ? m3_ / static_cast<double>(n_) : 0.0;
    }
    double skewness() const noexcept {
        const double m2 = n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0;
        return m2 > 0 ? third_central_moment() / std::pow(m2, 1.5) : 0.0;
    }

   private:
    std::uint64_t n_ = 0;
    double mean_ = 0, m2_ = 0, m3_ = 0;
};

inline constexpr std::uint64_t kChunkSize = 1u << 16;

/// Splits `total` draws into fixed-size chunks, runs `body(engine, chunk, count)`
/// for each (possibly on several threads) and merges results in chunk order.
/// The result depends only on (total, seed), never on `threads`.
template <class Result>
Result run_chunked(std::uint64_t total, std::uint64_t seed, unsigned threads,
                   const std::function<Result(Engine &, std::uint64_t, std::uint64_t)> &body,
                   const std::function<void(Result &, const Result &)> &merge) {
    const std::uint64_t chunks = (total + kChunkSize - 1) / kChunkSize;
    std::vector<Result> parts(chunks);
    std::vector<std::exception_ptr> errors(chunks);
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        for (std::uint64_t c = first; c < chunks; c += stride) {
            try {
                Engine eng = chunk_engine(seed, c);
                const std::uint64_t count = std::min(kChunkSize, total - c * kChunkSize);
                parts[c] = body(eng, c, count);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(chunks, 1)));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto &th : pool) th.join();
    }
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
    Result out{};
    for (const Result &r : parts) merge(out, r);
    return out;
}

}  // namespace geo
