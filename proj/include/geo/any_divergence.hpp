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

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "geo/divergence.hpp"
#include "geo/parse.hpp"
#include "geo/quantum.hpp"

namespace geo {

/// Type-erased divergence for callers that pick the family at run time.
class AnyDivergence {
   public:
    template <Divergence D>
    explicit AnyDivergence(D div, std::string chart_name)
        : self_(std::make_shared<Model<D>>(std::move(div))), chart_name_(std::move(chart_name)) {
    }

    std::string id() const {
        return self_->id();
    }
    const std::string &chart_name() const noexcept {
        return chart_name_;
    }
    std::size_t dimension() const {
        return self_->dimension();
    }
    bool contains(std::span<const double> x) const {
        return self_->contains(x);
    }
    double operator()(std::span<const double> p, std::span<const double> q) const {
        if (p.size() != dimension() || q.size() != dimension())
            throw DimensionMismatch(id() + ": expected " + std::to_string(dimension()) + " coordinates");
        return (*self_)(p, q);
    }

   private:
    struct Concept {
        virtual ~Concept() = default;
        virtual std::string id() const = 0;
        virtual std::size_t dimension() const = 0;
        virtual bool contains(std::span<const double>) const = 0;
        virtual double operator()(std::span<const double>, std::span<const double>) const = 0;
    };
    template <class D>
    struct Model final : Concept {
        explicit Model(D d) : d(std::move(d)) {
        }
        std::string id() const override {
            return d.id();
        }
        std::size_t dimension() const override {
            return d.dimension();
        }
        bool contains(std::span<const double> x) const override {
            return d.contains(x);
        }
        double operator()(std::span<const double> p, std::span<const double> q) const override {
            return d(p, q);
        }
        D d;
    };

    std::shared_ptr<const Concept> self_;
    std::string chart_name_;
};

static_assert(Divergence<AnyDivergence>);

/// Parses "gaussian[:sigma]", "exponential", "bernoulli", "categorical:k",
/// "gaussian-full".
inline ClassicalFamily parse_classical_family(const std::string &spec) {
    const auto parts = split(spec, ':');
    const std::string &name = parts[0];
    if (name == "gaussian") {
        if (parts.size() > 2) throw UsageError("gaussian takes at most one parameter (sigma)");
        return ClassicalFamily::gaussian_fixed_sigma(parts.size() == 2 ? parse_double(parts[1]) : 1.0);
    }
    if (parts.size() > 1 && name != "categorical") throw UsageError("family '" + name + "' takes no parameters");
    if (name == "exponential") return ClassicalFamily::exponential_scale();
    if (name == "bernoulli") return ClassicalFamily::bernoulli();
    if (name == "gaussian-full") return ClassicalFamily::gaussian_full();
    if (name == "categorical") {
        if (parts.size() != 2) throw UsageError("categorical needs a size, e.g. categorical:3");
        const double k = parse_double(parts[1]);
        if (k != std::floor(k) || k < 2 || k > 1000) throw UsageError("categorical size must be an integer >= 2");
        return ClassicalFamily::categorical(static_cast<int>(k));
    }
    throw UsageError("unknown family '" + spec + "'");
}

inline bool is_quantum_family(const std::string &spec) {
    return spec.rfind("qre:", 0) == 0 || spec.rfind("qjsd:", 0) == 0;
}

struct ResolvedFamily {
    AnyDivergence divergence;
    std::optional<ClassicalFamily> classical;  ///< set for classical families
    bool natural = false;                      ///< coordinates are natural parameters
};

/// Family spec plus chart selection: classical families take "default" or
/// "natural"; quantum specs ("qre:bloch", "qjsd:qutrit-diagonal", ...) name their
/// own chart and use `eps` for smoothing.
inline ResolvedFamily resolve_family(const std::string &spec, const std::string &chart = "default",
                                     double eps = 1e-3) {
    if (is_quantum_family(spec)) {
        const auto colon = spec.find(':');
        const auto kind = spec.substr(0, colon) == "qre" ? QuantumDivergenceKind::relative_entropy
                                                          : QuantumDivergenceKind::jensen_shannon;
        const QuantumChart qc = QuantumChart::parse(spec.substr(colon + 1), eps);
        if (chart != "default" && chart != qc.name())
            throw UsageError("quantum families carry their chart in the family spec");
        return {AnyDivergence(QuantumDivergence(qc, kind), qc.name()), std::nullopt, false};
    }
    ClassicalFamily fam = parse_classical_family(spec);
    if (chart == "default") return {AnyDivergence(fam, fam.chart_name()), fam, false};
    if (chart == "natural") return {AnyDivergence(NaturalChartDivergence(fam), "natural"), fam, true};
    throw UsageError("unknown chart '" + chart + "' (expected default or natural)");
}

}  // namespace geo
