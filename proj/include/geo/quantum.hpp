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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "geo/error.hpp"
#include "geo/tensor.hpp"

namespace geo {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Unit vector in C^d; two states are equal iff they span the same ray.
class PureState {
   public:
    static constexpr double kNormTolerance = 1e-12;

    /// Takes amplitudes that already have unit norm.
    explicit PureState(CVec amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.size() < 2) throw DimensionMismatch("pure state needs dimension >= 2");
        if (std::abs(amp_.norm() - 1.0) > kNormTolerance) throw DomainError("pure state amplitudes are not unit norm");
    }

    static PureState normalized(CVec amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
        return PureState(amplitudes / n);
    }
    static PureState normalized(std::initializer_list<Complex> amplitudes) {
        CVec v(static_cast<Eigen::Index>(amplitudes.size()));
        Eigen::Index i = 0;
        for (const Complex &a : amplitudes) v(i++) = a;
        return normalized(std::move(v));
    }
    static PureState basis(int dim, int index) {
        CVec v = CVec::Zero(dim);
        v(index) = 1;
        return PureState(std::move(v));
    }

    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amp_.size());
    }
    const CVec &amplitudes() const noexcept {
        return amp_;
    }
    Complex operator[](std::size_t i) const {
        return amp_(static_cast<Eigen::Index>(i));
    }

    /// e^{i lambda} |psi>
    PureState rephased(double lambda) const {
        return PureState(CVec(amp_ * std::polar(1.0, lambda)));
    }

    friend bool operator==(const PureState &a, const PureState &b);

   private:
    CVec amp_;
};

/// <a|b>
inline Complex inner(const PureState &a, const PureState &b) {
    if (a.dimension() != b.dimension()) throw DimensionMismatch("states of different dimension");
    return a.amplitudes().dot(b.amplitudes());
}

inline bool operator==(const PureState &a, const PureState &b) {
    return a.dimension() == b.dimension() && std::abs(inner(a, b)) >= 1 - PureState::kNormTolerance;
}

/// Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
   public:
    static constexpr double kTolerance = 1e-12;

    explicit DensityMatrix(CMat entries) : m_(std::move(entries)) {
        if (m_.rows() != m_.cols() || m_.rows() < 2) throw DimensionMismatch("density matrix must be square, d >= 2");
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw DomainError("density matrix not Hermitian");
        if (std::abs(m_.trace() - Complex(1.0)) > kTolerance) throw DomainError("density matrix trace is not 1");
        Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
        if (es.eigenvalues().minCoeff() < -kTolerance) throw DomainError("density matrix has a negative eigenvalue");
    }

    static DensityMatrix from_pure(const PureState &psi) {
        return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
    }
    static DensityMatrix diagonal(std::span<const double> probs) {
        CMat m = CMat::Zero(static_cast<Eigen::Index>(probs.size()), static_cast<Eigen::Index>(probs.size()));
        for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
        return DensityMatrix(std::move(m));
    }
    static DensityMatrix maximally_mixed(int dim) {
        return DensityMatrix(CMat(CMat::Identity(dim, dim) / static_cast<double>(dim)));
    }

    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(m_.rows());
    }
    const CMat &matrix() const noexcept {
        return m_;
    }

    /// (1-eps) rho + eps I/d
    DensityMatrix smoothed(double eps) const {
        const auto d = static_cast<double>(dimension());
        return DensityMatrix(CMat((1 - eps) * m_ + eps * CMat::Identity(m_.rows(), m_.cols()) / d));
    }

   private:
    CMat m_;
};

struct HermitianEigen {
    Eigen::VectorXd values;
    CMat vectors;
};

/// Eigendecomposition with a reconstruction check: ||A - V diag(w) V^+|| <= 1e-10.
inline HermitianEigen hermitian_eigen(const CMat &a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    const CMat rebuilt = es.eigenvectors() * es.eigenvalues().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    if ((a - rebuilt).cwiseAbs().maxCoeff() > 1e-10) throw NumericalError("eigendecomposition residual above 1e-10");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline double von_neumann_entropy(const DensityMatrix &rho) {
    const HermitianEigen e = hermitian_eigen(rho.matrix());
    double s = 0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        const double l = e.values(i);
        if (l > 0) s -= l * std::log(l);
    }
    return s;
}

/// Tr[rho_e (log rho_e - log sigma_e)] on states smoothed towards I/d by eps.
inline double quantum_relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma, double eps) {
    if (rho.dimension() != sigma.dimension()) throw DimensionMismatch("density matrices of different dimension");
    if (!(eps > 0 && eps < 1)) throw DomainError("smoothing eps must lie in (0, 1)");
    const DensityMatrix r = rho.smoothed(eps), s = sigma.smoothed(eps);
    const HermitianEigen er = hermitian_eigen(r.matrix());
    const HermitianEigen es = hermitian_eigen(s.matrix());
    double value = 0;
    for (Eigen::Index i = 0; i < er.values.size(); ++i) {
        const double l = er.values(i);
        if (l > 0) value += l * std::log(l);
    }
    // Tr[rho log sigma] = sum_j log(mu_j) <v_j| rho |v_j>
    const CMat rotated = es.vectors.adjoint() * r.matrix() * es.vectors;
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
        if (!(es.values(j) > 0)) throw NumericalError("smoothed state has a non-positive eigenvalue");
        value -= std::log(es.values(j)) * rotated(j, j).real();
    }
    return value > 0 ? value : 0.0;
}

/// S((rho+sigma)/2) - (S(rho) + S(sigma))/2, in [0, log 2].
inline double quantum_jsd(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dimension() != sigma.dimension()) throw DimensionMismatch("density matrices of different dimension");
    const DensityMatrix mid(CMat(0.5 * (rho.matrix() + sigma.matrix())));
    const double v = von_neumann_entropy(mid) - 0.5 * (von_neumann_entropy(rho) + von_neumann_entropy(sigma));
    return v > 0 ? v : 0.0;
}

/// arccos |<a|b>|, in [0, pi/2].
inline double fubini_study_distance(const PureState &a, const PureState &b) {
    const double overlap = std::abs(inner(a, b));
    return std::acos(overlap > 1 ? 1.0 : overlap);
}

/// |q> (x) |q> in the symmetric basis {|00>, (|01>+|10>)/sqrt2, |11>}.
inline PureState veronese_embed(const PureState &q) {
    if (q.dimension() != 2) throw DimensionMismatch("veronese embedding takes a qubit state");
    const Complex a = q[0], b = q[1];
    CVec v(3);
    v << a * a, std::numbers::sqrt2 * a * b, b * b;
    return PureState::normalized(std::move(v));
}

/// Geometric phase of a closed loop of rays: arg of prod_k <psi_{k+1}|psi_k>,
/// i.e. minus the phase of the Bargmann invariant <psi_1|psi_2>...<psi_n|psi_1>.
/// For a qubit loop enclosing solid angle Omega (counter-clockwise seen from
/// outside) this is -Omega/2. Principal branch (-pi, pi].
inline double bargmann_phase(std::span<const PureState> loop) {
    if (loop.size() < 3) throw UsageError("a loop needs at least 3 states");
    Complex product = 1;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const PureState &cur = loop[k];
        const PureState &next = loop[(k + 1) % loop.size()];
        const Complex link = inner(next, cur);
        if (std::abs(link) <= 1e-9)
            throw OrthogonalLink("states " + std::to_string(k) + " and " + std::to_string((k + 1) % loop.size()) +
                                 " are orthogonal");
        product *= link / std::abs(link);
    }
    const double phase = std::arg(product);
    return phase <= -std::numbers::pi ? std::numbers::pi : phase;
}

enum class QuantumChartKind { bloch, qutrit_diagonal, qutrit_gellmann, veronese };

/// Real coordinates on a family of density matrices.
///   bloch:           r in the open unit ball, rho = (I + r.sigma)/2
///   qutrit-diagonal: (p1, p2), rho = diag(p1, p2, 1-p1-p2)
///   qutrit-gellmann: x in R^8, rho = I/3 + (1/2) sum_a x_a lambda_a, rho > 0
///   veronese:        (polar, azimuth) of a qubit q, rho = |nu(q)><nu(q)|
class QuantumChart {
   public:
    explicit QuantumChart(QuantumChartKind kind, double eps = 1e-3) : kind_(kind), eps_(eps) {
        if (!(eps > 0 && eps < 1)) throw DomainError("smoothing eps must lie in (0, 1)");
    }

    static QuantumChart parse(const std::string &name, double eps = 1e-3) {
        if (name == "bloch") return QuantumChart(QuantumChartKind::bloch, eps);
        if (name == "qutrit-diagonal" || name == "diagonal-qutrit") return QuantumChart(QuantumChartKind::qutrit_diagonal, eps);
        if (name == "qutrit-gellmann") return QuantumChart(QuantumChartKind::qutrit_gellmann, eps);
        if (name == "veronese") return QuantumChart(QuantumChartKind::veronese, eps);
        throw UsageError("unknown quantum chart '" + name + "'");
    }

    QuantumChartKind kind() const noexcept {
        return kind_;
    }
    double eps() const noexcept {
        return eps_;
    }
    std::string name() const {
        switch (kind_) {
            case QuantumChartKind::bloch: return "bloch";
            case QuantumChartKind::qutrit_diagonal: return "qutrit-diagonal";
            case QuantumChartKind::qutrit_gellmann: return "qutrit-gellmann";
            case QuantumChartKind::veronese: return "veronese";
        }
        return {};
    }
    std::size_t dimension() const noexcept {
        switch (kind_) {
            case QuantumChartKind::bloch: return 3;
            case QuantumChartKind::qutrit_diagonal: return 2;
            case QuantumChartKind::qutrit_gellmann: return 8;
            case QuantumChartKind::veronese: return 2;
        }
        return 0;
    }
    int hilbert_dimension() const noexcept {
        return kind_ == QuantumChartKind::bloch ? 2 : 3;
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != dimension()) return false;
        for (double v : x)
            if (!std::isfinite(v)) return false;
        switch (kind_) {
            case QuantumChartKind::bloch: return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 1;
            case QuantumChartKind::qutrit_diagonal: return x[0] > 0 && x[1] > 0 && 1 - x[0] - x[1] > 0;
            case QuantumChartKind::qutrit_gellmann: {
                Eigen::SelfAdjointEigenSolver<CMat> es(raw_matrix(x), Eigen::EigenvaluesOnly);
                return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0;
            }
            case QuantumChartKind::veronese: return x[0] > 0 && x[0] < std::numbers::pi;
        }
        return false;
    }

    /// Unsmoothed state at x; divergences apply the chart's eps themselves.
    DensityMatrix point(std::span<const double> x) const {
        if (x.size() != dimension())
            throw DimensionMismatch(name() + " chart expects " + std::to_string(dimension()) + " coordinates");
        if (!contains(x)) throw DomainError(name() + " chart: coordinates outside the chart domain");
        return DensityMatrix(raw_matrix(x));
    }

    static std::array<CMat, 8> gell_mann() {
        std::array<CMat, 8> l;
        for (auto &m : l) m = CMat::Zero(3, 3);
        const Complex I(0, 1);
        l[0](0, 1) = l[0](1, 0) = 1;
        l[1](0, 1) = -I, l[1](1, 0) = I;
        l[2](0, 0) = 1, l[2](1, 1) = -1;
        l[3](0, 2) = l[3](2, 0) = 1;
        l[4](0, 2) = -I, l[4](2, 0) = I;
        l[5](1, 2) = l[5](2, 1) = 1;
        l[6](1, 2) = -I, l[6](2, 1) = I;
        const double r3 = 1 / std::sqrt(3.0);
        l[7](0, 0) = r3, l[7](1, 1) = r3, l[7](2, 2) = -2 * r3;
        return l;
    }

   private:
    CMat raw_matrix(std::span<const double> x) const {
        const Complex I(0, 1);
        switch (kind_) {
            case QuantumChartKind::bloch: {
                CMat m(2, 2);
                m << 1 + x[2], x[0] - I * x[1], x[0] + I * x[1], 1 - x[2];
                return m / 2.0;
            }
            case QuantumChartKind::qutrit_diagonal: {
                CMat m = CMat::Zero(3, 3);
                m(0, 0) = x[0], m(1, 1) = x[1], m(2, 2) = 1 - x[0] - x[1];
                return m;
            }
            case QuantumChartKind::qutrit_gellmann: {
                static const std::array<CMat, 8> l = gell_mann();
                CMat m = CMat::Identity(3, 3) / 3.0;
                for (std::size_t a = 0; a < 8; ++a) m += 0.5 * x[a] * l[a];
                return m;
            }
            case QuantumChartKind::veronese: {
                CVec q(2);
                q << std::cos(x[0] / 2), std::polar(std::sin(x[0] / 2), x[1]);
                const PureState nu = veronese_embed(PureState(q));
                return nu.amplitudes() * nu.amplitudes().adjoint();
            }
        }
        return {};
    }

    QuantumChartKind kind_;
    double eps_;
};

inline DensityMatrix chart_point(const QuantumChart &chart, std::span<const double> x) {
    return chart.point(x);
}

enum class QuantumDivergenceKind { relative_entropy, jensen_shannon };

/// A quantum divergence pulled back to a chart, usable by geometry extraction.
class QuantumDivergence {
   public:
    QuantumDivergence(QuantumChart chart, QuantumDivergenceKind kind) : chart_(chart), kind_(kind) {
    }

    const QuantumChart &chart() const noexcept {
        return chart_;
    }
    QuantumDivergenceKind kind() const noexcept {
        return kind_;
    }
    std::string id() const {
        return (kind_ == QuantumDivergenceKind::relative_entropy ? "qre:" : "qjsd:") + chart_.name();
    }
    std::string chart_name() const {
        return chart_.name();
    }
    std::size_t dimension() const noexcept {
        return chart_.dimension();
    }
    bool contains(std::span<const double> x) const {
        return chart_.contains(x);
    }
    double operator()(std::span<const double> p, std::span<const double> q) const {
        const DensityMatrix rp = chart_.point(p), rq = chart_.point(q);
        if (std::equal(p.begin(), p.end(), q.begin(), q.end())) return 0.0;
        if (kind_ == QuantumDivergenceKind::relative_entropy) return quantum_relative_entropy(rp, rq, chart_.eps());
        return quantum_jsd(rp, rq);
    }

   private:
    QuantumChart chart_;
    QuantumDivergenceKind kind_;
};

}  // namespace geo
