#pragma once

#include <optional>
#include <vector>

#include "pio/metrics.hpp"

namespace pio {

// Order in which the composite operator applies its factors over the basis
// list {B_0, ..., B_{m-1}}.
enum class CompositionOrder {
    last_basis_first,  // B_{m-1} acts first, B_0 last (default)
    first_basis_first, // B_0 acts first, B_{m-1} last
};

// A reconstruction instance: m observable bases with one target distribution
// each. When the instance was synthesized from a known generator state the
// generator is retained for verification, never used by the dynamics.
class TomographyProblem {
  public:
    TomographyProblem(std::vector<ObservableBasis> bases, std::vector<ProbDist> targets,
                      std::optional<PureState> generator = std::nullopt)
        : bases_(std::move(bases)), targets_(std::move(targets)),
          generator_(std::move(generator)) {
        if (bases_.empty())
            throw std::invalid_argument("problem needs at least one basis");
        if (bases_.size() != targets_.size())
            throw std::invalid_argument("one target distribution per basis required");
        const int d = bases_[0].dim();
        for (const auto& b : bases_) require_same_dim(b.dim(), d, "problem basis");
        for (const auto& t : targets_) require_same_dim(t.size(), d, "problem target");
        if (generator_) {
            require_same_dim(generator_->dim(), d, "problem generator");
            for (std::size_t j = 0; j < bases_.size(); ++j) {
                ProbDist p = born_probabilities(bases_[j], *generator_);
                double dev = 0.0;
                for (int k = 0; k < d; ++k)
                    dev = std::max(dev, std::abs(p[k] - targets_[j][k]));
                if (dev > tol::born_match)
                    throw std::invalid_argument(
                        "retained generator does not reproduce target " +
                        std::to_string(j));
            }
        }
    }

    int dim() const { return bases_[0].dim(); }
    int num_bases() const { return static_cast<int>(bases_.size()); }
    const std::vector<ObservableBasis>& bases() const { return bases_; }
    const std::vector<ProbDist>& targets() const { return targets_; }
    const std::optional<PureState>& generator() const { return generator_; }

  private:
    std::vector<ObservableBasis> bases_;
    std::vector<ProbDist> targets_;
    std::optional<PureState> generator_;
};

// One imposition step: keep the state's phases in the given eigenbasis,
// overwrite its amplitudes there with the square roots of the target.
// Where the state has no component along phi_k (modulus at or below the
// zero threshold) the undefined phase factor is replaced by unity.
inline PureState impose(const ObservableBasis& basis, const ProbDist& target,
                        const PureState& state) {
    require_same_dim(basis.dim(), state.dim(), "impose");
    require_same_dim(target.size(), state.dim(), "impose target");
    const int d = state.dim();
    CVec coeff = basis.matrix().adjoint() * state.amplitudes();
    CVec out(d);
    for (int k = 0; k < d; ++k) {
        double m = std::abs(coeff[k]);
        cplx phase = (m > tol::zero_amplitude) ? coeff[k] / m : cplx(1.0, 0.0);
        out[k] = std::sqrt(target[k]) * phase;
    }
    // The imposed coefficient vector has norm 1 analytically; renormalize
    // anyway so round-off cannot accumulate over long iterations.
    return PureState::normalized(basis.matrix() * out);
}

// Distributional residual of a state against the problem targets: the
// root-mean-square Hellinger distance between born statistics and targets.
inline double residual(const TomographyProblem& problem, const PureState& state) {
    double s = 0.0;
    for (int j = 0; j < problem.num_bases(); ++j) {
        double h = hellinger(born_probabilities(problem.bases()[j], state),
                             problem.targets()[j]);
        s += h * h;
    }
    return std::sqrt(s / problem.num_bases());
}

// Composite operator: applies one imposition step per basis, in the
// configured order.
inline PureState impose_composite(const TomographyProblem& problem, const PureState& state,
                                  CompositionOrder order = CompositionOrder::last_basis_first) {
    require_same_dim(problem.dim(), state.dim(), "impose_composite");
    PureState cur = state;
    const int m = problem.num_bases();
    if (order == CompositionOrder::last_basis_first) {
        for (int j = m - 1; j >= 0; --j)
            cur = impose(problem.bases()[j], problem.targets()[j], cur);
    } else {
        for (int j = 0; j < m; ++j)
            cur = impose(problem.bases()[j], problem.targets()[j], cur);
    }
    return cur;
}

// Relaxed step: normalize(lambda * T(state) + (1 - lambda) * state).
// lambda = 1 bypasses the combination entirely and equals impose_composite.
inline PureState impose_relaxed(const TomographyProblem& problem, const PureState& state,
                                double lambda,
                                CompositionOrder order = CompositionOrder::last_basis_first) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("relaxation parameter must lie in (0, 1]");
    PureState t = impose_composite(problem, state, order);
    if (lambda == 1.0) return t;
    CVec mix = lambda * t.amplitudes() + (1.0 - lambda) * state.amplitudes();
    return PureState::normalized(std::move(mix));
}

// Expansion ratio of one imposition step measured from a reference state
// whose statistics define the target: d(T psi, ref) / d(psi, ref). The
// supremum of this ratio over all inputs is 2 (the operator is Lipschitz
// with constant 2 and not a contraction).
inline double lipschitz_ratio(const ObservableBasis& basis, const ProbDist& target,
                              const PureState& generatorlike, const PureState& probe) {
    ProbDist gen_stats = born_probabilities(basis, generatorlike);
    for (int k = 0; k < target.size(); ++k)
        if (std::abs(gen_stats[k] - target[k]) > tol::born_match)
            throw std::invalid_argument(
                "lipschitz_ratio: target does not match the reference state's statistics");
    double denom = bures(probe, generatorlike);
    if (denom <= tol::zero_amplitude)
        throw std::invalid_argument("lipschitz_ratio: probe coincides with the reference ray");
    double numer = bures(impose(basis, target, probe), generatorlike);
    return numer / denom;
}

} // namespace pio
