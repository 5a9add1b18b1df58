#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "pio/imposition.hpp"
#include "pio/rng.hpp"

namespace pio {

struct SolverConfig {
    long max_iters = 10000;
    double conv_tol = 1e-12;       // Bures step size between successive iterates
    double physical_tol = 1e-8;    // distributional residual accepted as a solution
    double dedup_tol = 1e-6;       // Bures radius for ray clustering
    int n_seeds = 64;
    double lambda = 1.0;           // relaxation weight, 1 = plain composite step
    CompositionOrder composition_order = CompositionOrder::last_basis_first;
    std::uint64_t master_seed = 1;
    int threads = 1;

    // Defaults with the seed count scaled to the dimension.
    static SolverConfig for_dimension(int d) {
        SolverConfig c;
        c.n_seeds = std::max(64, 32 * d);
        return c;
    }

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
        if (!(conv_tol > 0.0) || conv_tol >= 1.0)
            throw std::invalid_argument("conv_tol must lie in (0, 1)");
        if (!(physical_tol > 0.0) || physical_tol >= 1.0)
            throw std::invalid_argument("physical_tol must lie in (0, 1)");
        if (!(dedup_tol > 0.0) || dedup_tol >= 1.0)
            throw std::invalid_argument("dedup_tol must lie in (0, 1)");
        if (n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
        if (!(lambda > 0.0) || lambda > 1.0)
            throw std::invalid_argument("lambda must lie in (0, 1]");
        if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    }
};

enum class IterationStatus {
    converged,         // successive-iterate step fell below conv_tol
    max_iters_reached, // budget exhausted first; reported, never dropped
};

struct FixedPointRecord {
    PureState state;
    bool is_physical;               // residual <= physical_tol
    double distributional_residual;
    long iterations;                // composite applications that moved the state
    int seed_index;
    IterationStatus status;
};

struct Cluster {
    FixedPointRecord representative; // earliest-seed member
    int multiplicity = 1;
    double best_residual = 0.0;      // smallest residual among members
};

struct SolutionSet {
    std::vector<Cluster> clusters; // physical clusters only, deduplicated
    int cardinality_estimate = 0;  // == clusters.size()
    bool continuum_flag = false;
    std::vector<int> saturation;   // distinct physical clusters after each seed
    int n_seeds_run = 0;
    int n_non_physical = 0;
    int n_unconverged = 0;
    double min_residual_observed = 0.0; // across all runs, physical or not
};

// Targets synthesized from a known generator state; the generator is kept on
// the problem for later verification.
inline TomographyProblem synthesize_problem(const PureState& generator,
                                            const std::vector<ObservableBasis>& bases) {
    if (bases.empty())
        throw std::invalid_argument("synthesize_problem needs at least one basis");
    std::vector<ProbDist> targets;
    targets.reserve(bases.size());
    for (const auto& b : bases) {
        require_same_dim(b.dim(), generator.dim(), "synthesize_problem");
        targets.push_back(born_probabilities(b, generator));
    }
    return TomographyProblem(bases, std::move(targets), generator);
}

// Random seed state with equal amplitudes 1/sqrt(d) in the given basis and
// d-1 free phases (the first phase is pinned to zero). The basis must be the
// one the composite applies first: that imposition overwrites amplitudes
// immediately, so only the seed's phases in that basis can influence the
// outcome, and equal amplitudes sample exactly the d-1 parameters that matter.
inline PureState make_seed(int dim, const ObservableBasis& first_basis, RandomStream& rng) {
    if (dim < 2) throw std::invalid_argument("make_seed requires dim >= 2");
    require_same_dim(first_basis.dim(), dim, "make_seed");
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    CVec coeff(dim);
    coeff[0] = cplx(amp, 0.0);
    for (int k = 1; k < dim; ++k) {
        double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
        coeff[k] = amp * cplx(std::cos(th), std::sin(th));
    }
    return PureState::normalized(first_basis.matrix() * coeff);
}

// The basis the composite applies first under the given order.
inline const ObservableBasis& first_applied_basis(const TomographyProblem& problem,
                                                  CompositionOrder order) {
    return order == CompositionOrder::last_basis_first ? problem.bases().back()
                                                       : problem.bases().front();
}

// Fixed-point iteration from one seed. Stops when the Bures step between
// successive iterates falls below conv_tol, or when max_iters composite
// applications have run (reported via status, never silently dropped).
// `iterations` counts the applications that actually moved the state, so a
// seed that is already a fixed point reports 0.
inline FixedPointRecord iterate(const TomographyProblem& problem, const PureState& seed,
                                const SolverConfig& config, int seed_index = -1) {
    config.validate();
    PureState cur = seed;
    long applications = 0;
    IterationStatus status = IterationStatus::max_iters_reached;
    while (applications < config.max_iters) {
        PureState next = impose_relaxed(problem, cur, config.lambda,
                                        config.composition_order);
        ++applications;
        double step = bures(next, cur);
        cur = std::move(next);
        if (step < config.conv_tol) {
            status = IterationStatus::converged;
            break;
        }
    }
    double r = residual(problem, cur);
    long moved = (status == IterationStatus::converged) ? applications - 1 : applications;
    return FixedPointRecord{std::move(cur), r <= config.physical_tol, r, moved,
                            seed_index, status};
}

// Multi-seed enumeration of the physical fixed points. Seeds are derived
// deterministically from (master_seed, seed_index); runs may execute on
// several threads but the clustering reduction is sequential in seed order,
// so the result does not depend on the thread count.
inline SolutionSet enumerate_partners(const TomographyProblem& problem,
                                      const SolverConfig& config) {
    config.validate();
    const ObservableBasis& seed_basis =
        first_applied_basis(problem, config.composition_order);
    const int n = config.n_seeds;

    std::vector<std::optional<FixedPointRecord>> records(n);
    auto run_range = [&](int begin, int stride) {
        for (int i = begin; i < n; i += stride) {
            RandomStream rng(config.master_seed, static_cast<std::uint64_t>(i), 1);
            PureState seed = make_seed(problem.dim(), seed_basis, rng);
            records[i] = iterate(problem, seed, config, i);
        }
    };

    const int workers = std::max(1, std::min(config.threads, n));
    if (workers == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w, workers);
        for (auto& t : pool) t.join();
    }

    SolutionSet out;
    out.n_seeds_run = n;
    out.min_residual_observed = std::numeric_limits<double>::infinity();
    out.saturation.reserve(n);
    for (int i = 0; i < n; ++i) {
        const FixedPointRecord& rec = *records[i];
        out.min_residual_observed =
            std::min(out.min_residual_observed, rec.distributional_residual);
        if (rec.status == IterationStatus::max_iters_reached) ++out.n_unconverged;
        if (!rec.is_physical) {
            ++out.n_non_physical;
        } else {
            // Greedy clustering anchored at the earliest member of each
            // cluster; deterministic because it runs in seed order.
            int best = -1;
            double best_dist = 0.0;
            for (std::size_t c = 0; c < out.clusters.size(); ++c) {
                double dist = bures(rec.state, out.clusters[c].representative.state);
                if (dist <= config.dedup_tol && (best < 0 || dist < best_dist)) {
                    best = static_cast<int>(c);
                    best_dist = dist;
                }
            }
            if (best >= 0) {
                Cluster& cl = out.clusters[static_cast<std::size_t>(best)];
                ++cl.multiplicity;
                cl.best_residual = std::min(cl.best_residual, rec.distributional_residual);
            } else {
                out.clusters.push_back(Cluster{rec, 1, rec.distributional_residual});
            }
        }
        out.saturation.push_back(static_cast<int>(out.clusters.size()));
    }

    // Continuum heuristic: a solution continuum keeps producing new distinct
    // clusters as seeds accumulate, while a finite set saturates. Flag when
    // the count is both large (> 25) and still growing between the half-seed
    // and full-seed marks (at least 1.5x).
    if (n >= 2 && !out.saturation.empty()) {
        int half = out.saturation[static_cast<std::size_t>(n / 2 - 1)];
        int full = out.saturation.back();
        out.continuum_flag = full > 25 && static_cast<double>(full) >= 1.5 * half;
    }

    std::stable_sort(out.clusters.begin(), out.clusters.end(),
                     [](const Cluster& a, const Cluster& b) {
                         if (a.multiplicity != b.multiplicity)
                             return a.multiplicity > b.multiplicity;
                         return a.representative.seed_index < b.representative.seed_index;
                     });
    out.cardinality_estimate = static_cast<int>(out.clusters.size());
    return out;
}

struct CompletenessReport {
    bool complete = true; // no counterexample among the sampled generators
    int n_tested = 0;
    std::optional<PureState> counterexample;
    int counterexample_cardinality = 0;
    int n_anomalies = 0; // generators whose enumeration found nothing physical
    std::vector<int> cardinalities;
};

// Samples random generators and enumerates partners for each; any generator
// with two or more distinct physical clusters disproves informational
// completeness. A true verdict means "no counterexample found", not a proof.
inline CompletenessReport completeness_probe(const std::vector<ObservableBasis>& bases,
                                             int n_generators,
                                             const SolverConfig& config) {
    if (n_generators < 1)
        throw std::invalid_argument("completeness_probe requires n_generators >= 1");
    if (bases.empty())
        throw std::invalid_argument("completeness_probe needs at least one basis");
    CompletenessReport report;
    const int d = bases[0].dim();
    for (int g = 0; g < n_generators; ++g) {
        RandomStream rng(config.master_seed, static_cast<std::uint64_t>(g), 2);
        PureState gen = random_state(d, rng);
        SolutionSet sols = enumerate_partners(synthesize_problem(gen, bases), config);
        report.cardinalities.push_back(sols.cardinality_estimate);
        ++report.n_tested;
        if (sols.cardinality_estimate == 0) ++report.n_anomalies;
        if (sols.cardinality_estimate >= 2) {
            report.complete = false;
            report.counterexample = gen;
            report.counterexample_cardinality = sols.cardinality_estimate;
            break;
        }
    }
    return report;
}

struct SweepPoint {
    double t;
    int cardinality;
    double nearest_eigenvector_distance; // Bures from the generator at t to
                                         // the closest basis vector
};

struct SweepBracket {
    double t_lo, t_hi;
    int card_lo, card_hi;
    double nearest_eigenvector_distance; // min over the two endpoints
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SweepBracket> brackets;
};

// Cardinality of the solution set along a parameterized generator curve.
// Every grid interval across which the count changes is reported as a
// bifurcation bracket, annotated with how close the bracketing generators
// come to an eigenvector of a measured observable.
inline SweepResult bifurcation_sweep(const std::vector<ObservableBasis>& bases,
                                     const std::function<PureState(double)>& path,
                                     const std::vector<double>& t_grid,
                                     const SolverConfig& config) {
    if (bases.empty())
        throw std::invalid_argument("bifurcation_sweep needs at least one basis");
    if (t_grid.empty())
        throw std::invalid_argument("bifurcation_sweep needs a nonempty grid");
    SweepResult result;
    result.points.reserve(t_grid.size());
    for (double t : t_grid) {
        PureState gen = path(t);
        require_same_dim(gen.dim(), bases[0].dim(), "bifurcation_sweep path");
        SolutionSet sols = enumerate_partners(synthesize_problem(gen, bases), config);
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& b : bases)
            for (int k = 0; k < b.dim(); ++k)
                nearest = std::min(nearest, bures(gen, PureState::normalized(b.vector(k))));
        result.points.push_back(SweepPoint{t, sols.cardinality_estimate, nearest});
    }
    for (std::size_t i = 0; i + 1 < result.points.size(); ++i) {
        const SweepPoint& a = result.points[i];
        const SweepPoint& b = result.points[i + 1];
        if (a.cardinality != b.cardinality)
            result.brackets.push_back(
                SweepBracket{a.t, b.t, a.cardinality, b.cardinality,
                             std::min(a.nearest_eigenvector_distance,
                                      b.nearest_eigenvector_distance)});
    }
    return result;
}

struct PerturbationReport {
    bool before_complete = false;
    bool after_complete = false;
    double epsilon = 0.0;
    std::vector<double> frobenius_distances; // ||U_i - I||_F per basis
    int n_generators = 0;
};

// Nudges every basis by a random unitary within Frobenius distance epsilon
// of the identity, re-orthonormalizes, and re-runs the completeness probe.
// Observation-level tool: reports whether the verdict survived the nudge.
inline PerturbationReport perturbation_probe(const std::vector<ObservableBasis>& bases,
                                             double epsilon, const SolverConfig& config,
                                             int n_generators = 20) {
    if (bases.empty())
        throw std::invalid_argument("perturbation_probe needs at least one basis");
    if (epsilon < 0.0 || epsilon > 1e-2)
        throw std::invalid_argument("perturbation epsilon must lie in [0, 1e-2]");
    PerturbationReport report;
    report.epsilon = epsilon;
    report.n_generators = n_generators;
    report.before_complete = completeness_probe(bases, n_generators, config).complete;

    const int d = bases[0].dim();
    std::vector<ObservableBasis> nudged;
    nudged.reserve(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        RandomStream rng(config.master_seed, static_cast<std::uint64_t>(i), 3);
        CMat a(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r) a(r, c) = rng.normal_complex();
        CMat k = 0.5 * (a - a.adjoint()); // anti-Hermitian direction
        double kn = k.norm();
        if (kn > 0.0) k /= kn;
        // I + s*K re-orthonormalized is unitary and within epsilon of I for
        // small s; shrink s until the Frobenius requirement holds.
        double s = 0.9 * epsilon;
        CMat u = CMat::Identity(d, d);
        double fd = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            CMat u0 = CMat::Identity(d, d) + s * k;
            Eigen::HouseholderQR<CMat> qr(u0);
            CMat q = qr.householderQ();
            CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int c = 0; c < d; ++c) {
                cplx diag = r(c, c);
                double m = std::abs(diag);
                q.col(c) *= (m > 0.0) ? diag / m : cplx(1.0, 0.0);
            }
            u = q;
            fd = (u - CMat::Identity(d, d)).norm();
            if (fd <= epsilon || s == 0.0) break;
            s *= 0.5;
        }
        report.frobenius_distances.push_back(fd);
        // Re-orthonormalize the product against round-off drift.
        CMat vb = u * bases[i].matrix();
        Eigen::HouseholderQR<CMat> qr2(vb);
        CMat q2 = qr2.householderQ();
        CMat r2 = qr2.matrixQR().triangularView<Eigen::Upper>();
        for (int c = 0; c < d; ++c) {
            cplx diag = r2(c, c);
            double m = std::abs(diag);
            q2.col(c) *= (m > 0.0) ? diag / m : cplx(1.0, 0.0);
        }
        nudged.emplace_back(std::move(q2), bases[i].label() + "~");
    }
    report.after_complete = completeness_probe(nudged, n_generators, config).complete;
    return report;
}

} // namespace pio
