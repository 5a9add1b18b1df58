#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "pio/catalog.hpp"
#include "pio/metrics.hpp"
#include "pio/solver.hpp"

// JSON encoding of every externally visible type. Complex numbers are
// [re, im] pairs; doubles go through the library's shortest-round-trip
// encoder, so emitted decimals reparse to the identical bit pattern.
namespace pio::json_io {

using nlohmann::json;

inline json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("complex values must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const PureState& s) {
    json out = json::array();
    for (int k = 0; k < s.dim(); ++k) out.push_back(to_json(s[k]));
    return out;
}

inline PureState state_from_json(const json& j) {
    if (!j.is_array() || j.size() < 2)
        throw std::invalid_argument("state must be an array of at least two [re, im] pairs");
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k)
        v[static_cast<Eigen::Index>(k)] = cplx_from_json(j[k]);
    // Already-normalized input skips the renormalizing division so that a
    // dumped state reloads with bit-identical amplitudes.
    if (std::abs(v.norm() - 1.0) <= tol::norm) return PureState(std::move(v));
    return PureState::normalized(std::move(v));
}

inline json to_json(const ProbDist& p) {
    json out = json::array();
    for (int k = 0; k < p.size(); ++k) out.push_back(p[k]);
    return out;
}

inline ProbDist prob_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("distribution must be a nonempty array of numbers");
    Eigen::VectorXd p(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number())
            throw std::invalid_argument("distribution entries must be numbers");
        p[static_cast<Eigen::Index>(k)] = j[k].get<double>();
    }
    return ProbDist(std::move(p));
}

inline json to_json(const ObservableBasis& b) {
    json vectors = json::array();
    for (int k = 0; k < b.dim(); ++k) {
        json col = json::array();
        for (int n = 0; n < b.dim(); ++n) col.push_back(to_json(b.vector(k)[n]));
        vectors.push_back(std::move(col));
    }
    return json{{"label", b.label()}, {"vectors", std::move(vectors)}};
}

inline ObservableBasis basis_from_json(const json& j) {
    const json* vectors = nullptr;
    std::string label;
    if (j.is_object()) {
        if (!j.contains("vectors"))
            throw std::invalid_argument("basis object needs a \"vectors\" field");
        vectors = &j["vectors"];
        label = j.value("label", "");
    } else if (j.is_array()) {
        vectors = &j;
    } else {
        throw std::invalid_argument("basis must be an object or an array of vectors");
    }
    if (!vectors->is_array() || vectors->empty())
        throw std::invalid_argument("basis vectors must form a nonempty array");
    const auto d = vectors->size();
    CMat m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
        const json& col = (*vectors)[k];
        if (!col.is_array() || col.size() != d)
            throw dim_mismatch("basis vector " + std::to_string(k) +
                               " does not match the basis dimension");
        for (std::size_t n = 0; n < d; ++n)
            m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                cplx_from_json(col[n]);
    }
    return ObservableBasis(std::move(m), std::move(label));
}

inline const char* to_string(CompositionOrder order) {
    return order == CompositionOrder::last_basis_first ? "last_basis_first"
                                                       : "first_basis_first";
}

inline CompositionOrder composition_order_from_string(const std::string& s) {
    if (s == "last_basis_first") return CompositionOrder::last_basis_first;
    if (s == "first_basis_first") return CompositionOrder::first_basis_first;
    throw std::invalid_argument("unknown composition_order \"" + s + "\"");
}

inline const char* to_string(IterationStatus s) {
    return s == IterationStatus::converged ? "converged" : "max_iters_reached";
}

inline json to_json(const SolverConfig& c) {
    return json{{"max_iters", c.max_iters},
                {"conv_tol", c.conv_tol},
                {"physical_tol", c.physical_tol},
                {"dedup_tol", c.dedup_tol},
                {"n_seeds", c.n_seeds},
                {"lambda", c.lambda},
                {"composition_order", to_string(c.composition_order)},
                {"master_seed", c.master_seed},
                {"threads", c.threads}};
}

// Overlay semantics: fields present in j override the base; everything else
// is inherited. Unknown keys are rejected so typos cannot silently pass.
inline SolverConfig config_from_json(const json& j, SolverConfig base) {
    if (!j.is_object())
        throw std::invalid_argument("solver config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "max_iters") base.max_iters = value.get<long>();
        else if (key == "conv_tol") base.conv_tol = value.get<double>();
        else if (key == "physical_tol") base.physical_tol = value.get<double>();
        else if (key == "dedup_tol") base.dedup_tol = value.get<double>();
        else if (key == "n_seeds") base.n_seeds = value.get<int>();
        else if (key == "lambda") base.lambda = value.get<double>();
        else if (key == "composition_order")
            base.composition_order = composition_order_from_string(value.get<std::string>());
        else if (key == "master_seed") base.master_seed = value.get<std::uint64_t>();
        else if (key == "threads") base.threads = value.get<int>();
        else throw std::invalid_argument("unknown solver config key \"" + key + "\"");
    }
    base.validate();
    return base;
}

inline json to_json(const MetricReport& r) {
    return json{{"bures", r.bures},
                {"distributional", r.distributional},
                {"per_basis_hellinger", r.per_basis_hellinger},
                {"bound_violated", r.bound_violated}};
}

inline json to_json(const FixedPointRecord& r) {
    return json{{"state", to_json(r.state)},
                {"is_physical", r.is_physical},
                {"distributional_residual", r.distributional_residual},
                {"iterations", r.iterations},
                {"seed_index", r.seed_index},
                {"status", to_string(r.status)}};
}

inline json to_json(const Cluster& c) {
    json out = to_json(c.representative);
    out["multiplicity"] = c.multiplicity;
    out["best_residual"] = c.best_residual;
    return out;
}

inline json to_json(const SolutionSet& s) {
    json clusters = json::array();
    for (const auto& c : s.clusters) clusters.push_back(to_json(c));
    return json{{"clusters", std::move(clusters)},
                {"cardinality_estimate", s.cardinality_estimate},
                {"continuum_flag", s.continuum_flag},
                {"saturation", s.saturation},
                {"n_seeds_run", s.n_seeds_run},
                {"n_non_physical", s.n_non_physical},
                {"n_unconverged", s.n_unconverged},
                {"min_residual_observed", s.min_residual_observed}};
}

inline json to_json(const CompletenessReport& r) {
    json out{{"complete", r.complete},
             {"n_tested", r.n_tested},
             {"counterexample_cardinality", r.counterexample_cardinality},
             {"n_anomalies", r.n_anomalies},
             {"cardinalities", r.cardinalities}};
    if (r.counterexample) out["counterexample"] = to_json(*r.counterexample);
    return out;
}

inline json to_json(const PerturbationReport& r) {
    return json{{"before_complete", r.before_complete},
                {"after_complete", r.after_complete},
                {"epsilon", r.epsilon},
                {"frobenius_distances", r.frobenius_distances},
                {"n_generators", r.n_generators}};
}

inline json to_json(const SweepBracket& b) {
    return json{{"t_lo", b.t_lo},
                {"t_hi", b.t_hi},
                {"cardinality_lo", b.card_lo},
                {"cardinality_hi", b.card_hi},
                {"nearest_eigenvector_distance", b.nearest_eigenvector_distance}};
}

// Basis-set specification accepted by all commands. Three forms:
//   - family string: "pauli" | "spin-1" | "spin-1/2" | "fourier:<d>"
//     | "random:<d>:<m>:<seed>"
//   - object {"family": <string>, "members": [indices...]} selecting a subset
//   - inline array of basis objects/arrays
inline std::vector<ObservableBasis> bases_from_spec(const json& j) {
    auto family_bases = [](const std::string& name) -> std::vector<ObservableBasis> {
        if (name == "pauli") return pauli_bases().bases;
        if (name == "spin-1") return spin_observable_bases(2).bases;
        if (name == "spin-1/2") return spin_observable_bases(1).bases;
        if (name.rfind("fourier:", 0) == 0) {
            int d = 0;
            try {
                d = std::stoi(name.substr(8));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad fourier family \"" + name + "\"");
            }
            CMat eye = CMat::Identity(d < 2 ? 2 : d, d < 2 ? 2 : d);
            if (d < 2) throw std::invalid_argument("fourier family needs dim >= 2");
            return {ObservableBasis(eye, "standard"), fourier_basis(d)};
        }
        if (name.rfind("random:", 0) == 0) {
            std::string rest = name.substr(7);
            auto p1 = rest.find(':');
            auto p2 = rest.find(':', p1 == std::string::npos ? p1 : p1 + 1);
            if (p1 == std::string::npos || p2 == std::string::npos)
                throw std::invalid_argument("random family needs \"random:d:m:seed\"");
            int d = 0, m = 0;
            std::uint64_t seed = 0;
            try {
                d = std::stoi(rest.substr(0, p1));
                m = std::stoi(rest.substr(p1 + 1, p2 - p1 - 1));
                seed = std::stoull(rest.substr(p2 + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad random family \"" + name + "\"");
            }
            if (d < 2 || m < 1)
                throw std::invalid_argument("random family needs d >= 2 and m >= 1");
            std::vector<ObservableBasis> out;
            out.reserve(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                RandomStream rng(seed, static_cast<std::uint64_t>(i), 0);
                out.push_back(random_basis(d, rng));
            }
            return out;
        }
        throw std::invalid_argument("unknown basis family \"" + name + "\"");
    };

    if (j.is_string()) return family_bases(j.get<std::string>());
    if (j.is_object()) {
        if (!j.contains("family"))
            throw std::invalid_argument("basis object form needs a \"family\" field");
        std::vector<ObservableBasis> all = family_bases(j["family"].get<std::string>());
        if (!j.contains("members")) return all;
        if (!j["members"].is_array())
            throw std::invalid_argument("\"members\" must be an array of indices");
        std::vector<ObservableBasis> out;
        for (const auto& idx : j["members"]) {
            if (!idx.is_number_integer())
                throw std::invalid_argument("\"members\" must be an array of indices");
            long i = idx.get<long>();
            if (i < 0 || i >= static_cast<long>(all.size()))
                throw std::invalid_argument("family member index " + std::to_string(i) +
                                            " out of range");
            out.push_back(all[static_cast<std::size_t>(i)]);
        }
        if (out.empty()) throw std::invalid_argument("\"members\" selected no bases");
        return out;
    }
    if (j.is_array()) {
        std::vector<ObservableBasis> out;
        for (const auto& b : j) out.push_back(basis_from_json(b));
        if (out.empty()) throw std::invalid_argument("inline basis list is empty");
        return out;
    }
    throw std::invalid_argument("bases must be a family string, an object, or an array");
}

} // namespace pio::json_io
