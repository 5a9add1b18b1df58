// Command-line front end for the pure-state reconstruction library.
//
// Subcommands: reconstruct, bifurcate, probe, trajectory, bound.
// Exit codes: 0 success, 2 anomaly (no physical cluster found),
// 64 malformed spec or invocation, 65 dimension mismatch, 70 internal error.

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pio/pio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pio;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnomaly = 2;
constexpr int kExitBadSpec = 64;
constexpr int kExitDimMismatch = 65;
constexpr int kExitInternal = 70;

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string out;
    std::string config_path;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file \"" + path + "\"");
    json j;
    in >> j;
    return j;
}

// All result files are written atomically: the content lands in a temp file
// that is renamed over the target, so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write \"" + tmp.string() + "\"");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for \"" + tmp.string() + "\"");
    }
    fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Resolves the effective solver configuration. Precedence, lowest first:
// built-in defaults, --config file, the spec's "solver" object, then the
// --seed / --threads flags.
SolverConfig effective_config(const json& spec, const GlobalOpts& g) {
    SolverConfig cfg;
    if (!g.config_path.empty())
        cfg = json_io::config_from_json(load_json_file(g.config_path), cfg);
    if (spec.contains("solver"))
        cfg = json_io::config_from_json(spec["solver"], cfg);
    if (g.seed) cfg.master_seed = *g.seed;
    if (g.threads) cfg.threads = *g.threads;
    cfg.validate();
    return cfg;
}

void check_schema_version(const json& spec) {
    if (spec.contains("schema_version") && spec["schema_version"] != 1)
        throw std::invalid_argument("unsupported schema_version");
}

PureState generator_from_spec(const json& spec, int dim, const SolverConfig& cfg) {
    const json& g = spec["generator"];
    if (g.is_string()) {
        if (g.get<std::string>() != "random")
            throw std::invalid_argument("generator must be a state or \"random\"");
        RandomStream rng(cfg.master_seed, 0, 0);
        return random_state(dim, rng);
    }
    return json_io::state_from_json(g);
}

// Builds the reconstruction problem from a spec carrying either a generator
// (targets synthesized, generator retained) or explicit target distributions.
TomographyProblem problem_from_spec(const json& spec, const SolverConfig& cfg) {
    std::vector<ObservableBasis> bases = json_io::bases_from_spec(spec.at("bases"));
    const int d = bases[0].dim();
    const bool has_gen = spec.contains("generator");
    const bool has_targets = spec.contains("targets");
    if (!has_gen && !has_targets)
        throw std::invalid_argument("spec needs \"generator\" or \"targets\"");

    std::optional<PureState> gen;
    if (has_gen) gen = generator_from_spec(spec, d, cfg);

    std::vector<ProbDist> targets;
    if (has_targets) {
        const json& tj = spec["targets"];
        if (!tj.is_array() || tj.size() != bases.size())
            throw std::invalid_argument("\"targets\" must list one distribution per basis");
        for (const auto& t : tj) targets.push_back(json_io::prob_from_json(t));
    } else {
        for (const auto& b : bases) targets.push_back(born_probabilities(b, *gen));
    }
    return TomographyProblem(std::move(bases), std::move(targets), std::move(gen));
}

json problem_to_json(const TomographyProblem& p) {
    json bases = json::array();
    for (const auto& b : p.bases()) bases.push_back(json_io::to_json(b));
    json targets = json::array();
    for (const auto& t : p.targets()) targets.push_back(json_io::to_json(t));
    json out{{"dim", p.dim()}, {"bases", std::move(bases)}, {"targets", std::move(targets)}};
    if (p.generator()) out["generator"] = json_io::to_json(*p.generator());
    return out;
}

int cmd_reconstruct(const std::string& spec_path, const GlobalOpts& g) {
    json spec = load_json_file(spec_path);
    check_schema_version(spec);
    SolverConfig cfg = effective_config(spec, g);
    TomographyProblem problem = problem_from_spec(spec, cfg);
    SolutionSet sols = enumerate_partners(problem, cfg);

    json result{{"schema_version", 1},
                {"command", "reconstruct"},
                {"config", json_io::to_json(cfg)},
                {"problem", problem_to_json(problem)},
                {"solution_set", json_io::to_json(sols)},
                {"anomaly", sols.cardinality_estimate == 0}};
    emit(g.out, result.dump(2) + "\n");
    return sols.cardinality_estimate == 0 ? kExitAnomaly : kExitOk;
}

// Great-circle arc between two rays: the second endpoint is phase-aligned
// with the first, the arc runs at constant speed from t=0 (from) to t=1 (to).
std::function<PureState(double)> great_circle(const PureState& from, const PureState& to) {
    require_same_dim(from.dim(), to.dim(), "path endpoints");
    cplx z = inner(from, to);
    double overlap = std::min(std::abs(z), 1.0);
    if (overlap >= 1.0 - 1e-14) {
        PureState fixed = from;
        return [fixed](double) { return fixed; };
    }
    // Phase-align the far endpoint so the overlap with `from` is real
    // nonnegative; the arc then stays inside the real span of the two rays.
    cplx phase = (overlap > 0.0) ? z / std::abs(z) : cplx(1.0, 0.0);
    CVec aligned = to.amplitudes() * std::conj(phase);
    double theta = std::acos(overlap);
    CVec a = from.amplitudes();
    CVec c = (aligned - overlap * a) / std::sin(theta);
    return [a, c, theta](double t) {
        CVec v = std::cos(t * theta) * a + std::sin(t * theta) * c;
        return PureState::normalized(std::move(v));
    };
}

int cmd_bifurcate(const std::string& spec_path, const GlobalOpts& g) {
    json spec = load_json_file(spec_path);
    check_schema_version(spec);
    SolverConfig cfg = effective_config(spec, g);
    std::vector<ObservableBasis> bases = json_io::bases_from_spec(spec.at("bases"));

    const json& pj = spec.at("path");
    if (!pj.is_object()) throw std::invalid_argument("\"path\" must be an object");
    std::vector<double> grid;
    std::function<PureState(double)> path;
    std::string type = pj.value("type", "great_circle");
    if (type == "great_circle") {
        PureState from = json_io::state_from_json(pj.at("from"));
        PureState to = json_io::state_from_json(pj.at("to"));
        int points = pj.value("points", 101);
        if (points < 1) throw std::invalid_argument("path needs points >= 1");
        for (int i = 0; i < points; ++i)
            grid.push_back(points == 1 ? 0.0
                                       : static_cast<double>(i) / (points - 1));
        path = great_circle(from, to);
    } else {
        throw std::invalid_argument("unknown path type \"" + type + "\"");
    }

    SweepResult sweep = bifurcation_sweep(bases, path, grid, cfg);

    std::ostringstream csv;
    csv << "t,cardinality,nearest_eigenvector_distance\n";
    for (const auto& p : sweep.points)
        csv << fmt_double(p.t) << ',' << p.cardinality << ','
            << fmt_double(p.nearest_eigenvector_distance) << '\n';
    emit(g.out, csv.str());

    json brackets = json::array();
    for (const auto& b : sweep.brackets) brackets.push_back(json_io::to_json(b));
    json sidecar{{"schema_version", 1},
                 {"command", "bifurcate"},
                 {"config", json_io::to_json(cfg)},
                 {"n_points", sweep.points.size()},
                 {"brackets", std::move(brackets)}};
    if (!g.out.empty())
        atomic_write(g.out + ".brackets.json", sidecar.dump(2) + "\n");
    else
        std::cout << sidecar.dump(2) << "\n";
    return kExitOk;
}

int cmd_probe(const std::string& spec_path, const GlobalOpts& g) {
    json spec = load_json_file(spec_path);
    check_schema_version(spec);
    SolverConfig cfg = effective_config(spec, g);
    std::vector<ObservableBasis> bases = json_io::bases_from_spec(spec.at("bases"));
    if (!spec.contains("n_generators"))
        throw std::invalid_argument("probe spec needs \"n_generators\"");
    int n_generators = spec["n_generators"].get<int>();

    CompletenessReport completeness = completeness_probe(bases, n_generators, cfg);
    json result{{"schema_version", 1},
                {"command", "probe"},
                {"config", json_io::to_json(cfg)},
                {"completeness", json_io::to_json(completeness)}};

    if (spec.contains("perturbation")) {
        double eps = spec["perturbation"].at("epsilon").get<double>();
        PerturbationReport rep = perturbation_probe(bases, eps, cfg, n_generators);
        result["perturbation"] = json_io::to_json(rep);
    }
    emit(g.out, result.dump(2) + "\n");
    return kExitOk;
}

int cmd_trajectory(const std::string& spec_path, const GlobalOpts& g) {
    json spec = load_json_file(spec_path);
    check_schema_version(spec);
    SolverConfig cfg = effective_config(spec, g);
    TomographyProblem problem = problem_from_spec(spec, cfg);
    const int d = problem.dim();

    PureState state = [&]() {
        if (!spec.contains("seed") || (spec["seed"].is_string() &&
                                       spec["seed"].get<std::string>() == "random")) {
            RandomStream rng(cfg.master_seed, 0, 1);
            return make_seed(d, first_applied_basis(problem, cfg.composition_order), rng);
        }
        return json_io::state_from_json(spec["seed"]);
    }();

    std::ostringstream csv;
    csv << "n,step_bures,residual";
    for (int k = 0; k < d; ++k) csv << ",re_" << k << ",im_" << k;
    if (d == 2) csv << ",bloch_x,bloch_y,bloch_z";
    csv << '\n';

    auto emit_row = [&](long n, double step, const PureState& s) {
        csv << n << ',' << fmt_double(step) << ',' << fmt_double(residual(problem, s));
        for (int k = 0; k < d; ++k)
            csv << ',' << fmt_double(s[k].real()) << ',' << fmt_double(s[k].imag());
        if (d == 2) {
            cplx cross = std::conj(s[0]) * s[1];
            csv << ',' << fmt_double(2.0 * cross.real()) << ','
                << fmt_double(2.0 * cross.imag()) << ','
                << fmt_double(std::norm(s[0]) - std::norm(s[1]));
        }
        csv << '\n';
    };

    emit_row(0, 0.0, state);
    for (long n = 1; n <= cfg.max_iters; ++n) {
        PureState next = impose_relaxed(problem, state, cfg.lambda, cfg.composition_order);
        double step = bures(next, state);
        if (step < cfg.conv_tol) break;
        state = std::move(next);
        emit_row(n, step, state);
    }
    emit(g.out, csv.str());
    return kExitOk;
}

int cmd_bound(int dim, const GlobalOpts& g) {
    int bound = povm_lower_bound(dim);
    json result{{"schema_version", 1},
                {"command", "bound"},
                {"dimension", dim},
                {"lower_bound", bound}};
    emit(g.out, result.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure-state reconstruction from basis measurement statistics"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOpts g;
    std::uint64_t seed_val = 0;
    int threads_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "Master seed override");
    auto* threads_opt = app.add_option("--threads", threads_val, "Solver thread count");
    app.add_option("--out", g.out, "Output file path (default: stdout)");
    app.add_option("--config", g.config_path, "Solver config JSON file");

    std::string spec_path;
    int bound_dim = 0;

    CLI::App* reconstruct = app.add_subcommand(
        "reconstruct", "Enumerate the physical fixed points of a reconstruction problem");
    reconstruct->add_option("spec", spec_path, "Problem spec JSON file")->required();

    CLI::App* bifurcate = app.add_subcommand(
        "bifurcate", "Sweep a generator path and bracket solution-count changes");
    bifurcate->add_option("spec", spec_path, "Sweep spec JSON file")->required();

    CLI::App* probe = app.add_subcommand(
        "probe", "Probe a basis set for informational completeness");
    probe->add_option("spec", spec_path, "Probe spec JSON file")->required();

    CLI::App* trajectory = app.add_subcommand(
        "trajectory", "Emit per-iteration convergence data for one seed");
    trajectory->add_option("spec", spec_path, "Trajectory spec JSON file")->required();

    CLI::App* bound = app.add_subcommand(
        "bound", "Lower bound on projector count for informational completeness");
    bound->add_option("--dim", bound_dim, "Hilbert space dimension")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadSpec;
    }

    if (*seed_opt) g.seed = seed_val;
    if (*threads_opt) g.threads = threads_val;

    try {
        if (reconstruct->parsed()) return cmd_reconstruct(spec_path, g);
        if (bifurcate->parsed()) return cmd_bifurcate(spec_path, g);
        if (probe->parsed()) return cmd_probe(spec_path, g);
        if (trajectory->parsed()) return cmd_trajectory(spec_path, g);
        if (bound->parsed()) return cmd_bound(bound_dim, g);
        std::cerr << "error: no subcommand\n";
        return kExitBadSpec;
    } catch (const dim_mismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimMismatch;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed spec: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
