// Command-line experiment harness: runs NSGA-II / GSEMO grids on the
// OneJumpZeroJump benchmark, writes per-run and summary CSVs, and reports the
// theoretical runtime bounds.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ojzj/ojzj.hpp>

namespace {

using nlohmann::json;

struct CliOptions {
    std::string config_path;
    std::string algorithm = "nsga2";
    int n = 20;
    int k = 3;
    std::vector<std::size_t> pop_sizes;
    std::vector<std::size_t> pop_mults;
    ojzj::SelectionScheme selection = ojzj::SelectionScheme::independent_tournaments;
    ojzj::MutationKind mutation = ojzj::MutationKind::bitwise;
    double beta = 1.5;
    double crossover_prob = 0.0;
    std::size_t reps = 50;
    std::uint64_t seed = 1;
    std::uint64_t max_evals = 0;
    std::string out_prefix;
    std::string trace_path;
    bool assert_lemma1 = false;
    bool init_inner = false;
    unsigned threads = 0;
    bool bound_only = false;
};

const std::map<std::string, ojzj::SelectionScheme> selection_names{
    {"fair", ojzj::SelectionScheme::fair},
    {"uniform", ojzj::SelectionScheme::uniform},
    {"tournament", ojzj::SelectionScheme::independent_tournaments},
    {"two-perm", ojzj::SelectionScheme::two_permutation_tournaments}};

const std::map<std::string, ojzj::MutationKind> mutation_names{
    {"one-bit", ojzj::MutationKind::one_bit},
    {"bitwise", ojzj::MutationKind::bitwise},
    {"heavy-tailed", ojzj::MutationKind::heavy_tailed}};

template <typename T, typename M>
T parse_name(const M& names, const std::string& text, const char* what) {
    auto it = names.find(text);
    if (it == names.end())
        throw std::invalid_argument(std::string("unknown ") + what + ": " + text);
    return it->second;
}

// Values from the config file fill in every option the command line left
// untouched; flags win on conflict.
void apply_config_file(const json& file, const CLI::App& app, CliOptions& opt) {
    auto untouched = [&](const char* flag) { return app.count(flag) == 0; };
    for (const auto& [key, value] : file.items()) {
        if (key == "algorithm" && untouched("--algorithm"))
            opt.algorithm = value.get<std::string>();
        else if (key == "n" && untouched("--n"))
            opt.n = value.get<int>();
        else if (key == "k" && untouched("--k"))
            opt.k = value.get<int>();
        else if (key == "pop-size" && untouched("--pop-size"))
            opt.pop_sizes = value.is_array() ? value.get<std::vector<std::size_t>>()
                                             : std::vector<std::size_t>{value.get<std::size_t>()};
        else if (key == "pop-mult" && untouched("--pop-mult"))
            opt.pop_mults = value.is_array() ? value.get<std::vector<std::size_t>>()
                                             : std::vector<std::size_t>{value.get<std::size_t>()};
        else if (key == "selection" && untouched("--selection"))
            opt.selection = parse_name<ojzj::SelectionScheme>(selection_names,
                                                              value.get<std::string>(), "selection");
        else if (key == "mutation" && untouched("--mutation"))
            opt.mutation =
                parse_name<ojzj::MutationKind>(mutation_names, value.get<std::string>(), "mutation");
        else if (key == "beta" && untouched("--beta"))
            opt.beta = value.get<double>();
        else if (key == "crossover-prob" && untouched("--crossover-prob"))
            opt.crossover_prob = value.get<double>();
        else if (key == "reps" && untouched("--reps"))
            opt.reps = value.get<std::size_t>();
        else if (key == "seed" && untouched("--seed"))
            opt.seed = value.get<std::uint64_t>();
        else if (key == "max-evals" && untouched("--max-evals"))
            opt.max_evals = value.get<std::uint64_t>();
        else if (key == "out" && untouched("--out"))
            opt.out_prefix = value.get<std::string>();
        else if (key == "trace" && untouched("--trace"))
            opt.trace_path = value.get<std::string>();
        else if (key == "assert-lemma1" && untouched("--assert-lemma1"))
            opt.assert_lemma1 = value.get<bool>();
        else if (key == "init-inner" && untouched("--init-inner"))
            opt.init_inner = value.get<bool>();
        else if (key == "threads" && untouched("--threads"))
            opt.threads = value.get<unsigned>();
        else if (key == "algorithm" || key == "n" || key == "k" || key == "pop-size" ||
                 key == "pop-mult" || key == "selection" || key == "mutation" || key == "beta" ||
                 key == "crossover-prob" || key == "reps" || key == "seed" || key == "max-evals" ||
                 key == "out" || key == "trace" || key == "assert-lemma1" || key == "init-inner" ||
                 key == "threads")
            continue; // present in file but overridden on the command line
        else
            throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
}

ojzj::ExperimentSpec build_spec(const CliOptions& opt) {
    ojzj::ExperimentSpec spec;
    if (opt.algorithm == "nsga2")
        spec.base.algorithm = ojzj::Algorithm::nsga2;
    else if (opt.algorithm == "gsemo")
        spec.base.algorithm = ojzj::Algorithm::gsemo;
    else
        throw std::invalid_argument("unknown algorithm: " + opt.algorithm);
    spec.base.problem = ojzj::OjzjProblem{opt.n, opt.k};
    spec.base.selection = opt.selection;
    spec.base.mutation = opt.mutation;
    spec.base.beta = opt.beta;
    spec.base.crossover_probability = opt.crossover_prob;
    spec.base.max_evaluations = opt.max_evals;
    spec.base.assert_lemma1 = opt.assert_lemma1;
    spec.base.force_inner_init = opt.init_inner;
    spec.population_sizes = opt.pop_sizes;
    spec.population_multipliers = opt.pop_mults;
    if (spec.base.algorithm == ojzj::Algorithm::nsga2 && spec.population_sizes.empty() &&
        spec.population_multipliers.empty())
        spec.population_multipliers = {4};
    spec.repetitions = opt.reps;
    spec.master_seed = opt.seed;
    spec.threads = opt.threads;
    spec.capture_traces = !opt.trace_path.empty();
    if (!opt.out_prefix.empty()) {
        spec.runs_csv_path = opt.out_prefix + "_runs.csv";
        spec.summary_csv_path = opt.out_prefix + "_summary.csv";
    }
    return spec;
}

int print_bounds(const ojzj::ExperimentSpec& spec) {
    const auto grid = ojzj::build_grid(spec);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const ojzj::AlgorithmConfig& cfg = grid[g];
        std::cout << "grid " << g << ": " << to_string(cfg.algorithm) << " n=" << cfg.problem.n
                  << " k=" << cfg.problem.k;
        if (cfg.algorithm == ojzj::Algorithm::nsga2)
            std::cout << " N=" << cfg.population_size;
        std::cout << " selection=" << to_string(cfg.selection)
                  << " mutation=" << to_string(cfg.mutation) << "  asymptotic leading term: ";
        if (cfg.algorithm != ojzj::Algorithm::nsga2 || cfg.mutation == ojzj::MutationKind::one_bit) {
            std::cout << "n/a\n";
            continue;
        }
        std::cout << ojzj::theoretical_bound(cfg.problem.n, cfg.problem.k, cfg.population_size,
                                             cfg.selection, cfg.mutation, cfg.beta)
                  << '\n';
    }
    return 0;
}

void write_trace_file(const std::string& path, const ojzj::ExperimentResult& result) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t g = 0; g < result.traces.size(); ++g)
        for (std::size_t rep = 0; rep < result.traces[g].size(); ++rep)
            for (const ojzj::GenerationTrace& t : result.traces[g][rep])
                os << "grid=" << g << " rep=" << rep << " gen=" << t.generation
                   << " evals=" << t.evaluations << " stage=" << to_string(t.stage)
                   << " coverage=" << t.coverage << " outer=" << t.outer_coverage
                   << " extremal=" << (t.has_extremal_genome ? 1 : 0) << '\n';
    if (!os)
        throw std::runtime_error("failed while writing output file: " + path);
}

} // namespace

int main(int argc, char** argv) {
    CliOptions opt;
    CLI::App app{"NSGA-II / GSEMO runtime experiments on the OneJumpZeroJump benchmark"};
    app.add_option("--config", opt.config_path, "JSON config file; flags override its values");
    app.add_option("--algorithm", opt.algorithm, "nsga2 or gsemo")
        ->check(CLI::IsMember({"nsga2", "gsemo"}));
    app.add_option("--n", opt.n, "problem size");
    app.add_option("--k", opt.k, "jump size (1 <= k <= n/4)");
    app.add_option("--pop-size", opt.pop_sizes, "explicit population sizes (grid sweep)");
    app.add_option("--pop-mult", opt.pop_mults,
                   "population sizes as multiples of the front size n-2k+3");
    app.add_option("--selection", opt.selection, "parent selection scheme")
        ->transform(CLI::CheckedTransformer(selection_names, CLI::ignore_case));
    app.add_option("--mutation", opt.mutation, "mutation operator")
        ->transform(CLI::CheckedTransformer(mutation_names, CLI::ignore_case));
    app.add_option("--beta", opt.beta, "heavy-tailed exponent (> 1)");
    app.add_option("--crossover-prob", opt.crossover_prob,
                   "probability of uniform crossover per offspring pair (0 disables)");
    app.add_option("--reps", opt.reps, "independent repetitions per grid point");
    app.add_option("--seed", opt.seed, "master seed; run seeds derive from it");
    app.add_option("--max-evals", opt.max_evals, "evaluation cap per run (0 = generous default)");
    app.add_option("--out", opt.out_prefix, "output prefix for <prefix>_runs.csv and <prefix>_summary.csv");
    app.add_option("--trace", opt.trace_path, "write per-generation trace lines to this file");
    app.add_flag("--assert-lemma1", opt.assert_lemma1,
                 "count per-generation rank-1 value losses (expected 0 for N >= 4(n-2k+3))");
    app.add_flag("--init-inner", opt.init_inner,
                 "resample initial individuals until they lie in the inner Pareto set");
    app.add_option("--threads", opt.threads, "worker threads (0 = hardware concurrency)");
    app.add_flag("--bound-only", opt.bound_only,
                 "print the theoretical runtime bound per grid point and exit");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!opt.config_path.empty()) {
            std::ifstream is(opt.config_path);
            if (!is)
                throw std::runtime_error("cannot open config file: " + opt.config_path);
            json file = json::parse(is);
            apply_config_file(file, app, opt);
        }
        const ojzj::ExperimentSpec spec = build_spec(opt);
        if (opt.bound_only)
            return print_bounds(spec);

        const ojzj::ExperimentResult result = ojzj::run_experiment(spec);
        for (const std::string& w : result.warnings)
            std::cerr << "warning: " << w << '\n';
        ojzj::write_outputs(spec, result);
        if (!opt.trace_path.empty())
            write_trace_file(opt.trace_path, result);
        std::cout << ojzj::render_summary_table(result);
        return 0;
    } catch (const std::invalid_argument& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 1;
    } catch (const json::exception& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
