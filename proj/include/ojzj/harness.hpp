#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <ojzj/algorithms.hpp>
#include <ojzj/random.hpp>

namespace ojzj {

/// A full experiment: one base configuration swept over population sizes,
/// each grid point repeated with independently seeded runs.
///
/// The NSGA-II grid is either the explicit `population_sizes` list or, when
/// that is empty, `population_multipliers` scaled by the front size
/// (N = m * (n - 2k + 3)); when both are empty the base config's population
/// size is the single grid point. GSEMO has no population, so its grid is
/// always a single point.
struct ExperimentSpec {
    AlgorithmConfig base;
    std::vector<std::size_t> population_multipliers;
    std::vector<std::size_t> population_sizes;
    std::size_t repetitions = 50;
    std::uint64_t master_seed = 1;
    std::string runs_csv_path;    // empty: no per-run CSV file
    std::string summary_csv_path; // empty: no summary CSV file
    unsigned threads = 0;         // 0: hardware concurrency
    bool capture_traces = false;  // keep per-generation traces in memory
};

inline std::vector<AlgorithmConfig> build_grid(const ExperimentSpec& spec) {
    std::vector<AlgorithmConfig> grid;
    if (spec.repetitions < 1)
        throw std::invalid_argument("experiment: repetitions must be >= 1");
    if (spec.base.algorithm == Algorithm::gsemo) {
        grid.push_back(spec.base);
    } else {
        std::vector<std::size_t> sizes = spec.population_sizes;
        if (sizes.empty()) {
            for (std::size_t m : spec.population_multipliers) {
                if (m == 0)
                    throw std::invalid_argument("experiment: population multipliers must be positive");
                sizes.push_back(m * static_cast<std::size_t>(spec.base.problem.front_size()));
            }
        }
        if (sizes.empty())
            sizes.push_back(spec.base.population_size);
        for (std::size_t n : sizes) {
            AlgorithmConfig cfg = spec.base;
            cfg.population_size = n;
            grid.push_back(std::move(cfg));
        }
    }
    for (const AlgorithmConfig& cfg : grid)
        validate(cfg); // reject every bad grid point before any run starts
    return grid;
}

/// Statistics over the covered runs of one grid point. The mean and the
/// corrected sample standard deviation (denominator r - 1) cover only the
/// runs that reached full coverage; did-not-finish runs are counted
/// separately. A single covered run has no standard deviation.
struct SummaryStats {
    std::size_t covered_runs = 0;
    std::size_t dnf = 0;
    std::optional<double> mean;
    std::optional<double> stddev;
    std::optional<std::uint64_t> min;
    std::optional<std::uint64_t> max;
};

inline SummaryStats summarize(std::span<const RunRecord> records) {
    if (records.empty())
        throw std::invalid_argument("summarize: no records");
    SummaryStats s;
    double sum = 0.0;
    for (const RunRecord& r : records) {
        if (!r.covered) {
            ++s.dnf;
            continue;
        }
        const std::uint64_t e = *r.evaluations_to_cover;
        ++s.covered_runs;
        sum += static_cast<double>(e);
        s.min = s.min ? std::min(*s.min, e) : e;
        s.max = s.max ? std::max(*s.max, e) : e;
    }
    if (s.covered_runs == 0)
        return s;
    s.mean = sum / static_cast<double>(s.covered_runs);
    if (s.covered_runs >= 2) {
        double squares = 0.0;
        for (const RunRecord& r : records) {
            if (!r.covered)
                continue;
            const double d = static_cast<double>(*r.evaluations_to_cover) - *s.mean;
            squares += d * d;
        }
        s.stddev = std::sqrt(squares / static_cast<double>(s.covered_runs - 1));
    }
    return s;
}

/// Leading term of the expected-runtime guarantee (the (1+o(1)) factor is
/// dropped): K * N * n^k for bit-wise mutation, and
/// K * N * binom(n,k) / P_k for heavy-tailed mutation, where P_k is the exact
/// probability that one heavy-tailed application flips a Hamming distance of
/// exactly k. K depends on the selection scheme. One-bit mutation cannot
/// cover the front, so it has no bound.
inline double theoretical_bound(int n, int k, std::size_t population_size, SelectionScheme selection,
                                MutationKind mutation, double beta = 1.5) {
    validate_problem(OjzjProblem{n, k});
    const double e = std::exp(1.0);
    double coefficient = 0.0;
    switch (mutation) {
    case MutationKind::one_bit:
        throw std::invalid_argument("theoretical_bound: one-bit mutation has no finite bound");
    case MutationKind::bitwise:
        switch (selection) {
        case SelectionScheme::fair: coefficient = 2.0 * e; break;
        case SelectionScheme::uniform:
        case SelectionScheme::independent_tournaments:
            coefficient = 2.0 * e * e / (e - 1.0);
            break;
        case SelectionScheme::two_permutation_tournaments: coefficient = 8.0 * e / 3.0; break;
        }
        return coefficient * static_cast<double>(population_size) *
               std::pow(static_cast<double>(n), k);
    case MutationKind::heavy_tailed: {
        switch (selection) {
        case SelectionScheme::fair: coefficient = 2.0; break;
        case SelectionScheme::uniform:
        case SelectionScheme::independent_tournaments:
            coefficient = 2.0 * e / (e - 1.0);
            break;
        case SelectionScheme::two_permutation_tournaments: coefficient = 8.0 / 3.0; break;
        }
        const HeavyTailedDistribution dist(n, beta);
        return coefficient * static_cast<double>(population_size) *
               HeavyTailedDistribution::binomial_coefficient(n, k) / dist.step_probability(k);
    }
    }
    throw std::invalid_argument("theoretical_bound: unknown mutation kind");
}

struct SummaryRow {
    AlgorithmConfig config;
    std::size_t repetitions = 0;
    SummaryStats stats;
    std::optional<double> bound; // emitted when the runtime guarantee applies
};

struct ExperimentResult {
    std::vector<AlgorithmConfig> grid;
    std::vector<std::vector<RunRecord>> records; // [grid][repetition]
    std::vector<std::vector<std::vector<GenerationTrace>>> traces; // when captured
    std::vector<SummaryRow> summary;
    std::vector<std::string> warnings;
};

/// Runs the whole grid. Seeds derive from (master_seed, grid index,
/// repetition), so results are independent of the number of worker threads
/// and reproduce exactly.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.grid = build_grid(spec);
    for (const AlgorithmConfig& cfg : result.grid)
        for (const std::string& w : validate(cfg))
            result.warnings.push_back(w);
    if (!result.warnings.empty()) {
        std::sort(result.warnings.begin(), result.warnings.end());
        result.warnings.erase(std::unique(result.warnings.begin(), result.warnings.end()),
                              result.warnings.end());
    }

    const std::size_t grid_count = result.grid.size();
    result.records.assign(grid_count, std::vector<RunRecord>(spec.repetitions));
    if (spec.capture_traces)
        result.traces.assign(grid_count,
                             std::vector<std::vector<GenerationTrace>>(spec.repetitions));

    const std::size_t jobs = grid_count * spec.repetitions;
    auto run_job = [&](std::size_t job) {
        const std::size_t grid_id = job / spec.repetitions;
        const std::size_t rep = job % spec.repetitions;
        AlgorithmConfig cfg = result.grid[grid_id];
        if (spec.capture_traces) {
            auto& sink = result.traces[grid_id][rep];
            cfg.trace = [&sink](const GenerationTrace& t) { sink.push_back(t); };
        }
        RandomSource rng(derive_seed(spec.master_seed, grid_id, rep));
        result.records[grid_id][rep] = run(cfg, rng);
    };

    unsigned threads = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
    if (threads <= 1) {
        for (std::size_t job = 0; job < jobs; ++job)
            run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t job = next.fetch_add(1); job < jobs; job = next.fetch_add(1))
                    run_job(job);
            });
        for (std::thread& t : pool)
            t.join();
    }

    result.summary.reserve(grid_count);
    for (std::size_t g = 0; g < grid_count; ++g) {
        SummaryRow row;
        row.config = result.grid[g];
        row.repetitions = spec.repetitions;
        row.stats = summarize(result.records[g]);
        const AlgorithmConfig& cfg = result.grid[g];
        // The guarantee needs NSGA-II, a mutation operator that can jump, and
        // a population of at least four times the front size.
        if (cfg.algorithm == Algorithm::nsga2 && cfg.mutation != MutationKind::one_bit &&
            cfg.population_size >= 4 * static_cast<std::size_t>(cfg.problem.front_size()))
            row.bound = theoretical_bound(cfg.problem.n, cfg.problem.k, cfg.population_size,
                                          cfg.selection, cfg.mutation, cfg.beta);
        result.summary.push_back(std::move(row));
    }
    return result;
}

namespace detail {

inline std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

inline std::string format_param(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

template <typename T>
std::string opt_to_string(const std::optional<T>& v) {
    if (!v)
        return "";
    if constexpr (std::is_same_v<T, double>)
        return format_double(*v);
    else
        return std::to_string(*v);
}

} // namespace detail

/// Per-run CSV, one row per (grid point, repetition), in that order. The
/// `evaluations` column holds the runtime of covered runs and the consumed
/// budget of DNF runs (`covered` distinguishes the two). Fields that do not
/// apply (N for GSEMO, beta without heavy-tailed mutation, stage ends never
/// reached) are empty.
inline void write_runs_csv(std::ostream& os, const ExperimentResult& result) {
    os << "grid_id,algorithm,n,k,N,selection,mutation,beta,crossover_prob,"
          "repetition,seed,covered,evaluations,stage1_end,stage2_end,stage3_end,generations\n";
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        const AlgorithmConfig& cfg = result.grid[g];
        for (std::size_t rep = 0; rep < result.records[g].size(); ++rep) {
            const RunRecord& r = result.records[g][rep];
            os << g << ',' << to_string(cfg.algorithm) << ',' << cfg.problem.n << ','
               << cfg.problem.k << ',';
            if (cfg.algorithm == Algorithm::nsga2)
                os << cfg.population_size;
            os << ',' << to_string(cfg.selection) << ',' << to_string(cfg.mutation) << ',';
            if (cfg.mutation == MutationKind::heavy_tailed)
                os << detail::format_param(cfg.beta);
            os << ',' << detail::format_param(cfg.crossover_probability) << ',' << rep << ','
               << r.seed << ',' << (r.covered ? 1 : 0) << ','
               << (r.covered ? *r.evaluations_to_cover : r.evaluations_total) << ','
               << detail::opt_to_string(r.stage1_end_evals) << ','
               << detail::opt_to_string(r.stage2_end_evals) << ','
               << detail::opt_to_string(r.stage3_end_evals) << ',' << r.generations << '\n';
        }
    }
}

inline void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
    os << "grid_id,algorithm,n,k,N,selection,mutation,beta,crossover_prob,repetitions,"
          "covered_runs,dnf,mean_evaluations,stddev_evaluations,min_evaluations,"
          "max_evaluations,theoretical_bound\n";
    for (std::size_t g = 0; g < result.summary.size(); ++g) {
        const SummaryRow& row = result.summary[g];
        const AlgorithmConfig& cfg = row.config;
        os << g << ',' << to_string(cfg.algorithm) << ',' << cfg.problem.n << ',' << cfg.problem.k
           << ',';
        if (cfg.algorithm == Algorithm::nsga2)
            os << cfg.population_size;
        os << ',' << to_string(cfg.selection) << ',' << to_string(cfg.mutation) << ',';
        if (cfg.mutation == MutationKind::heavy_tailed)
            os << detail::format_param(cfg.beta);
        os << ',' << detail::format_param(cfg.crossover_probability) << ',' << row.repetitions
           << ',' << row.stats.covered_runs << ',' << row.stats.dnf << ','
           << detail::opt_to_string(row.stats.mean) << ',' << detail::opt_to_string(row.stats.stddev)
           << ',' << detail::opt_to_string(row.stats.min) << ','
           << detail::opt_to_string(row.stats.max) << ',' << detail::opt_to_string(row.bound)
           << '\n';
    }
}

/// Aligned plain-text summary, one row per grid point.
inline std::string render_summary_table(const ExperimentResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"algorithm", "n", "k", "N", "selection", "mutation", "pc", "reps", "dnf",
                    "mean", "std", "min", "max", "bound"});
    for (const SummaryRow& row : result.summary) {
        const AlgorithmConfig& cfg = row.config;
        std::string mutation = to_string(cfg.mutation);
        if (cfg.mutation == MutationKind::heavy_tailed)
            mutation += "(b=" + detail::format_param(cfg.beta) + ")";
        rows.push_back({to_string(cfg.algorithm), std::to_string(cfg.problem.n),
                        std::to_string(cfg.problem.k),
                        cfg.algorithm == Algorithm::nsga2 ? std::to_string(cfg.population_size) : "-",
                        to_string(cfg.selection), mutation,
                        detail::format_param(cfg.crossover_probability),
                        std::to_string(row.repetitions), std::to_string(row.stats.dnf),
                        detail::opt_to_string(row.stats.mean),
                        detail::opt_to_string(row.stats.stddev), detail::opt_to_string(row.stats.min),
                        detail::opt_to_string(row.stats.max), detail::opt_to_string(row.bound)});
    }
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << row[c] << std::string(width[c] - row[c].size(), ' ');
            os << (c + 1 < row.size() ? "  " : "");
        }
        os << '\n';
    }
    return os.str();
}

/// Writes the CSV files named in the spec (skipping empty paths). Throws
/// std::runtime_error naming the offending path on failure.
inline void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
    auto write_file = [](const std::string& path, auto&& writer) {
        if (path.empty())
            return;
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open output file: " + path);
        writer(os);
        os.flush();
        if (!os)
            throw std::runtime_error("failed while writing output file: " + path);
    };
    write_file(spec.runs_csv_path, [&](std::ostream& os) { write_runs_csv(os, result); });
    write_file(spec.summary_csv_path, [&](std::ostream& os) { write_summary_csv(os, result); });
}

} // namespace ojzj
