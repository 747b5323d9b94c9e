#ifndef NCPS_BENCH_HPP
#define NCPS_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ncps/analysis.hpp"
#include "ncps/problems.hpp"
#include "ncps/solver.hpp"

namespace ncps {

/// The all-ones vector followed by count - 1 vectors uniform in (0, 20),
/// coordinate (k, j) keyed by (seed, k, j).
std::vector<Vector> generate_starts(int n, int count, std::uint64_t seed);

enum class OutputFormat { markdown, csv, json };

/// "md", "csv" or "json".
OutputFormat parse_format(std::string_view text);

struct BenchRun {
    std::vector<ProblemSpec> problems;
    std::vector<std::string> kernels{"rational", "exp"};
    int starts_per_problem = 11;
    std::uint64_t rng_seed = 1;
    OutputFormat output_format = OutputFormat::markdown;
    SolverConfig config;
};

/// analytic2d, ks, monotone:10, monotone:100, hphard:20, nash5.
std::vector<ProblemSpec> default_suite();

struct StartResult {
    int start_index = 0;
    SolveReport report;
    /// Index of the closest known solution and the distance to it (-1 when the
    /// problem lists none).
    int nearest_known = -1;
    double nearest_distance = 0.0;
    /// Trace points of a converged run where x_i F_i > r^2 + 1e-8
    /// (only counted for kernels dominating the rational one).
    int bound_violations = 0;
};

/// Worst result per (problem, kernel) over all starts.
struct BenchRow {
    std::string problem;
    int n = 0;
    std::string kernel;
    int out_iter = 0;
    int in_iter = 0;
    double res = 0.0;   ///< max over converged runs, NaN if none converged
    double feas = 0.0;
    int converged = 0;
    int starts = 0;
    double cpu_s = 0.0;
    std::vector<StartResult> runs;
};

struct BenchTable {
    std::vector<BenchRow> rows;
    bool all_converged() const;
};

BenchTable run_bench(const BenchRun& run);

/// Rendered table. With `verbose`, per-start rows follow the summary.
std::string format_table(const BenchTable& table, OutputFormat format, bool verbose = false);

/// Solves from x0 with each kernel and writes the iterate history as CSV:
/// kernel, outer_index, r, x_1..x_n, F_1..F_n, res, feas.
void write_trace(std::ostream& os, const NcpProblem& problem,
                 const std::vector<std::string>& kernels, const Vector& x0,
                 const SolverConfig& config = {});

/// write_trace into a file. Throws std::runtime_error when the file cannot be written.
void run_trace(const ProblemSpec& spec, const std::vector<std::string>& kernels, const Vector& x0,
               const std::string& path, const SolverConfig& config = {});

enum class AnalyzeCheck { ha, limits, subadd_v, concavity, speed };

/// Throws std::invalid_argument for an unknown name.
AnalyzeCheck parse_check(std::string_view name);

struct AnalyzeArgs {
    std::string kernel = "exp";
    AnalyzeCheck check = AnalyzeCheck::concavity;
    double lo = 0.1;
    double hi = 10.0;
    int per_decade = 64;
    double a = 0.25;       ///< ha
    double s_max = 100.0;  ///< ha
    double s = 1.0;        ///< speed
    double t = 2.0;        ///< speed
    double r0 = 0.5;       ///< speed
};

AnalysisReport run_analyze(const AnalyzeArgs& args);

nlohmann::json to_json(const AnalysisReport& report);

}  // namespace ncps

#endif  // NCPS_BENCH_HPP
