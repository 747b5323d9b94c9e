// ncps: solve, benchmark and analyze smoothing methods for nonlinear
// complementarity problems.
//
// Exit codes: 0 all converged / property holds, 1 failure or violation,
// 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ncps/bench.hpp"

namespace {

constexpr int kUsageError = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smoothing continuation solver for nonlinear complementarity problems"};
    app.require_subcommand(1);

    std::vector<std::string> problems;
    std::vector<std::string> thetas;
    int n = 0;
    std::uint64_t seed = 1;
    int starts = 11;
    double tol = 1e-8;
    std::string format = "md";
    std::string out_path;
    bool verbose = false;

    auto* solve = app.add_subcommand("solve", "Solve one problem from the all-ones start");
    solve->add_option("--problem", problems, "Problem selector")->required()->expected(1);
    solve->add_option("--theta", thetas, "Kernel selector (rational, exp, phi:<lambda>[:<c>])");
    solve->add_option("--n", n, "Dimension for scalable problems");
    solve->add_option("--tol", tol, "Stopping tolerance on Res");
    solve->add_option("--out", out_path, "Write JSON report to this file");

    auto* bench = app.add_subcommand("bench", "Run the benchmark protocol");
    bench->add_option("--problem", problems, "Problem selectors (default suite when omitted)");
    bench->add_option("--theta", thetas, "Kernel selectors (default: rational exp)");
    bench->add_option("--seed", seed, "Seed for random starts");
    bench->add_option("--starts", starts, "Starting points per problem")->check(CLI::PositiveNumber);
    bench->add_option("--tol", tol, "Stopping tolerance on Res");
    bench->add_option("--format", format, "md, csv or json")->check(CLI::IsMember({"md", "csv", "json"}));
    bench->add_option("--out", out_path, "Output file (stdout when omitted)");
    bench->add_flag("--verbose", verbose, "Per-start detail");

    std::vector<double> x0;
    auto* trace = app.add_subcommand("trace", "Write the iterate history as CSV");
    trace->add_option("--problem", problems, "Problem selector")->required()->expected(1);
    trace->add_option("--theta", thetas, "Kernel selectors (default: rational exp)");
    trace->add_option("--x0", x0, "Starting point (default: all ones)");
    trace->add_option("--tol", tol, "Stopping tolerance on Res");
    trace->add_option("--out", out_path, "Output CSV path")->required();

    ncps::AnalyzeArgs aargs;
    std::string check_name;
    auto* analyze = app.add_subcommand("analyze", "Numerically check a kernel property");
    analyze->add_option("--theta", aargs.kernel, "Kernel selector");
    analyze->add_option("--check", check_name, "ha, limits, subadd_v, concavity or speed")->required();
    analyze->add_option("--lo", aargs.lo, "Grid lower bound");
    analyze->add_option("--hi", aargs.hi, "Grid upper bound");
    analyze->add_option("--per-decade", aargs.per_decade, "Grid density");
    analyze->add_option("--a", aargs.a, "Parameter a of the Ha condition");
    analyze->add_option("--smax", aargs.s_max, "Upper end of the Ha scan");
    analyze->add_option("--s", aargs.s, "s for the speed check");
    analyze->add_option("--t", aargs.t, "t for the speed check");
    analyze->add_option("--r0", aargs.r0, "r0 for the speed check");
    analyze->add_option("--out", out_path, "Write JSON report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    ncps::SolverConfig cfg;
    cfg.outer_tol = tol;

    try {
        if (*solve) {
            auto spec = ncps::parse_problem(problems.front());
            if (n > 0) spec.n = n;
            const auto problem = ncps::make_problem(spec);
            if (thetas.empty()) thetas = {"exp"};
            nlohmann::json doc = nlohmann::json::array();
            bool ok = true;
            for (const auto& sel : thetas) {
                const auto kernel = ncps::parse_kernel(sel);
                const auto rep = ncps::continuation_solve(problem, kernel, ncps::Vector::Ones(problem.n), cfg);
                ok = ok && rep.status == ncps::SolveStatus::converged;
                doc.push_back({{"problem", ncps::selector(spec)},
                               {"kernel", kernel.name()},
                               {"status", ncps::to_string(rep.status)},
                               {"OutIter", rep.out_iter},
                               {"InIter", rep.in_iter},
                               {"Res", rep.res},
                               {"Feas", rep.feas},
                               {"x", std::vector<double>(rep.x_final.data(), rep.x_final.data() + rep.x_final.size())},
                               {"message", rep.message}});
            }
            emit(doc.dump(2) + "\n", out_path);
            return ok ? 0 : 1;
        }
        if (*bench) {
            ncps::BenchRun run;
            if (problems.empty()) {
                run.problems = ncps::default_suite();
            } else {
                for (const auto& p : problems) run.problems.push_back(ncps::parse_problem(p));
            }
            if (!thetas.empty()) run.kernels = thetas;
            run.starts_per_problem = starts;
            run.rng_seed = seed;
            run.output_format = ncps::parse_format(format);
            run.config = cfg;
            const auto table = ncps::run_bench(run);
            emit(ncps::format_table(table, run.output_format, verbose), out_path);
            return table.all_converged() ? 0 : 1;
        }
        if (*trace) {
            const auto spec = ncps::parse_problem(problems.front());
            const auto problem = ncps::make_problem(spec);
            ncps::Vector start = ncps::Vector::Ones(problem.n);
            if (!x0.empty()) {
                if (static_cast<int>(x0.size()) != problem.n) {
                    std::cerr << "--x0 must have " << problem.n << " entries\n";
                    return kUsageError;
                }
                start = Eigen::Map<const ncps::Vector>(x0.data(), problem.n);
            }
            if (thetas.empty()) thetas = {"rational", "exp"};
            ncps::run_trace(spec, thetas, start, out_path, cfg);
            return 0;
        }
        if (*analyze) {
            try {
                aargs.check = ncps::parse_check(check_name);
            } catch (const std::invalid_argument& e) {
                std::cerr << e.what() << "\n";
                return kUsageError;
            }
            const auto report = ncps::run_analyze(aargs);
            emit(ncps::to_json(report).dump(2) + "\n", out_path);
            return report.holds() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsageError;
}
