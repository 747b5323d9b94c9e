#include "ncps/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ncps/rng.hpp"

namespace ncps {

namespace {

std::string sci(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& header_notes() {
    static const std::vector<std::string> notes = {
        "rows report the worst result per (problem, kernel) over all starts: max OutIter, "
        "max InIter, max Res over converged runs, max Feas",
        "InIter counts Jacobian evaluations; OutIter counts smoothing parameters used",
        "monotone:<n> is a documented scalable stand-in: F(x) = tridiag(-1,4,-1) x + atan(x) - 1",
        "hphard:<n>:<seed> is a seeded random instance of M = A'A + B + D with B skew-symmetric",
        "nash5/nash10 use the fixed Cournot parameter set c=(10,8,6,4,2), L=10, "
        "beta=(1.2,1.1,1.0,0.9,0.8), gamma=1.1",
        "ks carries a non-degenerate and a degenerate known solution; see --verbose for "
        "which one each start reaches",
        "cpu_s is wall-clock seconds and is not normative",
    };
    return notes;
}

}  // namespace

std::vector<Vector> generate_starts(int n, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("generate_starts: count must be at least 1");
    std::vector<Vector> starts;
    starts.push_back(Vector::Ones(n));
    for (int k = 1; k < count; ++k) {
        Vector v(n);
        for (int j = 0; j < n; ++j) {
            v[j] = uniform(0.0, 20.0, seed, static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(j));
        }
        starts.push_back(std::move(v));
    }
    return starts;
}

OutputFormat parse_format(std::string_view text) {
    if (text == "md" || text == "markdown") return OutputFormat::markdown;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

std::vector<ProblemSpec> default_suite() {
    return {parse_problem("analytic2d"), parse_problem("ks"),        parse_problem("monotone:10"),
            parse_problem("monotone:100"), parse_problem("hphard:20"), parse_problem("nash5")};
}

bool BenchTable::all_converged() const {
    for (const auto& row : rows)
        if (row.converged != row.starts) return false;
    return true;
}

BenchTable run_bench(const BenchRun& run) {
    if (run.starts_per_problem < 1) throw std::invalid_argument("run_bench: starts must be >= 1");
    std::vector<SmoothingKernel> kernels;
    for (const auto& sel : run.kernels) kernels.push_back(parse_kernel(sel));

    BenchTable table;
    for (const auto& spec : run.problems) {
        const NcpProblem problem = make_problem(spec);
        const auto starts = generate_starts(problem.n, run.starts_per_problem, run.rng_seed);
        for (const auto& kernel : kernels) {
            BenchRow row;
            row.problem = selector(spec);
            row.n = problem.n;
            row.kernel = kernel.name();
            row.starts = static_cast<int>(starts.size());
            row.res = std::numeric_limits<double>::quiet_NaN();
            for (std::size_t k = 0; k < starts.size(); ++k) {
                StartResult sr;
                sr.start_index = static_cast<int>(k);
                sr.report = continuation_solve(problem, kernel, starts[k], run.config);
                const auto& rep = sr.report;
                row.cpu_s += rep.wall_time;
                row.out_iter = std::max(row.out_iter, rep.out_iter);
                row.in_iter = std::max(row.in_iter, rep.in_iter);
                if (!std::isnan(rep.feas)) row.feas = std::max(row.feas, rep.feas);
                if (rep.status == SolveStatus::converged) {
                    ++row.converged;
                    row.res = std::isnan(row.res) ? rep.res : std::max(row.res, rep.res);
                    if (kernel.dominates_rational()) {
                        for (const auto& tp : rep.trace) {
                            if (!tp.inner_converged) continue;
                            const double bound = tp.r * tp.r + 1e-8;
                            if ((tp.x.array() * tp.Fx.array()).maxCoeff() > bound) ++sr.bound_violations;
                        }
                    }
                }
                for (std::size_t j = 0; j < problem.known_solutions.size(); ++j) {
                    const double d = (rep.x_final - problem.known_solutions[j]).norm();
                    if (sr.nearest_known < 0 || d < sr.nearest_distance) {
                        sr.nearest_known = static_cast<int>(j);
                        sr.nearest_distance = d;
                    }
                }
                row.runs.push_back(std::move(sr));
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::string format_table(const BenchTable& table, OutputFormat format, bool verbose) {
    std::ostringstream os;
    const char* cols[] = {"problem", "n", "kernel", "OutIter", "InIter", "Res", "Feas", "converged", "cpu_s"};
    auto conv = [](const BenchRow& r) { return std::to_string(r.converged) + "/" + std::to_string(r.starts); };

    switch (format) {
        case OutputFormat::markdown: {
            for (const auto& note : header_notes()) os << "<!-- " << note << " -->\n";
            os << "|";
            for (const char* c : cols) os << " " << c << " |";
            os << "\n|";
            for (std::size_t i = 0; i < std::size(cols); ++i) os << "---|";
            os << "\n";
            for (const auto& r : table.rows) {
                os << "| " << r.problem << " | " << r.n << " | " << r.kernel << " | " << r.out_iter
                   << " | " << r.in_iter << " | " << sci(r.res) << " | " << sci(r.feas) << " | "
                   << conv(r) << " | " << fixed3(r.cpu_s) << " |\n";
            }
            if (verbose) {
                os << "\n| problem | kernel | start | status | OutIter | InIter | Res | Feas | "
                      "nearest_known | distance |\n|---|---|---|---|---|---|---|---|---|---|\n";
                for (const auto& r : table.rows) {
                    for (const auto& s : r.runs) {
                        os << "| " << r.problem << " | " << r.kernel << " | " << s.start_index << " | "
                           << to_string(s.report.status) << " | " << s.report.out_iter << " | "
                           << s.report.in_iter << " | " << sci(s.report.res) << " | "
                           << sci(s.report.feas) << " | "
                           << (s.nearest_known < 0 ? std::string("-") : std::to_string(s.nearest_known))
                           << " | " << (s.nearest_known < 0 ? std::string("-") : sci(s.nearest_distance))
                           << " |\n";
                    }
                }
            }
            break;
        }
        case OutputFormat::csv: {
            for (const auto& note : header_notes()) os << "# " << note << "\n";
            for (std::size_t i = 0; i < std::size(cols); ++i) os << (i ? "," : "") << cols[i];
            os << "\n";
            for (const auto& r : table.rows) {
                os << r.problem << "," << r.n << "," << r.kernel << "," << r.out_iter << ","
                   << r.in_iter << "," << sci(r.res) << "," << sci(r.feas) << "," << conv(r) << ","
                   << fixed3(r.cpu_s) << "\n";
            }
            if (verbose) {
                os << "\nproblem,kernel,start,status,OutIter,InIter,Res,Feas,nearest_known,distance\n";
                for (const auto& r : table.rows) {
                    for (const auto& s : r.runs) {
                        os << r.problem << "," << r.kernel << "," << s.start_index << ","
                           << to_string(s.report.status) << "," << s.report.out_iter << ","
                           << s.report.in_iter << "," << sci(s.report.res) << ","
                           << sci(s.report.feas) << "," << s.nearest_known << ","
                           << (s.nearest_known < 0 ? std::string("-") : sci(s.nearest_distance)) << "\n";
                    }
                }
            }
            break;
        }
        case OutputFormat::json: {
            nlohmann::json doc;
            doc["notes"] = header_notes();
            doc["rows"] = nlohmann::json::array();
            for (const auto& r : table.rows) {
                nlohmann::json row = {{"problem", r.problem},   {"n", r.n},
                                      {"kernel", r.kernel},     {"OutIter", r.out_iter},
                                      {"InIter", r.in_iter},    {"Res", r.res},
                                      {"Feas", r.feas},         {"converged", conv(r)},
                                      {"cpu_s", r.cpu_s}};
                if (verbose) {
                    row["runs"] = nlohmann::json::array();
                    for (const auto& s : r.runs) {
                        row["runs"].push_back({{"start", s.start_index},
                                               {"status", to_string(s.report.status)},
                                               {"OutIter", s.report.out_iter},
                                               {"InIter", s.report.in_iter},
                                               {"Res", s.report.res},
                                               {"Feas", s.report.feas},
                                               {"nearest_known", s.nearest_known},
                                               {"distance", s.nearest_distance}});
                    }
                }
                doc["rows"].push_back(std::move(row));
            }
            os << doc.dump(2) << "\n";
            break;
        }
    }
    return os.str();
}

void write_trace(std::ostream& os, const NcpProblem& problem,
                 const std::vector<std::string>& kernels, const Vector& x0,
                 const SolverConfig& config) {
    os << "kernel,outer_index,r";
    for (int i = 1; i <= problem.n; ++i) os << ",x_" << i;
    for (int i = 1; i <= problem.n; ++i) os << ",F_" << i;
    os << ",res,feas\n";
    for (const auto& sel : kernels) {
        const auto kernel = parse_kernel(sel);
        const auto report = continuation_solve(problem, kernel, x0, config);
        for (const auto& tp : report.trace) {
            os << kernel.name() << "," << tp.outer_index << "," << full(tp.r);
            for (Eigen::Index i = 0; i < tp.x.size(); ++i) os << "," << full(tp.x[i]);
            for (Eigen::Index i = 0; i < tp.Fx.size(); ++i) os << "," << full(tp.Fx[i]);
            os << "," << full(tp.res) << "," << full(tp.feas) << "\n";
        }
    }
}

void run_trace(const ProblemSpec& spec, const std::vector<std::string>& kernels, const Vector& x0,
               const std::string& path, const SolverConfig& config) {
    const auto problem = make_problem(spec);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trace(out, problem, kernels, x0, config);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

AnalyzeCheck parse_check(std::string_view name) {
    if (name == "ha") return AnalyzeCheck::ha;
    if (name == "limits") return AnalyzeCheck::limits;
    if (name == "subadd_v") return AnalyzeCheck::subadd_v;
    if (name == "concavity") return AnalyzeCheck::concavity;
    if (name == "speed") return AnalyzeCheck::speed;
    throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

AnalysisReport run_analyze(const AnalyzeArgs& args) {
    const auto kernel = parse_kernel(args.kernel);
    switch (args.check) {
        case AnalyzeCheck::ha: {
            const auto ha = check_Ha(kernel, args.a, args.s_max);
            AnalysisReport rep;
            std::ostringstream prop;
            prop << "Ha(" << kernel.name() << ", a=" << args.a << ")";
            rep.property = prop.str();
            std::ostringstream grid;
            grid << "log [" << args.s_max * 1e-6 << ", " << args.s_max << "], 64 per decade";
            rep.checked = 6 * 64 + 1;
            if (ha.holds) {
                grid << "; holds from s = " << *ha.holds_from;
            } else {
                rep.outcome = Outcome::violated;
                const double s = *ha.violated_at;
                rep.witness = Witness{{s}, {kernel.psi(s), 0.5 * kernel.psi(args.a * s)},
                                      "psi(s) > psi(a s)/2 in the last decade of the grid"};
                rep.max_defect = kernel.psi(s) - 0.5 * kernel.psi(args.a * s);
            }
            rep.grid = grid.str();
            return rep;
        }
        case AnalyzeCheck::limits: {
            AnalysisReport rep;
            rep.property = "limit-dichotomy(" + kernel.name() + ")";
            rep.grid = "(s, t) in {-2, ..., 5}^2, r down to 1e-8";
            for (int s = -2; s <= 5; ++s) {
                for (int t = -2; t <= 5; ++t) {
                    const auto est = limit_probe(kernel, s, t);
                    ++rep.checked;
                    const bool expected_zero = std::min(s, t) == 0;
                    if (est.limit_is_zero != expected_zero && !rep.witness) {
                        rep.outcome = Outcome::violated;
                        rep.witness = Witness{{double(s), double(t)}, {est.limit},
                                              "limit classification disagrees with min(s, t) = 0"};
                    }
                }
            }
            return rep;
        }
        case AnalyzeCheck::subadd_v:
            return check_subadditivity([&](double y) { return v_function(kernel, y); },
                                       log_grid(args.lo, args.hi, args.per_decade),
                                       "V[" + kernel.name() + "]");
        case AnalyzeCheck::concavity:
            return check_concavity(kernel, log_grid(args.lo, args.hi, args.per_decade));
        case AnalyzeCheck::speed: {
            std::vector<double> rs = log_grid_count(args.r0 * 1e-4, args.r0, 41).points;
            return check_speed_bound(kernel, args.s, args.t, args.r0, rs);
        }
    }
    throw std::invalid_argument("unknown check");
}

nlohmann::json to_json(const AnalysisReport& report) {
    nlohmann::json j = {{"property", report.property},
                        {"grid", report.grid},
                        {"outcome", to_string(report.outcome)},
                        {"max_defect", report.max_defect},
                        {"checked", report.checked}};
    if (report.witness) {
        j["witness"] = {{"point", report.witness->point},
                        {"values", report.witness->values},
                        {"detail", report.witness->detail}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

}  // namespace ncps
