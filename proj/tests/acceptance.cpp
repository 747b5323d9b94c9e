// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ncps/analysis.hpp"
#include "ncps/bench.hpp"
#include "ncps/problems.hpp"
#include "ncps/rng.hpp"
#include "ncps/smoothing.hpp"
#include "ncps/solver.hpp"
#include "oracles.hpp"

using namespace ncps;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double nearest_known(const NcpProblem& p, const Vector& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : p.known_solutions) best = std::min(best, (x - s).norm());
    return best;
}

// x_i F_i <= r^2 bookkeeping shared by criteria 2, 3 and 9.
struct BoundTally {
    long checked = 0;
    long violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    void add(const SolveReport& rep, const SmoothingKernel& k) {
        if (rep.status != SolveStatus::converged || !k.dominates_rational()) return;
        for (const auto& tp : rep.trace) {
            for (Eigen::Index i = 0; i < tp.x.size(); ++i) {
                const double slack = tp.x[i] * tp.Fx[i] - tp.r * tp.r;
                worst = std::max(worst, slack);
                ++checked;
                if (slack > 1e-8) ++violations;
            }
        }
    }
};

BoundTally prop_i;

void criterion1() {
    const auto t0 = Clock::now();
    const auto p = analytic2d();
    SolverConfig cfg;
    cfg.outer_tol = 1e-10;
    bool ok = true;
    std::string detail;
    for (const auto& [k, limit] : {std::pair{make_exponential(), 5}, std::pair{make_rational(), 8}}) {
        const auto rep = continuation_solve(p, k, Vector::Ones(2), cfg);
        const double d = nearest_known(p, rep.x_final);
        const bool pass = rep.status == SolveStatus::converged && rep.res <= 1e-10 && rep.out_iter <= limit &&
                          d <= 1e-6;
        ok = ok && pass;
        detail += fmt("%s: OutIter=%d (<=%d) Res=%.2e dist=%.1e; ", k.name().c_str(), rep.out_iter, limit, rep.res, d);
    }
    const double t = seconds_since(t0);
    report(1, ok && t < 1.0, detail + fmt("%.3fs", t));
}

void criterion2() {
    const auto t0 = Clock::now();
    const auto p = kojima_shindo();
    const auto starts = generate_starts(p.n, 11, 1);
    bool ok = true;
    std::string detail;
    for (const auto& k : {make_rational(), make_exponential()}) {
        int conv = 0, max_out = 0, bad_feas = 0, far = 0;
        double worst_res = 0, worst_feas = 0, worst_dist = 0;
        for (const auto& x0 : starts) {
            const auto rep = continuation_solve(p, k, x0);
            prop_i.add(rep, k);
            if (rep.status != SolveStatus::converged) continue;
            ++conv;
            max_out = std::max(max_out, rep.out_iter);
            worst_res = std::max(worst_res, rep.res);
            worst_feas = std::max(worst_feas, rep.feas);
            const double d = nearest_known(p, rep.x_final);
            worst_dist = std::max(worst_dist, d);
            if (rep.feas > 1e-6) ++bad_feas;
            if (d > 1e-5) ++far;
        }
        const bool pass = conv == 11 && max_out <= 10 && worst_res <= 1e-8 && bad_feas == 0 && far == 0;
        ok = ok && pass;
        detail += fmt("%s: %d/11 conv, OutIter<=%d, Res<=%.1e, Feas<=%.1e (%d over 1e-6), dist<=%.1e (%d over 1e-5); ",
                      k.name().c_str(), conv, max_out, worst_res, worst_feas, bad_feas, worst_dist, far);
    }
    const double t = seconds_since(t0);
    report(2, ok && t < 5.0, detail + fmt("%.3fs", t));
}

void criterion3() {
    const auto t0 = Clock::now();
    long total[2] = {0, 0};
    int unconverged = 0;
    const std::vector<SmoothingKernel> kernels{make_rational(), make_exponential()};
    for (const auto& spec : default_suite()) {
        const auto p = make_problem(spec);
        const auto starts = generate_starts(p.n, 11, 1);
        for (int ki = 0; ki < 2; ++ki) {
            for (const auto& x0 : starts) {
                const auto rep = continuation_solve(p, kernels[ki], x0);
                total[ki] += rep.in_iter;
                prop_i.add(rep, kernels[ki]);
                if (rep.status != SolveStatus::converged) ++unconverged;
            }
        }
    }
    const double t = seconds_since(t0);
    report(3, total[1] < total[0] && t < 120.0,
           fmt("summed InIter rational=%ld exp=%ld (unconverged runs: %d); %.2fs", total[0], total[1], unconverged, t));
}

void criterion4() {
    const auto t0 = Clock::now();
    long bad = 0;
    for (const auto& k : {make_rational(), make_exponential()}) {
        for (std::uint64_t i = 0; i < 100000; ++i) {
            const double s = uniform(-10, 10, 404, 0, i);
            const double t = uniform(-10, 10, 404, 1, i);
            const double r = uniform(1e-6, 1, 404, 2, i);
            if (!(g_r(k, s, t, r) <= std::min(s, t))) ++bad;
        }
    }
    const double t = seconds_since(t0);
    report(4, bad == 0 && t < 1.0, fmt("2 x 1e5 triples, %ld above min(s,t); %.3fs", bad, t));
}

void criterion5() {
    const auto t0 = Clock::now();
    const auto ex = make_exponential();
    const auto rat = make_rational();
    long bad_exp = 0, bad_rat = 0;
    double worst_rat = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double s = uniform(0, 10, 505, 0, i);
        const double t = uniform(0, 10, 505, 1, i);
        const double r = std::pow(10.0, uniform(-8, 0, 505, 2, i));
        if (!(std::abs(g_r(ex, s, t, r) - std::min(s, t)) <= r * std::log(2.0))) ++bad_exp;
        const double s2 = uniform(0.1, 10, 505, 3, i);
        const double t2 = uniform(0.1, 10, 505, 4, i);
        const double dev = std::abs(g_r(rat, s2, t2, 1e-8) - s2 * t2 / (s2 + t2));
        worst_rat = std::max(worst_rat, dev);
        if (dev > 1e-6) ++bad_rat;
    }
    const double t = seconds_since(t0);
    report(5, bad_exp == 0 && bad_rat == 0 && t < 1.0,
           fmt("exp: %ld of 1e4 outside r ln2; rational: max |g - st/(s+t)| = %.1e; %.3fs", bad_exp, worst_rat, t));
}

void criterion6() {
    const auto t0 = Clock::now();
    const auto ex = make_exponential();
    const auto rat = make_rational();
    double worst_rat = 0, worst_exp = 0;
    for (int i = 1; i <= 1000; ++i) {
        const double a = 0.01 * i;
        worst_rat = std::max(worst_rat, std::abs(l_function(rat, a) + a / 2));
        worst_exp = std::max(worst_exp, std::abs(l_function(ex, a) + a));
    }
    const auto h = g_hessian_entries(ex, 1.0, 1.0);
    const double herr = std::max({std::abs(h.R + 0.25), std::abs(h.T + 0.25), std::abs(h.S - 0.25)});
    const double t = seconds_since(t0);
    report(6, worst_rat <= 1e-9 && worst_exp <= 1e-9 && herr <= 1e-10 && std::abs(h.det()) <= 1e-10 && t < 1.0,
           fmt("max |L_rat + a/2| = %.1e, max |L_exp + a| = %.1e, Hessian err %.1e, det %.1e; %.3fs", worst_rat,
               worst_exp, herr, std::abs(h.det()), t));
}

void criterion7() {
    const auto t0 = Clock::now();
    const auto grid = log_grid_count(0.1, 10.0, 512);
    bool ok = true;
    std::string detail;
    for (const auto& k : {make_rational(), make_exponential(), make_phi_lambda({3.0, 1.0, 1.0})}) {
        const auto both = check_concavity(k, grid);
        const auto lr = check_concavity_l(k, grid);
        const auto hs = check_concavity_hessian(k, grid);
        const bool pass = both.holds() && lr.holds() && hs.holds();
        ok = ok && pass;
        detail += fmt("%s: hessian %s, L %s; ", k.name().c_str(), to_string(hs.outcome), to_string(lr.outcome));
    }
    const double t = seconds_since(t0);
    report(7, ok && t < 10.0, detail + fmt("%.2fs", t));
}

void criterion8() {
    const auto t0 = Clock::now();
    int bound_fail = 0;
    double worst_eq = 0;
    for (const auto& k : {make_rational(), make_exponential()}) {
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const double s = uniform(0.1, 10, 808, 0, i);
            const double t = uniform(0.1, 10, 808, 1, i);
            const double r0 = uniform(0.01, 1, 808, 2, i);
            std::vector<double> rs;
            for (int j = 0; j <= 8; ++j) rs.push_back(r0 * std::pow(10.0, -0.5 * j));
            if (!check_speed_bound(k, s, t, r0, rs).holds()) ++bound_fail;
            if (k.family() == KernelFamily::rational) {
                const double f0 = limit_probe(k, s, t).limit;
                for (double r : rs) {
                    const double gap = speed_identity(k, s, t, r) - (g_r(k, s, t, r) - f0);
                    worst_eq = std::max(worst_eq, std::abs(gap));
                }
            }
        }
    }
    const double t = seconds_since(t0);
    report(8, bound_fail == 0 && worst_eq <= 1e-9 && t < 5.0,
           fmt("speed bound failed on %d of 2000 (s,t,r0); rational max |r f' - (f - f0)| = %.2e (needs <= 1e-9); %.2fs",
               bound_fail, worst_eq, t));
}

void criterion9() {
    report(9, prop_i.violations == 0 && prop_i.checked > 0,
           fmt("%ld products x_i F_i checked over converged runs of criteria 2-3, %ld above r^2 + 1e-8, max x_i F_i - r^2 = %.1e",
               prop_i.checked, prop_i.violations, prop_i.worst));
}

void criterion10() {
    const auto t0 = Clock::now();
    const auto inst = linear_spd(8, 7);
    const auto sols = solve_lcp_enumeration(inst.problem.affine->M, inst.problem.affine->q);
    bool ok = sols.size() == 1;
    std::string detail = fmt("oracle solutions: %zu; ", sols.size());
    SolverConfig cfg;
    cfg.inner_tol = 1e-12;
    Vector x = Vector::Ones(8);
    const auto mod = ErrorModulus::quadratic(inst.lambda_min);
    for (double r : {1e-1, 1e-2, 1e-3}) {
        const auto in = newton_inner(inst.problem, make_exponential(), r, x, cfg);
        const double err = ok ? (in.x - sols[0]).norm() : NAN;
        const double bound = std::sqrt(8 * r * r / inst.lambda_min);
        const bool pass = in.status == InnerStatus::converged && err <= bound + 1e-6 &&
                          std::abs(error_bound(mod, 8, r) - bound) <= 1e-15;
        ok = ok && pass;
        detail += fmt("r=%.0e err=%.2e bound=%.2e; ", r, err, bound);
        x = in.x;
    }
    const double t = seconds_since(t0);
    report(10, ok && t < 5.0, detail + fmt("%.3fs", t));
}

void criterion11() {
    const auto t0 = Clock::now();
    double worst = 0;
    std::string worst_at;
    int cases = 0;
    for (const char* sel : {"analytic2d", "ks", "nash5", "nash10", "hphard:20", "monotone:10", "linspd:8:7"}) {
        const auto p = make_problem(parse_problem(sel));
        for (const auto& k : {make_rational(), make_exponential()}) {
            for (double r : {1.0, 1e-2}) {
                for (std::uint64_t i = 0; i < 10; ++i) {
                    Vector x(p.n);
                    for (int j = 0; j < p.n; ++j) x[j] = uniform(p.sample_box.lo, p.sample_box.hi, 1111, i, j);
                    const Matrix J = h_r_jacobian(p, k, x, r);
                    const Matrix Jfd = oracle::jacobian_fd([&](const Vector& y) { return h_r(p, k, y, r); }, x);
                    const double err = oracle::rel_matrix_error(J, Jfd);
                    ++cases;
                    if (err > worst) {
                        worst = err;
                        worst_at = fmt("%s/%s/r=%g", sel, k.name().c_str(), r);
                    }
                }
            }
        }
    }
    const double t = seconds_since(t0);
    report(11, worst <= 1e-6 && t < 10.0,
           fmt("%d Jacobians, worst relative error %.1e (%s); %.2fs", cases, worst, worst_at.c_str(), t));
}

void criterion12() {
    const auto t0 = Clock::now();
    const auto p = scalable_monotone(1000);
    bool ok = true;
    std::string detail;
    for (const auto& k : {make_rational(), make_exponential()}) {
        const auto rep = continuation_solve(p, k, Vector::Ones(1000));
        ok = ok && rep.status == SolveStatus::converged && rep.res <= 1e-8;
        detail += fmt("%s: %s OutIter=%d InIter=%d Res=%.1e; ", k.name().c_str(), to_string(rep.status), rep.out_iter,
                      rep.in_iter, rep.res);
    }
    const double t = seconds_since(t0);
    report(12, ok && t < 600.0, detail + fmt("%.1fs", t));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
