#include "ncps/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncps/smoothing.hpp"

namespace ncps {

void SolverConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("SolverConfig: ") + what);
    };
    require(outer_tol > 0.0, "outer_tol must be positive");
    require(inner_tol > 0.0, "inner_tol must be positive");
    require(max_outer > 0 && max_inner > 0 && max_backtracks > 0, "budgets must be positive");
    require(armijo_sigma > 0.0 && armijo_sigma < 0.5, "armijo_sigma must lie in (0, 0.5)");
    require(backtrack_factor > 0.0 && backtrack_factor < 1.0, "backtrack_factor must lie in (0, 1)");
    require(r_floor > 0.0, "r_floor must be positive");
    require(outer_tol > r_floor * r_floor, "outer_tol must exceed r_floor^2");
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_outer_exceeded: return "max_outer_exceeded";
        case SolveStatus::inner_failure: return "inner_failure";
        case SolveStatus::evaluation_error: return "evaluation_error";
    }
    return "?";
}

const char* to_string(InnerStatus status) {
    switch (status) {
        case InnerStatus::converged: return "converged";
        case InnerStatus::max_iterations: return "max_iterations";
        case InnerStatus::line_search_failure: return "line_search_failure";
        case InnerStatus::singular: return "singular";
        case InnerStatus::evaluation_error: return "evaluation_error";
    }
    return "?";
}

double r_init(const Vector& x0, const Vector& Fx0) {
    return std::max(1.0, std::sqrt(res_metric(x0, Fx0)));
}

double r_update(double r, const Vector& x, const Vector& Fx, double r_floor) {
    if (!(r > 0.0)) throw std::invalid_argument("r_update: r must be positive");
    const double next = std::min({0.1 * r, r * r, std::sqrt(res_metric(x, Fx))});
    return std::max(r_floor, next);
}

namespace {

bool solve_newton_system(const Matrix& J, const Vector& rhs, Vector& d) {
    Eigen::PartialPivLU<Matrix> lu(J);
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) return false;
    d = lu.solve(rhs);
    return d.allFinite();
}

}  // namespace

InnerResult newton_inner(const NcpProblem& problem, const SmoothingKernel& kernel, double r,
                         const Vector& x0, const SolverConfig& cfg) {
    if (!(r > 0.0)) throw std::invalid_argument("newton_inner: r must be positive");
    InnerResult out;
    out.x = x0;

    Vector Fx;
    try {
        Fx = problem.F(out.x);
    } catch (const EvaluationError& e) {
        out.status = InnerStatus::evaluation_error;
        out.message = e.what();
        return out;
    }
    Vector H = h_r_values(kernel, out.x, Fx, r);
    double merit = 0.5 * H.squaredNorm();
    out.merits.push_back(merit);

    for (;;) {
        out.residual = H.lpNorm<Eigen::Infinity>();
        if (out.residual <= cfg.inner_tol) {
            out.status = InnerStatus::converged;
            return out;
        }
        if (out.iterations >= cfg.max_inner) {
            out.status = InnerStatus::max_iterations;
            return out;
        }

        Matrix J;
        try {
            J = h_r_jacobian_values(kernel, out.x, Fx, problem.JF(out.x), r);
        } catch (const EvaluationError& e) {
            out.status = InnerStatus::evaluation_error;
            out.message = e.what();
            return out;
        }
        ++out.jac_evals;
        problem.jacobian_evals->fetch_add(1, std::memory_order_relaxed);

        Vector d;
        if (!solve_newton_system(J, -H, d)) {
            const double shift = 1e-10 * (1.0 + J.cwiseAbs().rowwise().sum().maxCoeff());
            J.diagonal().array() += shift;
            if (!solve_newton_system(J, -H, d)) {
                out.status = InnerStatus::singular;
                out.message = "singular Jacobian of H_r";
                return out;
            }
        }

        double step = 1.0;
        bool accepted = false;
        Vector x_trial;
        Vector F_trial;
        Vector H_trial;
        double merit_trial = 0.0;
        for (int b = 0; b < cfg.max_backtracks; ++b, step *= cfg.backtrack_factor) {
            x_trial = out.x + step * d;
            try {
                F_trial = problem.F(x_trial);
            } catch (const EvaluationError&) {
                continue;  // outside the domain of F: shorten the step
            }
            H_trial = h_r_values(kernel, x_trial, F_trial, r);
            merit_trial = 0.5 * H_trial.squaredNorm();
            // For tiny steps 1 - 2 sigma step rounds to 1, so also demand a real decrease.
            if (merit_trial <= (1.0 - 2.0 * cfg.armijo_sigma * step) * merit && merit_trial < merit) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.status = InnerStatus::line_search_failure;
            out.message = "Armijo backtracking exhausted";
            return out;
        }
        out.x = std::move(x_trial);
        Fx = std::move(F_trial);
        H = std::move(H_trial);
        merit = merit_trial;
        out.merits.push_back(merit);
        ++out.iterations;
    }
}

SolveReport continuation_solve(const NcpProblem& problem, const SmoothingKernel& kernel,
                               const Vector& x0, const SolverConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    SolveReport report;
    report.x_final = x0;

    auto finish = [&](SolveStatus status) {
        report.status = status;
        report.out_iter = static_cast<int>(report.trace.size());
        if (!report.trace.empty()) {
            const auto& last = report.trace.back();
            report.x_final = last.x;
            report.res = last.res;
            report.feas = last.feas;
        }
        report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report;
    };

    Vector x = x0;
    Vector Fx;
    try {
        Fx = problem.F(x);
    } catch (const EvaluationError& e) {
        report.message = e.what();
        report.trace.push_back({0, 0.0, x, Vector::Constant(x.size(), NAN), NAN, NAN, 0, false});
        return finish(SolveStatus::evaluation_error);
    }

    double r = r_init(x, Fx);
    // Backoff target for a failed first solve: a decade above r0.
    double previous_r = 10.0 * r;

    for (int k = 0; k < cfg.max_outer; ++k) {
        InnerResult inner = newton_inner(problem, kernel, r, x, cfg);
        report.in_iter += inner.jac_evals;
        // A stalled solve that still reduced the merit is kept as an inexact
        // iterate; only a solve without any accepted step counts as failed.
        auto failed = [](const InnerResult& in) {
            return in.status == InnerStatus::evaluation_error ||
                   (in.status != InnerStatus::converged && in.iterations == 0);
        };
        if (failed(inner) && inner.status != InnerStatus::evaluation_error) {
            const double backoff = std::sqrt(r * previous_r);
            InnerResult retry = newton_inner(problem, kernel, backoff, x, cfg);
            report.in_iter += retry.jac_evals;
            r = backoff;
            inner = std::move(retry);
        }
        if (failed(inner)) {
            report.message = std::string("inner solve at r=") + std::to_string(r) + ": " +
                             to_string(inner.status) +
                             (inner.message.empty() ? "" : " (" + inner.message + ")");
            Vector Fi;
            try {
                Fi = problem.F(inner.x);
            } catch (const EvaluationError&) {
                Fi = Vector::Constant(inner.x.size(), NAN);
            }
            report.trace.push_back({k, r, inner.x, Fi, res_metric(inner.x, Fi),
                                    feas_metric(inner.x, Fi), inner.iterations, false});
            return finish(inner.status == InnerStatus::evaluation_error
                              ? SolveStatus::evaluation_error
                              : SolveStatus::inner_failure);
        }

        x = std::move(inner.x);
        Fx = problem.F(x);
        const double res = res_metric(x, Fx);
        report.trace.push_back({k, r, x, Fx, res, feas_metric(x, Fx), inner.iterations,
                                inner.status == InnerStatus::converged});
        if (res <= cfg.outer_tol) return finish(SolveStatus::converged);

        const double next = r_update(r, x, Fx, cfg.r_floor);
        if (!(next < r)) {
            report.message = "smoothing parameter reached r_floor";
            return finish(SolveStatus::max_outer_exceeded);
        }
        previous_r = r;
        r = next;
    }
    report.message = "outer iteration budget exhausted";
    return finish(SolveStatus::max_outer_exceeded);
}

}  // namespace ncps
