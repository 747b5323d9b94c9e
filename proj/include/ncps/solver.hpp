#ifndef NCPS_SOLVER_HPP
#define NCPS_SOLVER_HPP

#include <string>
#include <vector>

#include "ncps/kernels.hpp"
#include "ncps/ncp.hpp"

namespace ncps {

struct SolverConfig {
    double outer_tol = 1e-8;    ///< stop when Res <= outer_tol
    double inner_tol = 1e-10;   ///< absolute, on ||H_r||_inf
    int max_outer = 50;
    int max_inner = 200;
    double armijo_sigma = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 50;
    double r_floor = 1e-16;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

enum class SolveStatus { converged, max_outer_exceeded, inner_failure, evaluation_error };

const char* to_string(SolveStatus status);

enum class InnerStatus { converged, max_iterations, line_search_failure, singular, evaluation_error };

const char* to_string(InnerStatus status);

struct InnerResult {
    Vector x;
    int iterations = 0;
    int jac_evals = 0;
    InnerStatus status = InnerStatus::max_iterations;
    double residual = 0.0;  ///< ||H_r(x)||_inf at the returned x
    /// Merit values 0.5 ||H_r||^2 at each accepted iterate, starting point included.
    std::vector<double> merits;
    std::string message;
};

struct TracePoint {
    int outer_index = 0;
    double r = 0.0;
    Vector x;
    Vector Fx;
    double res = 0.0;
    double feas = 0.0;
    int inner_iters = 0;
    bool inner_converged = false;
};

struct SolveReport {
    SolveStatus status = SolveStatus::max_outer_exceeded;
    Vector x_final;
    int out_iter = 0;
    int in_iter = 0;  ///< total Jacobian evaluations
    double res = 0.0;
    double feas = 0.0;
    double wall_time = 0.0;  ///< seconds
    std::vector<TracePoint> trace;
    std::string message;
};

/// max(1, sqrt(Res(x0))).
double r_init(const Vector& x0, const Vector& Fx0);

/// max(r_floor, min(r/10, r^2, sqrt(Res(x)))).
double r_update(double r, const Vector& x, const Vector& Fx, double r_floor = 1e-16);

/// Damped Newton on H_r(x) = 0 with Armijo backtracking on 0.5 ||H_r||^2.
InnerResult newton_inner(const NcpProblem& problem, const SmoothingKernel& kernel, double r,
                         const Vector& x0, const SolverConfig& cfg);

/// Continuation in r with warm-started inner solves.
SolveReport continuation_solve(const NcpProblem& problem, const SmoothingKernel& kernel,
                               const Vector& x0, const SolverConfig& cfg = {});

}  // namespace ncps

#endif  // NCPS_SOLVER_HPP
