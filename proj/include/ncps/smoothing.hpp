#ifndef NCPS_SMOOTHING_HPP
#define NCPS_SMOOTHING_HPP

#include <utility>

#include "ncps/kernels.hpp"
#include "ncps/ncp.hpp"

namespace ncps {

/// Soft-min G_r(s, t) = r psi^-1(psi(s/r) + psi(t/r)). Never exceeds
/// min(s, t). Throws std::invalid_argument for r <= 0.
double g_r(const SmoothingKernel& kernel, double s, double t, double r);

/// (dG_r/ds, dG_r/dt). For the exponential family these are the softmin
/// weights and sum to exactly 1.
std::pair<double, double> g_r_partials(const SmoothingKernel& kernel, double s, double t,
                                       double r);

/// H_r(x)_i = G_r(x_i, F_i(x)) with a single evaluation of F.
Vector h_r(const NcpProblem& problem, const SmoothingKernel& kernel, const Vector& x, double r);

/// H_r from an already evaluated F(x).
Vector h_r_values(const SmoothingKernel& kernel, const Vector& x, const Vector& Fx, double r);

/// D1 + D2 J_F(x). Counts one Jacobian evaluation on the problem.
Matrix h_r_jacobian(const NcpProblem& problem, const SmoothingKernel& kernel, const Vector& x,
                    double r);

/// Jacobian of H_r from already evaluated F(x) and J_F(x).
Matrix h_r_jacobian_values(const SmoothingKernel& kernel, const Vector& x, const Vector& Fx,
                           const Matrix& JFx, double r);

/// x -> r theta^-1(1 - theta(F(x)/r)). Components with F_i(x) <= 0 have no
/// preimage and raise EvaluationError naming the first such index.
Vector fixed_point_map(const NcpProblem& problem, const SmoothingKernel& kernel,
                       const Vector& x, double r);

/// min(x, F(x)) componentwise.
Vector f_min(const NcpProblem& problem, const Vector& x);

}  // namespace ncps

#endif  // NCPS_SMOOTHING_HPP
