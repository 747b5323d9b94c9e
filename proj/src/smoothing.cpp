#include "ncps/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ncps {

namespace {

void require_positive_r(double r, const char* where) {
    if (!(r > 0.0)) {
        std::ostringstream os;
        os << where << ": r must be positive, got " << r;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

double g_r(const SmoothingKernel& kernel, double s, double t, double r) {
    require_positive_r(r, "g_r");
    const double lo = std::min(s, t);
    if (kernel.family() == KernelFamily::exponential) {
        // -(r/d) log(exp(-d s/r) + exp(-d t/r)) without overflow.
        const double scale = r / kernel.rate();
        return lo - scale * std::log1p(std::exp(-std::abs(s - t) / scale));
    }
    const double y = kernel.psi(s / r) + kernel.psi(t / r);
    // The scaling by r can round one ulp above min(s, t); the exact value
    // never does.
    return std::min(r * kernel.psi_inv(y), lo);
}

std::pair<double, double> g_r_partials(const SmoothingKernel& kernel, double s, double t,
                                       double r) {
    require_positive_r(r, "g_r_partials");
    if (kernel.family() == KernelFamily::exponential) {
        const double q = std::exp(-kernel.rate() * std::abs(s - t) / r);
        const double small = q / (1.0 + q);
        const double large = 1.0 - small;
        return s < t ? std::pair{large, small} : std::pair{small, large};
    }
    const double a = s / r;
    const double b = t / r;
    const double w = kernel.dpsi(kernel.psi_inv(kernel.psi(a) + kernel.psi(b)));
    if (!(w < 0.0)) {
        throw std::logic_error("g_r_partials: psi' vanished at the soft-min point");
    }
    return {kernel.dpsi(a) / w, kernel.dpsi(b) / w};
}

Vector h_r_values(const SmoothingKernel& kernel, const Vector& x, const Vector& Fx, double r) {
    require_positive_r(r, "h_r");
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = g_r(kernel, x[i], Fx[i], r);
    return out;
}

Vector h_r(const NcpProblem& problem, const SmoothingKernel& kernel, const Vector& x, double r) {
    require_positive_r(r, "h_r");
    return h_r_values(kernel, x, problem.F(x), r);
}

Matrix h_r_jacobian_values(const SmoothingKernel& kernel, const Vector& x, const Vector& Fx,
                           const Matrix& JFx, double r) {
    require_positive_r(r, "h_r_jacobian");
    const Eigen::Index n = x.size();
    Vector d1(n);
    Vector d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto [gs, gt] = g_r_partials(kernel, x[i], Fx[i], r);
        d1[i] = gs;
        d2[i] = gt;
    }
    Matrix J = d2.asDiagonal() * JFx;
    J.diagonal() += d1;
    return J;
}

Matrix h_r_jacobian(const NcpProblem& problem, const SmoothingKernel& kernel, const Vector& x,
                    double r) {
    require_positive_r(r, "h_r_jacobian");
    const Vector Fx = problem.F(x);
    const Matrix JFx = problem.JF(x);
    problem.jacobian_evals->fetch_add(1, std::memory_order_relaxed);
    return h_r_jacobian_values(kernel, x, Fx, JFx, r);
}

Vector fixed_point_map(const NcpProblem& problem, const SmoothingKernel& kernel,
                       const Vector& x, double r) {
    require_positive_r(r, "fixed_point_map");
    const Vector Fx = problem.F(x);
    Vector out(Fx.size());
    for (Eigen::Index i = 0; i < Fx.size(); ++i) {
        // theta^-1(1 - theta(u)) = psi^-1(theta(u)); defined iff theta(u) > 0.
        const double level = kernel.theta(Fx[i] / r);
        const double value = level > 0.0 ? r * kernel.psi_inv(level) : HUGE_VAL;
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "fixed_point_map: component " << i << " out of range (F_i = " << Fx[i] << ")";
            throw EvaluationError(os.str(), static_cast<std::size_t>(i));
        }
        out[i] = value;
    }
    return out;
}

Vector f_min(const NcpProblem& problem, const Vector& x) {
    return x.cwiseMin(problem.F(x));
}

}  // namespace ncps
