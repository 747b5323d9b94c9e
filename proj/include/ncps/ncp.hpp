#ifndef NCPS_NCP_HPP
#define NCPS_NCP_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncps/kernels.hpp"
#include "ncps/report.hpp"

namespace ncps {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// F could not be evaluated at the requested point (domain error or a
/// non-finite component). `index` names the offending component.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

struct Interval {
    double lo = 0.0;
    double hi = 20.0;
};

/// Data of an affine map F(x) = M x + q.
struct AffineData {
    Matrix M;
    Vector q;
};

/**
 * A nonlinear complementarity problem: find x >= 0 with F(x) >= 0 and
 * x'F(x) = 0.
 *
 * Copies share the Jacobian-evaluation counter.
 */
struct NcpProblem {
    std::string name;
    int n = 0;
    std::function<Vector(const Vector&)> eval_F;
    std::function<Matrix(const Vector&)> eval_JF;  ///< optional
    std::vector<Vector> known_solutions;
    Interval sample_box{};
    std::optional<AffineData> affine;
    std::shared_ptr<std::atomic<std::uint64_t>> jacobian_evals =
        std::make_shared<std::atomic<std::uint64_t>>(0);

    /// Evaluates F. Throws std::invalid_argument on a dimension mismatch and
    /// EvaluationError when F fails or returns a non-finite component.
    Vector F(const Vector& x) const;

    /// Analytic Jacobian when provided, otherwise forward differences with
    /// step sqrt(eps) (1 + |x_j|). Does not touch the counter.
    Matrix JF(const Vector& x) const;
};

/// max_i |x_i F_i|.
double res_metric(const Vector& x, const Vector& Fx);

/// ||min(x, 0)||_1 + ||min(F, 0)||_1.
double feas_metric(const Vector& x, const Vector& Fx);

/// Sampled P0 test: pairs drawn uniformly from the problem's sample box.
AnalysisReport p0_sample_test(const NcpProblem& problem, std::size_t pair_count,
                              std::uint64_t seed);

/// Sampled strict P test of x -> H_r(x). The report's grid string notes
/// whether F itself passed the P0 test (otherwise the result is informational).
AnalysisReport p_sample_test_hr(const NcpProblem& problem, const SmoothingKernel& kernel,
                                double r, std::size_t pair_count, std::uint64_t seed);

/// Increasing h: [0, epsilon) -> [0, eta) with h(0) = 0 and its inverse.
struct ErrorModulus {
    std::function<double(double)> h;
    std::function<double(double)> h_inv;
    double epsilon = 0.0;
    double eta = 0.0;

    /// h(u) = mu u^2 (strong monotonicity with modulus mu).
    static ErrorModulus quadratic(double mu);
};

/// h_inv(n r^2). Throws std::out_of_range when n r^2 >= eta.
double error_bound(const ErrorModulus& modulus, int n, double r);

}  // namespace ncps

#endif  // NCPS_NCP_HPP
