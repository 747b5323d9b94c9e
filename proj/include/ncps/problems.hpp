#ifndef NCPS_PROBLEMS_HPP
#define NCPS_PROBLEMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncps/ncp.hpp"

namespace ncps {

enum class ProblemId { analytic2d, kojima_shindo, nash_cournot, hp_hard, scalable_monotone, linear_spd };

struct ProblemSpec {
    ProblemId id = ProblemId::analytic2d;
    int n = 2;
    std::uint64_t seed = 1;
};

/// Parses "analytic2d", "ks", "nash5", "nash10", "hphard:<n>[:<seed>]",
/// "monotone:<n>", "linspd:<n>[:<seed>]". Seeds default to 1.
ProblemSpec parse_problem(std::string_view selector);

/// Canonical selector string for a spec (inverse of parse_problem).
std::string selector(const ProblemSpec& spec);

NcpProblem make_problem(const ProblemSpec& spec);

/// F(x, y) = (2 - x - x^3, y + y^3 - 2). Solutions (0, 1) and (1, 1).
NcpProblem analytic2d();

/// The standard four-variable Kojima-Shindo map with its non-degenerate
/// solution (1, 0, 3, 0) and degenerate solution (sqrt(6)/2, 0, 0, 1/2).
NcpProblem kojima_shindo();

/// Cournot oligopoly with marginal cost c_i + (x_i / L_i)^(1/beta_i) and
/// inverse demand p(Q) = (demand / Q)^(1/gamma).
struct NashCournotParams {
    std::vector<double> c;
    std::vector<double> L;
    std::vector<double> beta;
    double gamma = 1.1;
    double demand = 5000.0;
};

/// The fixed five-firm parameter set, cycled to n firms.
NashCournotParams nash_cournot_params(int n);

/// Throws std::invalid_argument unless n is 5 or 10.
NcpProblem nash_cournot(int n);
NcpProblem nash_cournot(const NashCournotParams& params);

/// F(x) = M x + q, M = A'A + B + D (A uniform(-5,5), B skew with entries
/// uniform(-5,5), D diagonal uniform(0,0.3)), q uniform(-500,500).
NcpProblem hp_hard(int n, std::uint64_t seed);

/// F(x) = tridiag(-1, 4, -1) x + atan(x) - 1. Requires n >= 2.
NcpProblem scalable_monotone(int n);

/// F(x) = M x + q with M = A'A + I (A uniform(-1,1)) and q uniform(-2,2).
struct LinearSpdInstance {
    NcpProblem problem;
    double lambda_min = 0.0;
    std::optional<Vector> solution;  ///< exact solution, present for n <= 12
};

LinearSpdInstance linear_spd(int n, std::uint64_t seed);

/// Every solution of the linear complementarity problem
/// x >= 0, M x + q >= 0, x'(M x + q) = 0, found by enumerating all 2^n
/// complementary index sets. Throws std::invalid_argument for n > 20.
std::vector<Vector> solve_lcp_enumeration(const Matrix& M, const Vector& q, double tol = 1e-10);

}  // namespace ncps

#endif  // NCPS_PROBLEMS_HPP
