#ifndef NCPS_ANALYSIS_HPP
#define NCPS_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include "ncps/kernels.hpp"
#include "ncps/report.hpp"

namespace ncps {

/// Explicit sample points; checks never sample anything they were not given.
struct Grid {
    std::vector<double> points;
    std::string description;
};

/// Log-spaced points lo, ..., hi with `per_decade` points per decade.
Grid log_grid(double lo, double hi, int per_decade = 64);
/// `count` log-spaced points from lo to hi inclusive.
Grid log_grid_count(double lo, double hi, int count);
Grid explicit_grid(std::vector<double> points);

/// V(y) = -psi'(psi^-1(y)) psi^-1(y). Throws std::domain_error for y <= 0.
double v_function(const SmoothingKernel& kernel, double y);

/// L(alpha) = -(psi')^2 / psi'' at psi^-1(alpha), on the kernel's C2 branch.
/// Throws std::domain_error where psi'' <= 0 or alpha is outside the range.
double l_function(const SmoothingKernel& kernel, double alpha);

/// f(a + b) <= f(a) + f(b) + 1e-12 over all pairs of grid points.
AnalysisReport check_subadditivity(const std::function<double(double)>& f, const Grid& grid,
                                   std::string name = "f");

/// Second partials of G(s, t) = psi^-1(psi(s) + psi(t)).
struct HessianEntries {
    double R = 0.0;  ///< d2G/ds2
    double T = 0.0;  ///< d2G/dt2
    double S = 0.0;  ///< d2G/dsdt
    double det() const { return R * T - S * S; }
};

/// Evaluated on the kernel's C2 branch. Throws std::domain_error at a kink of
/// a piecewise kernel or where the entries are not finite.
HessianEntries g_hessian_entries(const SmoothingKernel& kernel, double s, double t);

/// R <= 0, T <= 0 and RT - S^2 >= -1e-10 on grid x grid.
AnalysisReport check_concavity_hessian(const SmoothingKernel& kernel, const Grid& grid);
/// L non-increasing and sub-additive on the alpha-grid {psi(s) : s in grid}.
AnalysisReport check_concavity_l(const SmoothingKernel& kernel, const Grid& grid);
/// Both routes; holds only when both hold. A disagreement is reported in the
/// witness detail.
AnalysisReport check_concavity(const SmoothingKernel& kernel, const Grid& grid);

struct LimitEstimate {
    std::vector<double> r;
    std::vector<double> values;
    double last_value = 0.0;
    /// Linear extrapolation to r = 0 through the last two samples.
    double limit = 0.0;
    bool limit_is_zero = false;  ///< |limit| <= 1e-6
    /// Successive differences over the last three samples do not grow.
    bool consistent = false;
};

/// 1e-1, 1e-2, ..., 1e-8.
std::vector<double> default_limit_sequence();

/// Samples G_r(s, t) along a strictly decreasing r sequence (at least two values).
LimitEstimate limit_probe(const SmoothingKernel& kernel, double s, double t,
                          const std::vector<double>& r_seq = default_limit_sequence());

/// r f'(r) for f(r) = G_r(s, t) from f(r) - (s G_s + t G_t).
double speed_identity(const SmoothingKernel& kernel, double s, double t, double r);

/// Two-sided bound f(0+) - r (f(0+) - f(r0))/r0 <= f(r) <= f(0+) and
/// r f'(r) <= f(r) - f(0+), each with slack 1e-9, plus a finite-difference
/// cross-check of r f'(r) at 1e-5.
AnalysisReport check_speed_bound(const SmoothingKernel& kernel, double s, double t, double r0,
                                 const std::vector<double>& r_seq);

}  // namespace ncps

#endif  // NCPS_ANALYSIS_HPP
