#include "ncps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ncps/smoothing.hpp"

namespace ncps {

namespace {

std::string describe(const char* kind, double lo, double hi, std::size_t count) {
    std::ostringstream os;
    os << kind << " [" << lo << ", " << hi << "], " << count << " points";
    return os.str();
}

// Accumulates `defect <= tol` checks into a report; keeps the first violation
// in check order.
class Tally {
public:
    explicit Tally(AnalysisReport& report) : report_(report) {
        report_.max_defect = -std::numeric_limits<double>::infinity();
    }
    ~Tally() {
        if (report_.checked == 0) report_.max_defect = 0.0;
    }

    void check(double defect, double tol, std::vector<double> point, std::vector<double> values,
               const std::string& detail) {
        ++report_.checked;
        report_.max_defect = std::max(report_.max_defect, defect);
        if (!(defect <= tol)) fail(std::move(point), std::move(values), detail);
    }

    void fail(std::vector<double> point, std::vector<double> values, const std::string& detail) {
        if (report_.witness) return;
        report_.outcome = Outcome::violated;
        report_.witness = Witness{std::move(point), std::move(values), detail};
    }

private:
    AnalysisReport& report_;
};

}  // namespace

Grid log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0 && hi >= lo && per_decade > 0)) throw std::invalid_argument("log_grid: bad range");
    const double decades = std::log10(hi / lo);
    const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
    Grid g = log_grid_count(lo, hi, steps + 1);
    std::ostringstream os;
    os << "log [" << lo << ", " << hi << "], " << per_decade << " per decade";
    g.description = os.str();
    return g;
}

Grid log_grid_count(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi >= lo && count >= 1)) throw std::invalid_argument("log_grid_count: bad range");
    Grid g;
    const double span = std::log(hi / lo);
    for (int k = 0; k < count; ++k) {
        g.points.push_back(count == 1 ? lo : lo * std::exp(span * k / (count - 1)));
    }
    if (count > 1) g.points.back() = hi;
    g.description = describe("log", lo, hi, g.points.size());
    return g;
}

Grid explicit_grid(std::vector<double> points) {
    Grid g;
    g.points = std::move(points);
    std::ostringstream os;
    os << "explicit, " << g.points.size() << " points";
    g.description = os.str();
    return g;
}

double v_function(const SmoothingKernel& kernel, double y) {
    if (!(y > 0.0)) throw std::domain_error("v_function: y must be positive");
    const double s = kernel.psi_inv(y);
    return -kernel.dpsi(s) * s;
}

double l_function(const SmoothingKernel& kernel, double alpha) {
    const auto& k = kernel.c2_branch();
    if (!(alpha > 0.0)) throw std::domain_error("l_function: alpha must be positive");
    const double s = k.psi_inv(alpha);
    const double curvature = k.d2psi(s);
    if (!(curvature > 0.0)) {
        std::ostringstream os;
        os << "l_function: psi'' = " << curvature << " is not positive at psi^-1(" << alpha << ")";
        throw std::domain_error(os.str());
    }
    const double slope = k.dpsi(s);
    return -slope * slope / curvature;
}

AnalysisReport check_subadditivity(const std::function<double(double)>& f, const Grid& grid,
                                   std::string name) {
    AnalysisReport report;
    report.property = "subadditive(" + name + ")";
    report.grid = grid.description;
    Tally tally(report);
    std::vector<double> fv;
    fv.reserve(grid.points.size());
    for (double a : grid.points) fv.push_back(f(a));
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        for (std::size_t j = i; j < grid.points.size(); ++j) {
            const double a = grid.points[i];
            const double b = grid.points[j];
            const double lhs = f(a + b);
            const double rhs = fv[i] + fv[j];
            tally.check(lhs - rhs, 1e-12, {a, b}, {lhs, rhs}, "f(a+b) > f(a) + f(b)");
        }
    }
    return report;
}

HessianEntries g_hessian_entries(const SmoothingKernel& kernel, double s, double t) {
    const auto& k = kernel.c2_branch();
    const double g = k.psi_inv(k.psi(s) + k.psi(t));
    if (kernel.smoothness() == Smoothness::piecewise_c2 && kernel.kink()) {
        const double kink = *kernel.kink();
        if (s == kink || t == kink) {
            throw std::domain_error("g_hessian_entries: point on the kernel's kink");
        }
    }
    const double W = k.dpsi(g);
    const double U = k.d2psi(g);
    const double ps = k.dpsi(s);
    const double pt = k.dpsi(t);
    const double W2 = W * W;
    const double W3 = W2 * W;
    HessianEntries h;
    h.R = (k.d2psi(s) * W2 - ps * ps * U) / W3;
    h.T = (k.d2psi(t) * W2 - pt * pt * U) / W3;
    h.S = -ps * pt * U / W3;
    if (!std::isfinite(h.R) || !std::isfinite(h.T) || !std::isfinite(h.S)) {
        throw std::domain_error("g_hessian_entries: entries not finite at this point");
    }
    return h;
}

AnalysisReport check_concavity_hessian(const SmoothingKernel& kernel, const Grid& grid) {
    AnalysisReport report;
    report.property = "concavity-hessian(" + kernel.name() + ")";
    report.grid = grid.description + " squared";
    Tally tally(report);
    for (double s : grid.points) {
        for (double t : grid.points) {
            HessianEntries h;
            try {
                h = g_hessian_entries(kernel, s, t);
            } catch (const std::domain_error& e) {
                tally.fail({s, t}, {}, e.what());
                continue;
            }
            tally.check(h.R, 0.0, {s, t}, {h.R, h.T, h.S}, "R > 0");
            tally.check(h.T, 0.0, {s, t}, {h.R, h.T, h.S}, "T > 0");
            tally.check(-h.det(), 1e-10, {s, t}, {h.R, h.T, h.S}, "RT - S^2 < -1e-10");
        }
    }
    return report;
}

AnalysisReport check_concavity_l(const SmoothingKernel& kernel, const Grid& grid) {
    AnalysisReport report;
    report.property = "concavity-L(" + kernel.name() + ")";
    const auto& k = kernel.c2_branch();
    std::vector<double> alphas;
    for (double s : grid.points) alphas.push_back(k.psi(s));
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    report.grid = "alpha = psi(s) over " + grid.description;
    Tally tally(report);

    std::vector<double> L(alphas.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        try {
            L[i] = l_function(kernel, alphas[i]);
        } catch (const std::domain_error& e) {
            tally.fail({alphas[i]}, {}, e.what());
        }
    }
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        if (std::isnan(L[i]) || std::isnan(L[i + 1])) continue;
        tally.check(L[i + 1] - L[i], 1e-12, {alphas[i], alphas[i + 1]}, {L[i], L[i + 1]},
                    "L increasing");
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (std::size_t j = i; j < alphas.size(); ++j) {
            if (std::isnan(L[i]) || std::isnan(L[j])) continue;
            double sum_value = 0.0;
            try {
                sum_value = l_function(kernel, alphas[i] + alphas[j]);
            } catch (const std::domain_error&) {
                continue;  // alpha + beta outside psi(R): no constraint
            }
            tally.check(sum_value - L[i] - L[j], 1e-12, {alphas[i], alphas[j]},
                        {sum_value, L[i] + L[j]}, "L(a+b) > L(a) + L(b)");
        }
    }
    return report;
}

AnalysisReport check_concavity(const SmoothingKernel& kernel, const Grid& grid) {
    const auto hess = check_concavity_hessian(kernel, grid);
    const auto lr = check_concavity_l(kernel, grid);
    AnalysisReport report;
    report.property = "concavity(" + kernel.name() + ")";
    report.grid = grid.description + " squared; Hessian route " + to_string(hess.outcome) +
                  ", L route " + to_string(lr.outcome);
    report.checked = hess.checked + lr.checked;
    report.max_defect = std::max(hess.max_defect, lr.max_defect);
    report.outcome = hess.holds() && lr.holds() ? Outcome::holds : Outcome::violated;
    if (!hess.holds()) {
        report.witness = hess.witness;
    } else if (!lr.holds()) {
        report.witness = lr.witness;
    }
    if (hess.outcome != lr.outcome && report.witness) {
        report.witness->detail += " (routes disagree)";
    }
    return report;
}

std::vector<double> default_limit_sequence() {
    std::vector<double> r;
    for (int k = 1; k <= 8; ++k) r.push_back(std::pow(10.0, -k));
    return r;
}

LimitEstimate limit_probe(const SmoothingKernel& kernel, double s, double t,
                          const std::vector<double>& r_seq) {
    if (r_seq.size() < 2) throw std::invalid_argument("limit_probe: need at least two r values");
    for (std::size_t i = 0; i + 1 < r_seq.size(); ++i) {
        if (!(r_seq[i + 1] < r_seq[i] && r_seq[i + 1] > 0.0)) {
            throw std::invalid_argument("limit_probe: r sequence must be positive and decreasing");
        }
    }
    LimitEstimate est;
    est.r = r_seq;
    for (double r : r_seq) est.values.push_back(g_r(kernel, s, t, r));
    const std::size_t m = r_seq.size();
    est.last_value = est.values[m - 1];
    const double r1 = r_seq[m - 2], r2 = r_seq[m - 1];
    const double f1 = est.values[m - 2], f2 = est.values[m - 1];
    est.limit = (r1 * f2 - r2 * f1) / (r1 - r2);
    est.limit_is_zero = std::abs(est.limit) <= 1e-6;
    if (m >= 3) {
        const double d1 = std::abs(est.values[m - 2] - est.values[m - 3]);
        const double d2 = std::abs(est.values[m - 1] - est.values[m - 2]);
        est.consistent = d2 <= d1 + 1e-12;
    } else {
        est.consistent = true;
    }
    return est;
}

double speed_identity(const SmoothingKernel& kernel, double s, double t, double r) {
    // G_s = H(s/r) / H(psi^-1(psi(s/r) + psi(t/r))) with H = -psi'.
    const auto [gs, gt] = g_r_partials(kernel, s, t, r);
    return g_r(kernel, s, t, r) - (s * gs + t * gt);
}

AnalysisReport check_speed_bound(const SmoothingKernel& kernel, double s, double t, double r0,
                                 const std::vector<double>& r_seq) {
    if (!(s > 0.0 && t > 0.0 && r0 > 0.0)) {
        throw std::invalid_argument("check_speed_bound: s, t and r0 must be positive");
    }
    AnalysisReport report;
    std::ostringstream prop;
    prop << "speed-bound(" << kernel.name() << ", s=" << s << ", t=" << t << ", r0=" << r0 << ")";
    report.property = prop.str();
    report.grid = "explicit r sequence, " + std::to_string(r_seq.size()) + " points";
    Tally tally(report);

    const double f0 = limit_probe(kernel, s, t).limit;
    const double f_r0 = g_r(kernel, s, t, r0);
    for (double r : r_seq) {
        if (!(r > 0.0 && r <= r0)) throw std::invalid_argument("check_speed_bound: r outside (0, r0]");
        const double f = g_r(kernel, s, t, r);
        const double lower = f0 - r * (f0 - f_r0) / r0;
        tally.check(lower - f, 1e-9, {r}, {f, lower, f0}, "f(r) below the linear speed bound");
        tally.check(f - f0, 1e-9, {r}, {f, f0}, "f(r) above f(0+)");

        const double rfp = speed_identity(kernel, s, t, r);
        tally.check(rfp - (f - f0), 1e-9, {r}, {rfp, f - f0}, "r f'(r) > f(r) - f(0+)");

        const double h = 1e-4 * r;
        const double fd = r * (g_r(kernel, s, t, r + h) - g_r(kernel, s, t, r - h)) / (2.0 * h);
        tally.check(std::abs(fd - rfp) - 1e-5 * (1.0 + std::abs(rfp)), 0.0, {r}, {rfp, fd},
                    "r f'(r) identity disagrees with finite differences");
    }
    return report;
}

}  // namespace ncps
