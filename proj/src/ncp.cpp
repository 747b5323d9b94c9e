#include "ncps/ncp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ncps/rng.hpp"
#include "ncps/smoothing.hpp"

namespace ncps {

const char* to_string(Outcome outcome) {
    return outcome == Outcome::holds ? "holds" : "violated";
}

Vector NcpProblem::F(const Vector& x) const {
    if (x.size() != n) {
        std::ostringstream os;
        os << name << ": expected a point of dimension " << n << ", got " << x.size();
        throw std::invalid_argument(os.str());
    }
    Vector Fx = eval_F(x);
    if (Fx.size() != n) {
        throw std::logic_error(name + ": F returned a vector of the wrong length");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(Fx[i])) {
            std::ostringstream os;
            os << name << ": F_" << i << " is not finite";
            throw EvaluationError(os.str(), static_cast<std::size_t>(i));
        }
    }
    return Fx;
}

Matrix NcpProblem::JF(const Vector& x) const {
    if (eval_JF) {
        if (x.size() != n) throw std::invalid_argument(name + ": dimension mismatch in JF");
        return eval_JF(x);
    }
    const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    const Vector f0 = F(x);
    Matrix J(n, n);
    Vector xp = x;
    for (int j = 0; j < n; ++j) {
        const double h = root_eps * (1.0 + std::abs(x[j]));
        xp[j] = x[j] + h;
        J.col(j) = (F(xp) - f0) / h;
        xp[j] = x[j];
    }
    return J;
}

namespace {

void require_same_length(const Vector& x, const Vector& Fx, const char* who) {
    if (x.size() != Fx.size()) throw std::invalid_argument(std::string(who) + ": x and F(x) differ in length");
}

}  // namespace

double res_metric(const Vector& x, const Vector& Fx) {
    require_same_length(x, Fx, "res_metric");
    if (x.size() == 0) return 0.0;
    return x.cwiseProduct(Fx).cwiseAbs().maxCoeff();
}

double feas_metric(const Vector& x, const Vector& Fx) {
    require_same_length(x, Fx, "feas_metric");
    return 0.0 - x.cwiseMin(0.0).sum() - Fx.cwiseMin(0.0).sum();
}

namespace {

constexpr double kStrictness = 1e-12;

template <class Map>
AnalysisReport sample_pairs(const NcpProblem& problem, std::size_t pair_count,
                            std::uint64_t seed, bool strict, Map&& map, std::string property) {
    AnalysisReport report;
    report.property = std::move(property);
    {
        std::ostringstream os;
        os << pair_count << " uniform pairs in [" << problem.sample_box.lo << ", "
           << problem.sample_box.hi << "]^" << problem.n << ", seed " << seed;
        report.grid = os.str();
    }
    report.max_defect = -std::numeric_limits<double>::infinity();
    const auto [lo, hi] = problem.sample_box;
    Vector x(problem.n);
    Vector y(problem.n);
    for (std::size_t k = 0; k < pair_count; ++k) {
        for (int j = 0; j < problem.n; ++j) {
            x[j] = uniform(lo, hi, seed, 2 * k, static_cast<std::uint64_t>(j));
            y[j] = uniform(lo, hi, seed, 2 * k + 1, static_cast<std::uint64_t>(j));
        }
        const Vector fx = map(x);
        const Vector fy = map(y);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < problem.n; ++i) {
            if (x[i] != y[i]) best = std::max(best, (x[i] - y[i]) * (fx[i] - fy[i]));
        }
        if (best == -std::numeric_limits<double>::infinity()) continue;  // x == y
        ++report.checked;
        const double defect = -best;
        report.max_defect = std::max(report.max_defect, defect);
        const bool bad = strict ? !(best > 0.0) : best < -kStrictness;
        if (bad && !report.witness) {
            report.outcome = Outcome::violated;
            Witness w;
            w.point.assign(x.data(), x.data() + x.size());
            w.point.insert(w.point.end(), y.data(), y.data() + y.size());
            w.values = {best};
            w.detail = "pair " + std::to_string(k) + ": point = (x, y), value = max_i (x-y)_i (G_i(x)-G_i(y))";
            report.witness = std::move(w);
        }
    }
    return report;
}

}  // namespace

AnalysisReport p0_sample_test(const NcpProblem& problem, std::size_t pair_count,
                              std::uint64_t seed) {
    return sample_pairs(
        problem, pair_count, seed, false, [&](const Vector& v) { return problem.F(v); },
        "P0(" + problem.name + ")");
}

AnalysisReport p_sample_test_hr(const NcpProblem& problem, const SmoothingKernel& kernel,
                                double r, std::size_t pair_count, std::uint64_t seed) {
    const bool premise = p0_sample_test(problem, pair_count, seed).holds();
    std::ostringstream name;
    name << "P(H_r, " << problem.name << ", " << kernel.name() << ", r=" << r << ")";
    auto report = sample_pairs(
        problem, pair_count, seed, true, [&](const Vector& v) { return h_r(problem, kernel, v, r); },
        name.str());
    if (!premise) report.grid += "; F failed the P0 sample test, result informational";
    return report;
}

ErrorModulus ErrorModulus::quadratic(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("quadratic modulus requires mu > 0");
    ErrorModulus m;
    m.h = [mu](double u) { return mu * u * u; };
    m.h_inv = [mu](double v) { return std::sqrt(v / mu); };
    m.epsilon = std::numeric_limits<double>::infinity();
    m.eta = std::numeric_limits<double>::infinity();
    return m;
}

double error_bound(const ErrorModulus& modulus, int n, double r) {
    if (n < 1) throw std::invalid_argument("error_bound: n must be positive");
    if (!(r >= 0.0)) throw std::invalid_argument("error_bound: r must be nonnegative");
    const double level = n * r * r;
    if (!(level < modulus.eta)) {
        std::ostringstream os;
        os << "error_bound: n r^2 = " << level << " is outside [0, " << modulus.eta << ")";
        throw std::out_of_range(os.str());
    }
    return modulus.h_inv(level);
}

}  // namespace ncps
