#include "ncps/problems.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ncps/rng.hpp"

namespace ncps {

namespace {

// Known solutions must pass both metrics before a problem is handed out.
void self_check(const NcpProblem& p) {
    for (const auto& x : p.known_solutions) {
        const Vector Fx = p.F(x);
        if (!(res_metric(x, Fx) <= 1e-8 && feas_metric(x, Fx) <= 1e-8)) {
            throw std::logic_error(p.name + ": known solution fails the residual self-check");
        }
    }
}

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("bad integer in problem selector '" + std::string(whole) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

NcpProblem affine_problem(std::string name, Matrix M, Vector q) {
    NcpProblem p;
    p.name = std::move(name);
    p.n = static_cast<int>(q.size());
    p.eval_F = [M, q](const Vector& x) -> Vector { return M * x + q; };
    p.eval_JF = [M](const Vector&) -> Matrix { return M; };
    p.affine = AffineData{std::move(M), std::move(q)};
    return p;
}

}  // namespace

ProblemSpec parse_problem(std::string_view sel) {
    const auto parts = split(sel, ':');
    const auto head = parts.front();
    ProblemSpec spec;
    auto with_n_seed = [&](ProblemId id) {
        if (parts.size() < 2 || parts.size() > 3) {
            throw std::invalid_argument("problem selector '" + std::string(sel) +
                                        "' expects <name>:<n>[:<seed>]");
        }
        spec.id = id;
        spec.n = parse_int(parts[1], sel);
        spec.seed = parts.size() == 3 ? static_cast<std::uint64_t>(parse_int(parts[2], sel)) : 1;
    };
    if (head == "analytic2d" && parts.size() == 1) {
        spec = {ProblemId::analytic2d, 2, 1};
    } else if (head == "ks" && parts.size() == 1) {
        spec = {ProblemId::kojima_shindo, 4, 1};
    } else if ((head == "nash5" || head == "nash10") && parts.size() == 1) {
        spec = {ProblemId::nash_cournot, head == "nash5" ? 5 : 10, 1};
    } else if (head == "hphard") {
        with_n_seed(ProblemId::hp_hard);
    } else if (head == "linspd") {
        with_n_seed(ProblemId::linear_spd);
    } else if (head == "monotone" && parts.size() == 2) {
        spec = {ProblemId::scalable_monotone, parse_int(parts[1], sel), 1};
    } else {
        throw std::invalid_argument("unknown problem selector '" + std::string(sel) + "'");
    }
    if (spec.n < 1) throw std::invalid_argument("problem dimension must be positive");
    return spec;
}

std::string selector(const ProblemSpec& spec) {
    switch (spec.id) {
        case ProblemId::analytic2d: return "analytic2d";
        case ProblemId::kojima_shindo: return "ks";
        case ProblemId::nash_cournot: return "nash" + std::to_string(spec.n);
        case ProblemId::hp_hard:
            return "hphard:" + std::to_string(spec.n) + ":" + std::to_string(spec.seed);
        case ProblemId::scalable_monotone: return "monotone:" + std::to_string(spec.n);
        case ProblemId::linear_spd:
            return "linspd:" + std::to_string(spec.n) + ":" + std::to_string(spec.seed);
    }
    return "?";
}

NcpProblem make_problem(const ProblemSpec& spec) {
    switch (spec.id) {
        case ProblemId::analytic2d: return analytic2d();
        case ProblemId::kojima_shindo: return kojima_shindo();
        case ProblemId::nash_cournot: return nash_cournot(spec.n);
        case ProblemId::hp_hard: return hp_hard(spec.n, spec.seed);
        case ProblemId::scalable_monotone: return scalable_monotone(spec.n);
        case ProblemId::linear_spd: return linear_spd(spec.n, spec.seed).problem;
    }
    throw std::invalid_argument("unknown problem id");
}

NcpProblem analytic2d() {
    NcpProblem p;
    p.name = "analytic2d";
    p.n = 2;
    p.eval_F = [](const Vector& v) -> Vector {
        const double x = v[0], y = v[1];
        return Vector{{2.0 - x - x * x * x, y + y * y * y - 2.0}};
    };
    p.eval_JF = [](const Vector& v) -> Matrix {
        Matrix J = Matrix::Zero(2, 2);
        J(0, 0) = -1.0 - 3.0 * v[0] * v[0];
        J(1, 1) = 1.0 + 3.0 * v[1] * v[1];
        return J;
    };
    p.known_solutions = {Vector{{0.0, 1.0}}, Vector{{1.0, 1.0}}};
    self_check(p);
    return p;
}

NcpProblem kojima_shindo() {
    NcpProblem p;
    p.name = "ks";
    p.n = 4;
    p.eval_F = [](const Vector& x) -> Vector {
        const double a = x[0], b = x[1], c = x[2], d = x[3];
        return Vector{{3 * a * a + 2 * a * b + 2 * b * b + c + 3 * d - 6,
                       2 * a * a + a + b * b + 10 * c + 2 * d - 2,
                       3 * a * a + a * b + 2 * b * b + 2 * c + 9 * d - 9,
                       a * a + 3 * b * b + 2 * c + 3 * d - 3}};
    };
    p.eval_JF = [](const Vector& x) -> Matrix {
        const double a = x[0], b = x[1];
        Matrix J(4, 4);
        J << 6 * a + 2 * b, 2 * a + 4 * b, 1, 3,
             4 * a + 1,     2 * b,         10, 2,
             6 * a + b,     a + 4 * b,     2, 9,
             2 * a,         6 * b,         2, 3;
        return J;
    };
    p.known_solutions = {Vector{{1.0, 0.0, 3.0, 0.0}},
                         Vector{{std::sqrt(6.0) / 2.0, 0.0, 0.0, 0.5}}};
    self_check(p);
    return p;
}

NashCournotParams nash_cournot_params(int n) {
    static constexpr double c[] = {10, 8, 6, 4, 2};
    static constexpr double beta[] = {1.2, 1.1, 1.0, 0.9, 0.8};
    NashCournotParams params;
    for (int i = 0; i < n; ++i) {
        params.c.push_back(c[i % 5]);
        params.L.push_back(10.0);
        params.beta.push_back(beta[i % 5]);
    }
    return params;
}

NcpProblem nash_cournot(int n) {
    if (n != 5 && n != 10) throw std::invalid_argument("nash_cournot: n must be 5 or 10");
    auto p = nash_cournot(nash_cournot_params(n));
    p.name = "nash" + std::to_string(n);
    return p;
}

NcpProblem nash_cournot(const NashCournotParams& params) {
    const int n = static_cast<int>(params.c.size());
    if (n < 1 || params.L.size() != params.c.size() || params.beta.size() != params.c.size()) {
        throw std::invalid_argument("nash_cournot: parameter vectors must share a positive length");
    }
    NcpProblem p;
    p.name = "nash";
    p.n = n;
    p.sample_box = {1.0, 20.0};

    auto check_domain = [](const Vector& x) -> double {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < 0.0) {
                throw EvaluationError("nash_cournot: negative production x_" + std::to_string(i),
                                      static_cast<std::size_t>(i));
            }
        }
        const double Q = x.sum();
        if (!(Q > 0.0)) throw EvaluationError("nash_cournot: total production Q <= 0", 0);
        return Q;
    };

    p.eval_F = [params, check_domain](const Vector& x) -> Vector {
        const double Q = check_domain(x);
        const double inv_gamma = 1.0 / params.gamma;
        const double price = std::pow(params.demand / Q, inv_gamma);
        const double dprice = -inv_gamma * price / Q;
        Vector F(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double ib = 1.0 / params.beta[i];
            F[i] = params.c[i] + std::pow(params.L[i], -ib) * std::pow(x[i], ib) - price -
                   x[i] * dprice;
        }
        return F;
    };
    p.eval_JF = [params, check_domain](const Vector& x) -> Matrix {
        const double Q = check_domain(x);
        const double inv_gamma = 1.0 / params.gamma;
        const double price = std::pow(params.demand / Q, inv_gamma);
        const double dprice = -inv_gamma * price / Q;
        const double d2price = inv_gamma * (inv_gamma + 1.0) * price / (Q * Q);
        const Eigen::Index n = x.size();
        Matrix J(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ib = 1.0 / params.beta[i];
            for (Eigen::Index j = 0; j < n; ++j) J(i, j) = -dprice - x[i] * d2price;
            J(i, i) += ib * std::pow(params.L[i], -ib) * std::pow(x[i], ib - 1.0) - dprice;
        }
        return J;
    };
    return p;
}

NcpProblem hp_hard(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("hp_hard: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t stream = un << 8;
    Matrix A(n, n);
    Matrix B = Matrix::Zero(n, n);
    Vector D(n);
    Vector q(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = uniform(-5.0, 5.0, seed, stream | 1, i * un + j);
        for (int j = i + 1; j < n; ++j) {
            const double b = uniform(-5.0, 5.0, seed, stream | 2, i * un + j);
            B(i, j) = b;
            B(j, i) = -b;
        }
        D[i] = uniform(0.0, 0.3, seed, stream | 3, i);
        q[i] = uniform(-500.0, 500.0, seed, stream | 4, i);
    }
    Matrix M = A.transpose() * A + B;
    M.diagonal() += D;
    auto p = affine_problem("hphard:" + std::to_string(n) + ":" + std::to_string(seed),
                            std::move(M), std::move(q));
    return p;
}

NcpProblem scalable_monotone(int n) {
    if (n < 2) throw std::invalid_argument("scalable_monotone: n must be at least 2");
    NcpProblem p;
    p.name = "monotone:" + std::to_string(n);
    p.n = n;
    p.eval_F = [](const Vector& x) -> Vector {
        const Eigen::Index m = x.size();
        Vector F(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double v = 4.0 * x[i] + std::atan(x[i]) - 1.0;
            if (i > 0) v -= x[i - 1];
            if (i + 1 < m) v -= x[i + 1];
            F[i] = v;
        }
        return F;
    };
    p.eval_JF = [](const Vector& x) -> Matrix {
        const Eigen::Index m = x.size();
        Matrix J = Matrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            J(i, i) = 4.0 + 1.0 / (1.0 + x[i] * x[i]);
            if (i > 0) J(i, i - 1) = -1.0;
            if (i + 1 < m) J(i, i + 1) = -1.0;
        }
        return J;
    };
    return p;
}

LinearSpdInstance linear_spd(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("linear_spd: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t stream = (un << 8) | 0x80;
    Matrix A(n, n);
    Vector q(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = uniform(-1.0, 1.0, seed, stream | 1, i * un + j);
        q[i] = uniform(-2.0, 2.0, seed, stream | 2, i);
    }
    Matrix M = A.transpose() * A + Matrix::Identity(n, n);

    LinearSpdInstance inst;
    inst.lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(M, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
    if (n <= 12) {
        auto sols = solve_lcp_enumeration(M, q, 1e-12);
        if (sols.size() != 1) {
            throw std::logic_error("linear_spd: positive definite LCP without a unique solution");
        }
        inst.solution = sols.front();
    }
    inst.problem = affine_problem("linspd:" + std::to_string(n) + ":" + std::to_string(seed),
                                  std::move(M), std::move(q));
    if (inst.solution) inst.problem.known_solutions = {*inst.solution};
    self_check(inst.problem);
    return inst;
}

std::vector<Vector> solve_lcp_enumeration(const Matrix& M, const Vector& q, double tol) {
    const auto n = static_cast<int>(q.size());
    if (n > 20) throw std::invalid_argument("solve_lcp_enumeration: n > 20 is too large");
    if (M.rows() != n || M.cols() != n) throw std::invalid_argument("solve_lcp_enumeration: shape");

    std::vector<Vector> found;
    std::vector<int> basic;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        // basic: components with x_i free and w_i = (M x + q)_i = 0.
        basic.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) basic.push_back(i);
        Vector x = Vector::Zero(n);
        if (!basic.empty()) {
            const auto k = static_cast<Eigen::Index>(basic.size());
            Matrix Mb(k, k);
            Vector qb(k);
            for (Eigen::Index a = 0; a < k; ++a) {
                qb[a] = q[basic[a]];
                for (Eigen::Index b = 0; b < k; ++b) Mb(a, b) = M(basic[a], basic[b]);
            }
            Eigen::FullPivLU<Matrix> lu(Mb);
            if (!lu.isInvertible()) continue;
            const Vector xb = lu.solve(-qb);
            for (Eigen::Index a = 0; a < k; ++a) x[basic[a]] = xb[a];
        }
        if (x.minCoeff() < -tol) continue;
        const Vector w = M * x + q;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            if (!(mask & (1u << i))) ok = w[i] >= -tol;
        if (!ok) continue;
        x = x.cwiseMax(0.0);
        bool duplicate = false;
        for (const auto& s : found) duplicate = duplicate || (s - x).norm() <= 1e-9;
        if (!duplicate) found.push_back(x);
    }
    return found;
}

}  // namespace ncps
