#include "ncps/kernels.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ncps {

namespace {

[[noreturn]] void out_of_range(const char* what, double y) {
    std::ostringstream os;
    os << what << ": argument " << y << " outside the range of psi";
    throw std::domain_error(os.str());
}

class RationalImpl final : public KernelImpl {
public:
    double theta(double t) const override { return t >= 0.0 ? t / (t + 1.0) : t; }
    double psi(double t) const override { return t >= 0.0 ? 1.0 / (t + 1.0) : 1.0 - t; }
    double dpsi(double t) const override {
        if (t < 0.0) return -1.0;
        const double u = t + 1.0;
        return -1.0 / (u * u);
    }
    // Right derivative at the kink.
    double d2psi(double t) const override {
        if (t < 0.0) return 0.0;
        const double u = t + 1.0;
        return 2.0 / (u * u * u);
    }
    double psi_inv(double y) const override {
        if (!(y > 0.0)) out_of_range("rational psi_inv", y);
        return y <= 1.0 ? 1.0 / y - 1.0 : 1.0 - y;
    }
};

class ExponentialImpl final : public KernelImpl {
public:
    explicit ExponentialImpl(double rate) : rate_(rate) {}
    double theta(double t) const override { return -std::expm1(-rate_ * t); }
    double psi(double t) const override { return std::exp(-rate_ * t); }
    double dpsi(double t) const override { return -rate_ * std::exp(-rate_ * t); }
    double d2psi(double t) const override { return rate_ * rate_ * std::exp(-rate_ * t); }
    double psi_inv(double y) const override {
        if (!(y > 0.0)) out_of_range("exponential psi_inv", y);
        return -std::log(y) / rate_;
    }

private:
    double rate_;
};

// psi(x) = (c1 x + 1)^(-p), p = 1/(lambda - 1). With `extend`, psi is continued
// affinely below x0 = -1/(2 c1) so that it is defined on all of R.
class PowerImpl final : public KernelImpl {
public:
    PowerImpl(double lambda, double c1, bool extend)
        : p_(1.0 / (lambda - 1.0)), c1_(c1), extend_(extend), x0_(-0.5 / c1) {
        psi0_ = std::pow(2.0, p_);
        dpsi0_ = -p_ * c1_ * std::pow(2.0, p_ + 1.0);
    }

    double theta(double t) const override { return 1.0 - psi(t); }

    double psi(double t) const override {
        if (extend_ && t < x0_) return psi0_ + dpsi0_ * (t - x0_);
        const double u = c1_ * t + 1.0;
        if (!(u > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return p_ == 1.0 ? 1.0 / u : std::pow(u, -p_);
    }
    double dpsi(double t) const override {
        if (extend_ && t < x0_) return dpsi0_;
        const double u = c1_ * t + 1.0;
        if (!(u > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return -p_ * c1_ * std::pow(u, -p_ - 1.0);
    }
    double d2psi(double t) const override {
        if (extend_ && t < x0_) return 0.0;
        const double u = c1_ * t + 1.0;
        if (!(u > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return p_ * (p_ + 1.0) * c1_ * c1_ * std::pow(u, -p_ - 2.0);
    }
    double psi_inv(double y) const override {
        if (!(y > 0.0)) out_of_range("power psi_inv", y);
        if (extend_ && y > psi0_) return x0_ + (y - psi0_) / dpsi0_;
        const double u = p_ == 1.0 ? 1.0 / y : std::pow(y, -1.0 / p_);
        return (u - 1.0) / c1_;
    }

private:
    double p_;
    double c1_;
    bool extend_;
    double x0_;
    double psi0_ = 0.0;
    double dpsi0_ = 0.0;
};

class CustomImpl final : public KernelImpl {
public:
    explicit CustomImpl(SmoothingKernel::Functions fns) : fns_(std::move(fns)) {}
    double theta(double t) const override {
        return fns_.theta ? fns_.theta(t) : 1.0 - fns_.psi(t);
    }
    double psi(double t) const override { return fns_.psi(t); }
    double dpsi(double t) const override { return fns_.dpsi(t); }
    double d2psi(double t) const override { return fns_.d2psi(t); }
    double psi_inv(double y) const override { return fns_.psi_inv(y); }

private:
    SmoothingKernel::Functions fns_;
};

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double parse_number(std::string_view text, std::string_view selector) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("bad number in kernel selector '" + std::string(selector) +
                                    "'");
    }
    return value;
}

}  // namespace

SmoothingKernel::SmoothingKernel(std::string name, KernelFamily family, Smoothness smoothness,
                                 std::shared_ptr<const KernelImpl> impl)
    : name_(std::move(name)), family_(family), smoothness_(smoothness), impl_(std::move(impl)) {}

void SmoothingKernel::certify_dominance() {
    // theta >= theta_rational on t >= 0  <=>  psi(t) <= 1/(t+1).
    bool ok = psi(0.0) <= 1.0;
    for (int k = -6 * 64; ok && k <= 6 * 64; ++k) {
        const double t = std::pow(10.0, k / 64.0);
        ok = psi(t) <= 1.0 / (t + 1.0);
    }
    dominates_rational_ = ok;
}

const SmoothingKernel& SmoothingKernel::c2_branch() const {
    return c2_branch_ ? *c2_branch_ : *this;
}

double SmoothingKernel::theta_inv(double v) const {
    if (!(v < 1.0)) {
        std::ostringstream os;
        os << "theta_inv: argument " << v << " outside (-inf, 1)";
        throw std::domain_error(os.str());
    }
    return psi_inv(1.0 - v);
}

SmoothingKernel SmoothingKernel::custom(std::string name, Functions fns, Smoothness smoothness,
                                        std::optional<double> kink) {
    if (!fns.psi || !fns.dpsi || !fns.d2psi || !fns.psi_inv) {
        throw std::invalid_argument("custom kernel requires psi, dpsi, d2psi and psi_inv");
    }
    SmoothingKernel k(std::move(name), KernelFamily::custom, smoothness,
                      std::make_shared<CustomImpl>(std::move(fns)));
    k.kink_ = kink;
    k.certify_dominance();
    return k;
}

SmoothingKernel make_power_kernel(double lambda, double c1, bool extend, std::string name) {
    SmoothingKernel k(std::move(name), KernelFamily::power,
                      extend ? Smoothness::piecewise_c2 : Smoothness::c2_everywhere,
                      std::make_shared<PowerImpl>(lambda, c1, extend));
    if (extend) {
        k.kink_ = -0.5 / c1;
        k.c2_branch_ = std::make_shared<SmoothingKernel>(
            make_power_kernel(lambda, c1, false, k.name_ + "-c2"));
    }
    k.certify_dominance();
    return k;
}

SmoothingKernel make_rational() {
    SmoothingKernel k("rational", KernelFamily::rational, Smoothness::piecewise_c2,
                      std::make_shared<RationalImpl>());
    k.kink_ = 0.0;
    k.c2_branch_ = std::make_shared<SmoothingKernel>(make_power_kernel(2.0, 1.0, false, "rational-c2"));
    k.certify_dominance();
    return k;
}

SmoothingKernel make_exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential kernel rate must be positive");
    SmoothingKernel k(rate == 1.0 ? std::string("exp") : "phi:1:" + format_number(rate),
                      KernelFamily::exponential, Smoothness::c2_everywhere,
                      std::make_shared<ExponentialImpl>(rate));
    k.rate_ = rate;
    k.certify_dominance();
    return k;
}

SmoothingKernel make_phi_lambda(const PhiLambdaParams& params) {
    if (!(params.lambda >= 1.0)) throw std::invalid_argument("phi_lambda requires lambda >= 1");
    if (params.lambda == 1.0) {
        if (!(params.d > 0.0)) throw std::invalid_argument("phi_lambda requires d > 0");
        return make_exponential(params.d);
    }
    if (!(params.c1 > 0.0)) throw std::invalid_argument("phi_lambda requires c1 > 0");
    std::string name = "phi:" + format_number(params.lambda);
    if (params.c1 != 1.0) name += ":" + format_number(params.c1);
    return make_power_kernel(params.lambda, params.c1, true, std::move(name));
}

SmoothingKernel parse_kernel(std::string_view selector) {
    if (selector == "rational") return make_rational();
    if (selector == "exp") return make_exponential();
    if (selector.substr(0, 4) == "phi:") {
        std::string_view rest = selector.substr(4);
        const auto colon = rest.find(':');
        PhiLambdaParams params;
        params.lambda = parse_number(rest.substr(0, colon), selector);
        if (colon != std::string_view::npos) {
            const double extra = parse_number(rest.substr(colon + 1), selector);
            params.c1 = extra;
            params.d = extra;
        }
        return make_phi_lambda(params);
    }
    throw std::invalid_argument("unknown kernel selector '" + std::string(selector) + "'");
}

double theta_r(const SmoothingKernel& kernel, double t, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("theta_r: r must be positive");
    return kernel.theta(t / r);
}

HaReport check_Ha(const SmoothingKernel& kernel, double a, double s_max) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("check_Ha: a must lie in (0, 1)");
    if (!(s_max > 0.0)) throw std::invalid_argument("check_Ha: s_max must be positive");

    constexpr int per_decade = 64;
    constexpr int decades = 6;
    std::vector<double> grid;
    for (int k = decades * per_decade; k >= 0; --k) {
        grid.push_back(s_max * std::pow(10.0, -static_cast<double>(k) / per_decade));
    }

    HaReport report{a, s_max, false, std::nullopt, std::nullopt};
    std::optional<std::size_t> last_fail;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid[i];
        if (!(kernel.psi(s) <= 0.5 * kernel.psi(a * s))) last_fail = i;
    }
    if (!last_fail) {
        report.holds = true;
        report.holds_from = grid.front();
    } else if (grid[*last_fail] > s_max / 10.0) {
        report.violated_at = grid[*last_fail];
    } else {
        report.holds = true;
        report.holds_from = grid[*last_fail + 1];
    }
    return report;
}

}  // namespace ncps
