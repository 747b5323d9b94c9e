#ifndef NCPS_KERNELS_HPP
#define NCPS_KERNELS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ncps {

enum class Smoothness { c2_everywhere, piecewise_c2 };

enum class KernelFamily { rational, exponential, power, custom };

/// Internal evaluation interface behind SmoothingKernel.
class KernelImpl {
public:
    virtual ~KernelImpl() = default;
    virtual double theta(double t) const = 0;
    virtual double psi(double t) const = 0;
    virtual double dpsi(double t) const = 0;
    virtual double d2psi(double t) const = 0;
    virtual double psi_inv(double y) const = 0;
};

/**
 * A smoothing kernel: an increasing theta with theta(0) = 0, theta(+inf) = 1,
 * and its complement psi = 1 - theta (decreasing, positive).
 *
 * Kernels are immutable values; copies share the underlying implementation.
 * All derivatives are analytic. psi_inv throws std::domain_error outside the
 * range of psi.
 */
class SmoothingKernel {
public:
    /// Callbacks for a user-defined kernel. theta may be left empty
    /// (defaults to 1 - psi).
    struct Functions {
        std::function<double(double)> psi;
        std::function<double(double)> dpsi;
        std::function<double(double)> d2psi;
        std::function<double(double)> psi_inv;
        std::function<double(double)> theta;
    };

    static SmoothingKernel custom(std::string name, Functions fns,
                                  Smoothness smoothness,
                                  std::optional<double> kink = std::nullopt);

    const std::string& name() const { return name_; }
    KernelFamily family() const { return family_; }
    Smoothness smoothness() const { return smoothness_; }
    /// Point where psi'' jumps, if any.
    std::optional<double> kink() const { return kink_; }

    double theta(double t) const { return impl_->theta(t); }
    double psi(double t) const { return impl_->psi(t); }
    double dpsi(double t) const { return impl_->dpsi(t); }
    double d2psi(double t) const { return impl_->d2psi(t); }
    double psi_inv(double y) const { return impl_->psi_inv(y); }
    /// Inverse of theta on (-inf, 1).
    double theta_inv(double v) const;

    /// Rate of psi(t) = exp(-rate t); only meaningful for the exponential family.
    double rate() const { return rate_; }

    /// True when theta >= t/(t+1) on t >= 0, checked on a log grid at
    /// construction with zero tolerance. Gates the x_i F_i <= r^2 bound.
    bool dominates_rational() const { return dominates_rational_; }

    /// The C2 analytic branch of the kernel: the kernel itself when it is C2
    /// everywhere, otherwise the smooth formula continued past the kink
    /// (for the rational kernel, psi(t) = 1/(t+1) on t > -1).
    const SmoothingKernel& c2_branch() const;

private:
    friend SmoothingKernel make_rational();
    friend SmoothingKernel make_exponential(double rate);
    friend SmoothingKernel make_power_kernel(double lambda, double c1, bool extend,
                                             std::string name);

    SmoothingKernel(std::string name, KernelFamily family, Smoothness smoothness,
                    std::shared_ptr<const KernelImpl> impl);
    void certify_dominance();

    std::string name_;
    KernelFamily family_;
    Smoothness smoothness_;
    std::shared_ptr<const KernelImpl> impl_;
    std::optional<double> kink_;
    double rate_ = 0.0;
    bool dominates_rational_ = false;
    std::shared_ptr<const SmoothingKernel> c2_branch_;
};

/// Parameters of the phi_lambda family solving (psi')^2 = psi psi'' / lambda.
struct PhiLambdaParams {
    double lambda = 1.0;
    double c1 = 1.0;  ///< scale of the rational-type family (lambda > 1)
    double d = 1.0;   ///< rate of the exponential member (lambda = 1)
};

/// theta(t) = t/(t+1) for t >= 0, t for t < 0.
SmoothingKernel make_rational();

/// theta(t) = 1 - exp(-rate t).
SmoothingKernel make_exponential(double rate = 1.0);

/// psi(x) = (c1 x + 1)^(-1/(lambda-1)) for lambda > 1, exp(-d x) for lambda = 1.
/// Throws std::invalid_argument for lambda < 1 or nonpositive c1/d.
SmoothingKernel make_phi_lambda(const PhiLambdaParams& params);

/// Parses "rational", "exp" or "phi:<lambda>[:<c1-or-d>]".
SmoothingKernel parse_kernel(std::string_view selector);

/// theta(t / r). Throws std::invalid_argument for r <= 0.
double theta_r(const SmoothingKernel& kernel, double t, double r);

struct HaReport {
    double a = 0.0;
    double s_max = 0.0;
    bool holds = false;
    /// Smallest grid point from which psi(s) <= psi(a s)/2 holds at every
    /// larger grid point (set when holds).
    std::optional<double> holds_from;
    /// Largest failing grid point, inside the last decade (set when violated).
    std::optional<double> violated_at;
};

/// Scans a geometric grid on [s_max 1e-6, s_max] (64 points per decade) for
/// the threshold of psi(s) <= psi(a s)/2.
HaReport check_Ha(const SmoothingKernel& kernel, double a, double s_max);

}  // namespace ncps

#endif  // NCPS_KERNELS_HPP
