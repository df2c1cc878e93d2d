#pragma once

#include "cholera/between_host/model.hpp"

#include <functional>
#include <vector>

namespace cholera::between_host {

/// Immune status and survival as functions of time since infection theta,
/// from dw/dtheta = g(w), dM/dtheta = mu2(w), tabulated by RK4 and read back
/// by cubic Hermite interpolation. Defined on [0, G(omega0)].
class ImmuneClock {
public:
    explicit ImmuneClock(const Params& p, int steps = 4000);

    double horizon() const { return theta_end_; }  // G(omega0)
    double omega(double theta) const;
    double log_survival(double theta) const;       // int_0^theta mu2(w(s)) ds

private:
    double interp(const std::vector<double>& y, const std::vector<double>& dy, double theta) const;

    Params p_;
    double theta_end_ = 0.0;
    double h_ = 0.0;
    std::vector<double> w_, dw_, m_, dm_;
};

/// Infectivity kernel A = K_h + K_e of the renewal form, indexed by time
/// since infection:
///   K_h(theta) = beta_h P(w(theta)) exp(-int mu2), theta <= G(omega0)
///   K_e(theta) = beta_e int e^{-sigma a} xi P exp(-int mu2) |_{theta - a} da
///                over a in [max(0, theta - G(omega0)), min(theta, a_bar)]
/// Supported on [0, a_bar + G(omega0)].
class RenewalKernel {
public:
    explicit RenewalKernel(const Params& p, std::size_t inner_panels = 64);

    double window() const { return p_.a_bar + clock_.horizon(); }
    double infection_horizon() const { return clock_.horizon(); }
    double direct(double theta) const;
    double environmental(double theta) const;
    double operator()(double theta) const { return direct(theta) + environmental(theta); }

    /// int_0^window A, split at the kernel's break points.
    double integral(std::size_t panels = 256) const;

private:
    double infectivity(double theta, double shed_or_contact) const;

    Params p_;
    ImmuneClock clock_;
    std::size_t inner_panels_;
};

/// Pointwise A(theta); builds the kernel on every call.
double renewal_kernel_A(double theta, const Params& p);

/// S* int A, which equals 1 at the endemic state up to the e^{-sigma a_bar}
/// truncation of environmental ages.
double renewal_identity(const Params& p);

struct RenewalHistory {
    std::function<double(double)> F;  // force of infection on [-window, 0)
    std::function<double(double)> S;  // susceptibles there; empty: constant S0
};

struct RenewalOptions {
    double h = 0.01;
    std::size_t kernel_panels = 64;
};

struct RenewalRun {
    double window = 0.0;
    std::vector<double> t, S, F;
};

/// dS/dt = r - mu1 S - S F,  F(t) = int_0^window A(theta) S(t-theta) F(t-theta) dtheta.
/// Trapezoid memory sum with the theta = 0 term solved implicitly; Heun for S.
/// The window must be an integer multiple of h (ValidationError otherwise).
RenewalRun simulate_renewal(const Params& p, const RenewalHistory& history, double S0,
                            double t_max, const RenewalOptions& options = {});

}  // namespace cholera::between_host
