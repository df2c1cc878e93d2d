#pragma once

#include "cholera/within_host.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cholera::between_host {

/// A rate or load that depends on immune status omega.
class Coefficient {
public:
    using Fn = std::function<double(double)>;

    Coefficient() : Coefficient(constant(0.0)) {}
    Coefficient(std::string description, Fn f) : desc_(std::move(description)), f_(std::move(f)) {}

    static Coefficient constant(double c);
    /// a + b omega
    static Coefficient linear(double a, double b);
    /// a exp(b omega)
    static Coefficient exponential(double a, double b);
    /// Piecewise-linear interpolation; x strictly increasing, evaluation
    /// outside [x.front(), x.back()] throws.
    static Coefficient table(std::vector<double> x, std::vector<double> y);

    double operator()(double omega) const { return f_(omega); }
    const std::string& description() const { return desc_; }

private:
    std::string desc_;
    Fn f_;
};

/// The linkage to the within-host model: P(omega) = P+(omega) on the
/// infected branch, g(omega) = kappa P+(omega) - c omega, omega0 = W_fold.
struct WithinHostLink {
    Coefficient P;
    Coefficient g;
    double omega0 = 0.0;
};
WithinHostLink within_host_link(const within_host::Params& p);

}  // namespace cholera::between_host
