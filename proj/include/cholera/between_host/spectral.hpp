#pragma once

#include "cholera/between_host/model.hpp"

#include <vector>

namespace cholera::between_host {

/// Real root of G(lambda) = 1. G is strictly decreasing, so the root is
/// positive iff R0 > 1. Throws NumericalError when no bracket is found
/// (e.g. both transmission rates zero).
double dfe_spectral_root(const Params& p, const numerics::QuadratureSpec& spec = {});

/// RHS - 1 of the characteristic equation at the endemic state. The
/// omega-dependent exponentials that multiply the scalar V-coupling are taken
/// at omega0. Throws ValidationError without an endemic state and
/// NumericalError within 1e-8 of a pole (-mu1, -sigma, -(rho + mu3)).
double endemic_char_residual(double lambda, const Params& p,
                             const numerics::QuadratureSpec& spec = {});

/// LHS - RHS of the reduced equation for rho = 0, beta_e = 0, g = 1:
///   (lambda + mu1 + K)/(lambda + mu1) - S* int beta_h P pi e^{-lambda omega}.
/// Equals minus the general residual in that case.
double endemic_char_residual_reduced(double lambda, const Params& p,
                                     const numerics::QuadratureSpec& spec = {});

bool is_reduced_case(const Params& p);

struct ResidualScan {
    double lo = 0.0, hi = 50.0, step = 0.01;
    std::vector<double> lambda, residual;
    std::vector<double> roots;  // refined sign changes
    double min_abs_residual = 0.0;
};

/// Samples the general residual on [lo, hi] and refines every sign change.
ResidualScan scan_endemic_residual(const Params& p, double lo = 0.0, double hi = 50.0,
                                   double step = 0.01, const numerics::QuadratureSpec& spec = {});

}  // namespace cholera::between_host
