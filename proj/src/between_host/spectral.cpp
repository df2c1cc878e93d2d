#include "cholera/between_host/spectral.hpp"

#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace cholera::between_host {

double dfe_spectral_root(const Params& p, const numerics::QuadratureSpec& spec) {
    p.validate();
    const auto table = tabulate(p, spec);
    auto h = [&](double l) { return dfe_char_G(l, p, table) - 1.0; };
    const double h0 = h(0.0);
    if (h0 == 0.0) return 0.0;
    if (h0 > 0.0) {
        double hi = 1.0;
        for (int i = 0; h(hi) > 0.0; ++i) {
            if (i > 60) throw NumericalError("dfe_spectral_root: G stays above 1");
            hi *= 2.0;
        }
        return numerics::find_root(h, {0.0, hi}, 1e-13);
    }
    // Below zero G grows without bound toward -sigma (environmental route)
    // or -infinity (direct route only).
    double env = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) env += table.weight[i] * table.xi[i] * table.P[i];
    const bool pole = p.beta_e > 0.0 && env > 0.0;
    double lo = 0.0;
    for (int k = 1;; ++k) {
        if (k > 60) throw NumericalError("dfe_spectral_root: G never reaches 1 below zero");
        lo = pole ? -p.sigma * (1.0 - std::ldexp(1.0, -k)) : -std::ldexp(1.0, k - 1);
        const double v = h(lo);
        if (std::isfinite(v) && v > 0.0) break;
    }
    return numerics::find_root(h, {lo, 0.0}, 1e-13);
}

bool is_reduced_case(const Params& p) {
    if (p.rho != 0.0 || p.beta_e != 0.0) return false;
    for (int i = 0; i <= 64; ++i)
        if (p.g(p.omega0 * i / 64) != 1.0) return false;
    return true;
}

namespace {

void check_pole(double lambda, double pole, const char* name) {
    if (std::abs(lambda + pole) < 1e-8)
        throw NumericalError(fmt::format("lambda={} within 1e-8 of the pole at -{}", lambda, name));
}

double general_residual(double lambda, const Params& p, const OmegaTable& t,
                        const EndemicEquilibrium& eq) {
    check_pole(lambda, p.mu1, "mu1");
    if (p.beta_e > 0.0) check_pole(lambda, p.sigma, "sigma");
    if (p.rho > 0.0) check_pole(lambda, p.rho + p.mu3, "(rho + mu3)");
    double direct = 0.0, env = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double base = t.weight[i] * t.P[i] * t.pi[i] * std::exp(-lambda * t.G[i]);
        direct += p.beta_h * base;
        env += t.xi[i] * base;
    }
    const double decay_end = std::exp(-lambda * t.G.back());
    const double coupling =
        (p.rho * t.g.back() * t.pi.back() * decay_end / (lambda + p.rho + p.mu3) - 1.0) / (lambda + p.mu1);
    double rhs = eq.S * direct + coupling * eq.K;
    if (p.beta_e > 0.0) rhs += p.beta_e * eq.S * env / (lambda + p.sigma) + p.beta_e * eq.B * coupling;
    return rhs - 1.0;
}

EndemicEquilibrium require_endemic(const Params& p, const numerics::QuadratureSpec& spec) {
    auto eq = endemic_equilibrium(p, spec);
    if (!eq) throw ValidationError("between_host", "R0 <= 1: no endemic equilibrium to linearise at");
    return std::move(*eq);
}

}  // namespace

double endemic_char_residual(double lambda, const Params& p, const numerics::QuadratureSpec& spec) {
    const auto eq = require_endemic(p, spec);
    return general_residual(lambda, p, tabulate(p, spec), eq);
}

double endemic_char_residual_reduced(double lambda, const Params& p,
                                     const numerics::QuadratureSpec& spec) {
    if (!is_reduced_case(p))
        throw ValidationError("between_host", "reduced form needs rho = 0, beta_e = 0 and g = 1");
    const auto eq = require_endemic(p, spec);
    check_pole(lambda, p.mu1, "mu1");
    const auto t = tabulate(p, spec);
    double rhs = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        rhs += t.weight[i] * p.beta_h * t.P[i] * std::exp(-t.M[i] - lambda * t.omega[i]);
    return (lambda + p.mu1 + eq.K) / (lambda + p.mu1) - eq.S * rhs;
}

ResidualScan scan_endemic_residual(const Params& p, double lo, double hi, double step,
                                   const numerics::QuadratureSpec& spec) {
    if (!(hi > lo) || !(step > 0.0)) throw ValidationError("scan", "need lo < hi and step > 0");
    const auto eq = require_endemic(p, spec);
    const auto t = tabulate(p, spec);
    ResidualScan scan;
    scan.lo = lo;
    scan.hi = hi;
    scan.step = step;
    scan.min_abs_residual = std::numeric_limits<double>::infinity();
    const long n = std::lround((hi - lo) / step);
    auto f = [&](double l) { return general_residual(l, p, t, eq); };
    for (long k = 0; k <= n; ++k) {
        const double l = k == n ? hi : lo + step * static_cast<double>(k);
        const double r = f(l);
        scan.lambda.push_back(l);
        scan.residual.push_back(r);
        scan.min_abs_residual = std::min(scan.min_abs_residual, std::abs(r));
        if (k > 0) {
            const double a = scan.residual[k - 1];
            if (r == 0.0)
                scan.roots.push_back(l);
            else if (a != 0.0 && (a > 0.0) != (r > 0.0))
                scan.roots.push_back(numerics::find_root(f, {scan.lambda[k - 1], l}, 1e-12));
        } else if (r == 0.0) {
            scan.roots.push_back(l);
        }
    }
    return scan;
}

}  // namespace cholera::between_host
