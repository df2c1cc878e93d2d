#pragma once

#include "cholera/between_host/coefficients.hpp"
#include "cholera/numerics/quadrature.hpp"

#include <array>
#include <optional>
#include <vector>

namespace cholera::between_host {

/// Rates of the immune-status-structured epidemic
///
///   S' = r - mu1 S - S int beta_h P I - beta_e S B + rho V
///   I_t + (g I)_omega = -mu2 I,   g(0) I(t,0) = S int beta_h P I + beta_e S B
///   V' = g(omega0) I(t,omega0) - (rho + mu3) V
///   B' = int xi P I - sigma B
///
/// All omega-integrals run over [0, omega0].
struct Params {
    double r = 1.0;
    double mu1 = 0.1;
    double mu3 = 0.1;
    double beta_h = 0.2;
    double beta_e = 0.0;
    double rho = 0.0;
    double sigma = 0.5;
    double omega0 = 5.0;
    double a_bar = 30.0;  // maximal environmental age, renewal form only

    Coefficient mu2 = Coefficient::constant(0.1);
    Coefficient xi = Coefficient::constant(0.0);
    Coefficient P = Coefficient::constant(1.0);
    Coefficient g = Coefficient::constant(1.0);

    /// Throws ValidationError naming the offending field. g must be positive
    /// and mu2, xi, P non-negative and finite at 257 sample points.
    void validate() const;
};

/// Coefficients and path integrals at the nodes of a composite rule on
/// [0, omega0]:
///   M(omega)  = int_0^omega mu2/g      (log-survival)
///   G(omega)  = int_0^omega 1/g        (time since infection)
///   pi(omega) = exp(-M(omega)) / g(omega)
struct OmegaTable {
    std::vector<double> omega, weight;
    std::vector<double> P, g, mu2, xi, M, G, pi;

    std::size_t size() const { return omega.size(); }
    double integrate(const std::vector<double>& f) const;
};
OmegaTable tabulate(const Params& p, const numerics::QuadratureSpec& spec = {});

/// Path integrals int_a^b f by composite Simpson with `panels` panels.
double log_survival(double a, double b, const Params& p, std::size_t panels = 64);
double immune_time(double omega, const Params& p, std::size_t panels = 64);

/// pi(omega) = exp(-int_0^omega mu2/g) / g(omega), 0 <= omega <= omega0.
double survival_pi(double omega, const Params& p, std::size_t panels = 64);

/// Basic reproduction number (direct plus environmental term).
double r0(const Params& p, const numerics::QuadratureSpec& spec = {});

/// Characteristic function of the linearisation at the disease-free state;
/// G(0) = R0. Requires lambda > -sigma when beta_e > 0.
double dfe_char_G(double lambda, const Params& p, const numerics::QuadratureSpec& spec = {});
double dfe_char_G(double lambda, const Params& p, const OmegaTable& table);

struct EndemicEquilibrium {
    double S = 0.0;
    double I0 = 0.0;  // I*(0)
    double V = 0.0;
    double B = 0.0;
    double R0 = 0.0;
    double K = 0.0;   // int beta_h P I*
    std::vector<double> omega, I;  // I* at the table nodes

    /// I*(omega) = I*(0) g(0) pi(omega)
    double density(double omega, const Params& p) const;
};

/// Unique positive endemic state, or nullopt when R0 <= 1.
std::optional<EndemicEquilibrium> endemic_equilibrium(const Params& p,
                                                      const numerics::QuadratureSpec& spec = {});

/// Residuals of the five stationarity equations (S, transport, boundary,
/// V, B). The transport residual is the largest |(g I)' + mu2 I| over the
/// interior nodes by central differences.
std::array<double, 5> endemic_residuals(const Params& p, const EndemicEquilibrium& eq,
                                        const numerics::QuadratureSpec& spec = {});

}  // namespace cholera::between_host
