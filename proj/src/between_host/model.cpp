#include "cholera/between_host/model.hpp"

#include "cholera/numerics/errors.hpp"

#include <cmath>

#include <fmt/format.h>

namespace cholera::between_host {

void Params::validate() const {
    const std::pair<const char*, double> positive[] = {
        {"r", r}, {"mu1", mu1}, {"mu3", mu3}, {"sigma", sigma}, {"omega0", omega0}, {"a_bar", a_bar},
    };
    for (const auto& [name, v] : positive)
        if (!std::isfinite(v) || !(v > 0.0))
            throw ValidationError(std::string("between_host.") + name, "must be positive and finite");
    const std::pair<const char*, double> nonneg[] = {
        {"beta_h", beta_h}, {"beta_e", beta_e}, {"rho", rho}};
    for (const auto& [name, v] : nonneg)
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError(std::string("between_host.") + name, "must be non-negative and finite");

    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double w = omega0 * i / samples;
        const double gv = g(w);
        if (!std::isfinite(gv) || !(gv > 0.0))
            throw ValidationError("functions.g", fmt::format("g({}) = {} is not positive", w, gv));
        const std::pair<const char*, double> vals[] = {{"mu2", mu2(w)}, {"xi", xi(w)}, {"P", P(w)}};
        for (const auto& [name, v] : vals)
            if (!std::isfinite(v) || v < 0.0)
                throw ValidationError(std::string("functions.") + name,
                                      fmt::format("value {} at omega={} is negative or not finite", v, w));
    }
}

double OmegaTable::integrate(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += weight[i] * f[i];
    return s;
}

double log_survival(double a, double b, const Params& p, std::size_t panels) {
    return numerics::quadrature([&p](double w) { return p.mu2(w) / p.g(w); }, a, b,
                                {numerics::QuadratureRule::Simpson, panels});
}

namespace {

void check_omega(double omega, const Params& p) {
    if (omega < 0.0 || omega > p.omega0 * (1.0 + 1e-12))
        throw ValidationError("omega", fmt::format("{} outside [0, omega0={}]", omega, p.omega0));
}

}  // namespace

double immune_time(double omega, const Params& p, std::size_t panels) {
    check_omega(omega, p);
    return numerics::quadrature([&p](double w) { return 1.0 / p.g(w); }, 0.0, omega,
                                {numerics::QuadratureRule::Simpson, panels});
}

double survival_pi(double omega, const Params& p, std::size_t panels) {
    check_omega(omega, p);
    const double gv = p.g(omega);
    if (!(gv > 0.0)) throw NumericalError(fmt::format("g vanishes at omega={}", omega));
    return std::exp(-log_survival(0.0, omega, p, panels)) / gv;
}

OmegaTable tabulate(const Params& p, const numerics::QuadratureSpec& spec) {
    const auto nodes = numerics::quadrature_nodes(0.0, p.omega0, spec);
    OmegaTable t;
    t.omega = nodes.x;
    t.weight = nodes.w;
    const std::size_t n = t.omega.size();
    for (auto* v : {&t.P, &t.g, &t.mu2, &t.xi, &t.M, &t.G, &t.pi}) v->assign(n, 0.0);
    const numerics::QuadratureSpec sub{numerics::QuadratureRule::Simpson, 8};
    for (std::size_t i = 0; i < n; ++i) {
        const double w = t.omega[i];
        t.P[i] = p.P(w);
        t.g[i] = p.g(w);
        t.mu2[i] = p.mu2(w);
        t.xi[i] = p.xi(w);
        if (i > 0) {
            const double a = t.omega[i - 1];
            t.M[i] = t.M[i - 1] + numerics::quadrature([&p](double x) { return p.mu2(x) / p.g(x); }, a, w, sub);
            t.G[i] = t.G[i - 1] + numerics::quadrature([&p](double x) { return 1.0 / p.g(x); }, a, w, sub);
        }
        t.pi[i] = std::exp(-t.M[i]) / t.g[i];
    }
    return t;
}

namespace {

struct Integrals {
    double direct = 0.0;       // int beta_h P pi e^{-lambda G}
    double environment = 0.0;  // int xi P pi e^{-lambda G}
};

Integrals weighted_integrals(const Params& p, const OmegaTable& t, double lambda) {
    Integrals out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double base = t.weight[i] * t.P[i] * t.pi[i] * std::exp(-lambda * t.G[i]);
        out.direct += p.beta_h * base;
        out.environment += t.xi[i] * base;
    }
    return out;
}

}  // namespace

double r0(const Params& p, const numerics::QuadratureSpec& spec) {
    p.validate();
    const auto t = tabulate(p, spec);
    const auto in = weighted_integrals(p, t, 0.0);
    return (p.r / p.mu1) * (in.direct + p.beta_e * in.environment / p.sigma);
}

double dfe_char_G(double lambda, const Params& p, const OmegaTable& table) {
    if (p.beta_e > 0.0 && !(lambda > -p.sigma))
        throw ValidationError("lambda", "must exceed -sigma when beta_e > 0");
    const auto in = weighted_integrals(p, table, lambda);
    const double env = p.beta_e > 0.0 ? p.beta_e * in.environment / (lambda + p.sigma) : 0.0;
    return (p.r / p.mu1) * (in.direct + env);
}

double dfe_char_G(double lambda, const Params& p, const numerics::QuadratureSpec& spec) {
    p.validate();
    return dfe_char_G(lambda, p, tabulate(p, spec));
}

double EndemicEquilibrium::density(double omega, const Params& p) const {
    return I0 * p.g(0.0) * survival_pi(omega, p);
}

std::optional<EndemicEquilibrium> endemic_equilibrium(const Params& p,
                                                      const numerics::QuadratureSpec& spec) {
    p.validate();
    const auto t = tabulate(p, spec);
    const auto in = weighted_integrals(p, t, 0.0);
    const double inv_s = in.direct + p.beta_e * in.environment / p.sigma;
    EndemicEquilibrium eq;
    eq.R0 = (p.r / p.mu1) * inv_s;
    if (!(eq.R0 > 1.0)) return std::nullopt;

    const double g0 = t.g.front();
    const double g_end = t.g.back();
    const double pi_end = t.pi.back();
    const double waning = p.rho * g_end * pi_end / (p.rho + p.mu3);
    if (!(waning < 1.0)) throw NumericalError("endemic_equilibrium: immunity-loss factor >= 1");

    eq.S = 1.0 / inv_s;
    eq.I0 = p.r * (1.0 - 1.0 / eq.R0) / (g0 * (1.0 - waning));
    eq.B = eq.I0 * g0 * in.environment / p.sigma;
    eq.V = g_end * eq.I0 * g0 * pi_end / (p.rho + p.mu3);
    eq.omega = t.omega;
    eq.I.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) eq.I[i] = eq.I0 * g0 * t.pi[i];
    eq.K = eq.I0 * g0 * in.direct;
    return eq;
}

std::array<double, 5> endemic_residuals(const Params& p, const EndemicEquilibrium& eq,
                                        const numerics::QuadratureSpec& spec) {
    const auto t = tabulate(p, spec);
    std::vector<double> I(t.size()), hPI(t.size()), xPI(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        I[i] = eq.I0 * t.g.front() * t.pi[i];
        hPI[i] = p.beta_h * t.P[i] * I[i];
        xPI[i] = t.xi[i] * t.P[i] * I[i];
    }
    const double K = t.integrate(hPI);
    std::array<double, 5> res{};
    res[0] = p.r - p.mu1 * eq.S - eq.S * K - p.beta_e * eq.S * eq.B + p.rho * eq.V;

    const double h = 1e-4 * p.omega0;
    double transport = 0.0;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double w = t.omega[i];
        const double flux_p = p.g(w + h) * eq.density(w + h, p);
        const double flux_m = p.g(w - h) * eq.density(w - h, p);
        const double r = (flux_p - flux_m) / (2.0 * h) + p.mu2(w) * eq.density(w, p);
        transport = std::max(transport, std::abs(r));
    }
    res[1] = transport;
    res[2] = t.g.front() * eq.I0 - eq.S * K - p.beta_e * eq.S * eq.B;
    res[3] = t.g.back() * I.back() - (p.rho + p.mu3) * eq.V;
    res[4] = t.integrate(xPI) - p.sigma * eq.B;
    return res;
}

}  // namespace cholera::between_host
