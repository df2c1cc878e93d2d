#include "cholera/between_host/renewal.hpp"

#include "cholera/numerics/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace cholera::between_host {

ImmuneClock::ImmuneClock(const Params& p, int steps) : p_(p) {
    theta_end_ = immune_time(p.omega0, p, 256);
    h_ = theta_end_ / steps;
    const auto clamp = [&p](double w) { return std::clamp(w, 0.0, p.omega0); };
    auto rhs = [&](double w) { return std::array<double, 2>{p.g(clamp(w)), p.mu2(clamp(w))}; };
    w_.resize(steps + 1);
    m_.resize(steps + 1);
    w_[0] = m_[0] = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double w = w_[i];
        const auto k1 = rhs(w);
        const auto k2 = rhs(w + 0.5 * h_ * k1[0]);
        const auto k3 = rhs(w + 0.5 * h_ * k2[0]);
        const auto k4 = rhs(w + h_ * k3[0]);
        w_[i + 1] = w + h_ / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        m_[i + 1] = m_[i] + h_ / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }
    dw_.resize(steps + 1);
    dm_.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        const auto d = rhs(w_[i]);
        dw_[i] = d[0];
        dm_[i] = d[1];
    }
}

double ImmuneClock::interp(const std::vector<double>& y, const std::vector<double>& dy,
                           double theta) const {
    if (theta < 0.0 || theta > theta_end_ * (1.0 + 1e-12))
        throw ValidationError("theta", fmt::format("{} outside [0, {}]", theta, theta_end_));
    const std::size_t last = y.size() - 1;
    const std::size_t i = std::min(static_cast<std::size_t>(theta / h_), last - 1);
    const double s = (theta - h_ * static_cast<double>(i)) / h_;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y[i] + (s3 - 2 * s2 + s) * h_ * dy[i] +
           (-2 * s3 + 3 * s2) * y[i + 1] + (s3 - s2) * h_ * dy[i + 1];
}

double ImmuneClock::omega(double theta) const {
    return std::clamp(interp(w_, dw_, theta), 0.0, p_.omega0);
}

double ImmuneClock::log_survival(double theta) const { return interp(m_, dm_, theta); }

RenewalKernel::RenewalKernel(const Params& p, std::size_t inner_panels)
    : p_(p), clock_(p), inner_panels_(inner_panels) {}

double RenewalKernel::infectivity(double theta, double weight) const {
    const double w = clock_.omega(theta);
    return weight * p_.P(w) * std::exp(-clock_.log_survival(theta));
}

double RenewalKernel::direct(double theta) const {
    if (theta < 0.0 || theta > clock_.horizon()) return 0.0;
    return infectivity(theta, p_.beta_h);
}

double RenewalKernel::environmental(double theta) const {
    if (p_.beta_e == 0.0) return 0.0;
    const double lo = std::max(0.0, theta - clock_.horizon());
    const double hi = std::min(theta, p_.a_bar);
    if (!(hi > lo)) return 0.0;
    auto integrand = [&](double a) {
        const double s = std::clamp(theta - a, 0.0, clock_.horizon());
        return std::exp(-p_.sigma * a) * infectivity(s, p_.xi(clock_.omega(s)));
    };
    return p_.beta_e *
           numerics::quadrature(integrand, lo, hi, {numerics::QuadratureRule::Simpson, inner_panels_});
}

double RenewalKernel::integral(std::size_t panels) const {
    const numerics::QuadratureSpec spec{numerics::QuadratureRule::Simpson, panels};
    const double G0 = clock_.horizon();
    double total = numerics::quadrature([&](double t) { return direct(t); }, 0.0, G0, spec);
    std::vector<double> breaks{0.0, std::min(G0, p_.a_bar), std::max(G0, p_.a_bar), window()};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i])
            total += numerics::quadrature([&](double t) { return environmental(t); }, breaks[i],
                                          breaks[i + 1], spec);
    return total;
}

double renewal_kernel_A(double theta, const Params& p) {
    p.validate();
    return RenewalKernel(p)(theta);
}

double renewal_identity(const Params& p) {
    p.validate();
    const auto t = tabulate(p, {numerics::QuadratureRule::Simpson, 256});
    double inv_s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        inv_s += t.weight[i] * t.P[i] * t.pi[i] * (p.beta_h + p.beta_e * t.xi[i] / p.sigma);
    return RenewalKernel(p).integral() / inv_s;
}

RenewalRun simulate_renewal(const Params& p, const RenewalHistory& history, double S0,
                            double t_max, const RenewalOptions& opt) {
    p.validate();
    if (!(opt.h > 0.0)) throw ValidationError("renewal.h", "must be positive");
    if (!(t_max > 0.0)) throw ValidationError("run.t_max", "must be positive");
    if (S0 < 0.0) throw ValidationError("renewal.S0", "must be non-negative");
    if (!history.F) throw ValidationError("renewal.history", "force-of-infection history missing");

    const RenewalKernel A(p, opt.kernel_panels);
    const double L = A.window();
    const double ratio = L / opt.h;
    const long M = std::lround(ratio);
    if (M < 1 || std::abs(ratio - static_cast<double>(M)) > 1e-9 * ratio)
        throw ValidationError("renewal.h", fmt::format("memory window {} is not a multiple of h={}", L, opt.h));
    const long steps = static_cast<long>(std::ceil(t_max / opt.h - 1e-9));

    // Kernel on the memory grid; a node on the K_h cut-off takes the mean of
    // the one-sided limits so the trapezoid sum stays second order.
    std::vector<double> a(M + 1);
    const double G0 = A.infection_horizon();
    for (long k = 0; k <= M; ++k) {
        const double th = opt.h * static_cast<double>(k);
        a[k] = A(th);
        if (std::abs(th - G0) <= 1e-9 * std::max(1.0, G0)) a[k] -= 0.5 * A.direct(th);
    }

    // J = S F (incidence), offset by M so J[M + n] is time n h.
    std::vector<double> J(M + steps + 1, 0.0);
    for (long k = 1; k <= M; ++k) {
        const double s = -opt.h * static_cast<double>(k);
        const double Sh = history.S ? history.S(s) : S0;
        J[M - k] = Sh * history.F(s);
    }
    auto memory = [&](long n) {  // sum over k >= 1 for time index n
        double sum = 0.0;
        for (long k = 1; k <= M; ++k) sum += (k == M ? 0.5 : 1.0) * a[k] * J[M + n - k];
        return opt.h * sum;
    };
    const double c = 0.5 * opt.h * a[0];
    auto close = [&](double rest, double S) {
        const double d = 1.0 - c * S;
        if (!(d > 0.0)) throw NumericalError("simulate_renewal: implicit incidence term not solvable; reduce h");
        return rest / d;
    };

    RenewalRun run;
    run.window = L;
    double S = S0;
    double F = close(memory(0), S);
    J[M] = S * F;
    run.t.push_back(0.0);
    run.S.push_back(S);
    run.F.push_back(F);
    for (long n = 0; n < steps; ++n) {
        const double fn = p.r - p.mu1 * S - S * F;
        const double rest = memory(n + 1);
        const double S_pred = S + opt.h * fn;
        const double F_pred = close(rest, S_pred);
        S += 0.5 * opt.h * (fn + p.r - p.mu1 * S_pred - S_pred * F_pred);
        F = close(rest, S);
        J[M + n + 1] = S * F;
        run.t.push_back(opt.h * static_cast<double>(n + 1));
        run.S.push_back(S);
        run.F.push_back(F);
    }
    return run;
}

}  // namespace cholera::between_host
