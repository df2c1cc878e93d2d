#include "cholera/between_host/epidemic.hpp"

#include "cholera/numerics/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace cholera::between_host {

void Grid::validate() const {
    if (n_omega < 2) throw ValidationError("grid.n_omega", "must be at least 2");
    if (dt < 0.0 || !std::isfinite(dt)) throw ValidationError("grid.dt", "must be >= 0 and finite");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("grid.cfl", "must lie in (0, 1]");
}

StructuredState initial_state(const Params& p, int n_omega, double S0, double V0, double B0,
                              const std::function<double(double)>& phi) {
    if (n_omega < 2) throw ValidationError("grid.n_omega", "must be at least 2");
    StructuredState s{S0, V0, B0, std::vector<double>(n_omega + 1)};
    for (int j = 0; j <= n_omega; ++j) s.I[j] = phi(p.omega0 * j / n_omega);
    return s;
}

double EpidemicRun::boundary_history(double t) const {
    if (boundary_t.empty()) throw NumericalError("empty boundary history");
    if (t <= boundary_t.front()) return boundary_flux.front();
    if (t >= boundary_t.back()) return boundary_flux.back();
    const auto it = std::upper_bound(boundary_t.begin(), boundary_t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - boundary_t.begin());
    const double s = (t - boundary_t[i - 1]) / (boundary_t[i] - boundary_t[i - 1]);
    return (1.0 - s) * boundary_flux[i - 1] + s * boundary_flux[i];
}

namespace {

double trapz(const std::vector<double>& f, double h) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
    return h * s;
}

}  // namespace

EpidemicRun simulate_epidemic(const Params& p, const StructuredState& initial, const Grid& grid,
                              const EpidemicOptions& opt) {
    p.validate();
    grid.validate();
    if (!(opt.t_max > 0.0)) throw ValidationError("run.t_max", "must be positive");
    const int n = grid.n_omega;
    if (static_cast<int>(initial.I.size()) != n + 1)
        throw ValidationError("initial.I", "size must be n_omega + 1");
    if (initial.S < 0.0 || initial.V < 0.0 || initial.B < 0.0)
        throw ValidationError("initial", "compartments must be non-negative");
    for (double v : initial.I)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("initial.I", "density must be non-negative and finite");

    const double dw = p.omega0 / n;
    std::vector<double> w(n + 1), g(n + 1), mu2(n + 1), hP(n + 1), xP(n + 1);
    for (int j = 0; j <= n; ++j) {
        w[j] = dw * j;
        g[j] = p.g(w[j]);
        mu2[j] = p.mu2(w[j]);
        hP[j] = p.beta_h * p.P(w[j]);
        xP[j] = p.xi(w[j]) * p.P(w[j]);
    }
    const double g_max = *std::max_element(g.begin(), g.end());
    double dt = grid.dt > 0.0 ? grid.dt : grid.cfl * dw / g_max;
    if (dt * g_max > dw * (1.0 + 1e-12))
        throw ValidationError("grid.dt", fmt::format("CFL violated: dt*max g = {} > d_omega = {}",
                                                     dt * g_max, dw));
    const long steps = std::max(1L, static_cast<long>(std::ceil(opt.t_max / dt - 1e-9)));
    dt = opt.t_max / static_cast<double>(steps);

    const double rec = opt.record_interval > 0.0 ? opt.record_interval : opt.t_max / 2000.0;
    const long rec_every = std::max(1L, std::lround(rec / dt));
    const long snap_every =
        opt.snapshot_interval > 0.0 ? std::max(1L, std::lround(opt.snapshot_interval / dt)) : 0;

    EpidemicRun run;
    run.dt = dt;
    run.d_omega = dw;
    run.omega = w;

    std::vector<double> I = initial.I, I_new(n + 1), tmp(n + 1);
    double S = initial.S, V = initial.V, B = initial.B;

    auto weighted = [&](const std::vector<double>& coef) {
        for (int j = 0; j <= n; ++j) tmp[j] = coef[j] * I[j];
        return trapz(tmp, dw);
    };
    auto record = [&](double t) {
        const double Jh = weighted(hP);
        run.t.push_back(t);
        run.S.push_back(S);
        run.I_total.push_back(trapz(I, dw));
        run.V.push_back(V);
        run.B.push_back(B);
        run.F.push_back(Jh + p.beta_e * B);
    };

    record(0.0);
    run.boundary_t.push_back(0.0);
    run.boundary_flux.push_back(g[0] * I[0]);
    if (snap_every) {
        run.snapshot_t.push_back(0.0);
        run.snapshots.push_back(I);
    }

    const double c = dt / dw;
    std::vector<double> decay(n + 1);
    for (int j = 0; j <= n; ++j) decay[j] = std::exp(-dt * mu2[j]);
    for (long k = 1; k <= steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const double Jh = weighted(hP);
        const double Jx = weighted(xP);
        const double out_flux = g[n] * I[n];

        // Scalars with frozen integrals.
        auto f = [&](const std::array<double, 3>& y) {
            return std::array<double, 3>{
                p.r - p.mu1 * y[0] - y[0] * Jh - p.beta_e * y[0] * y[2] + p.rho * y[1],
                out_flux - (p.rho + p.mu3) * y[1],
                Jx - p.sigma * y[2]};
        };
        const std::array<double, 3> y0{S, V, B};
        auto axpy = [](const std::array<double, 3>& a, double s, const std::array<double, 3>& b) {
            return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
        };
        const auto k1 = f(y0);
        const auto k2 = f(axpy(y0, 0.5 * dt, k1));
        const auto k3 = f(axpy(y0, 0.5 * dt, k2));
        const auto k4 = f(axpy(y0, dt, k3));
        S += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        V += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        B += dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);

        // Upwind transport (g > 0: information flows toward omega0), then the
        // exact decay factor over the step.
        for (int j = 1; j <= n; ++j)
            I_new[j] = (I[j] - c * (g[j] * I[j] - g[j - 1] * I[j - 1])) * decay[j];

        // g0 I0 = S (w0 hP0 I0 + sum_{j>0} w_j hP_j I_j) + beta_e S B
        double rest = 0.5 * hP[n] * I_new[n];
        for (int j = 1; j < n; ++j) rest += hP[j] * I_new[j];
        rest *= dw;
        const double denom = g[0] - S * 0.5 * dw * hP[0];
        if (!(denom > 0.0))
            throw NumericalError("simulate_epidemic: boundary self-coupling too strong; refine the grid");
        I_new[0] = (S * rest + p.beta_e * S * B) / denom;
        I.swap(I_new);

        const double lowest = std::min({S, V, B, *std::min_element(I.begin(), I.end())});
        if (lowest < -opt.negativity_tol || !std::isfinite(lowest))
            throw NumericalError(fmt::format(
                "simulate_epidemic: negative or non-finite density {} at t={}", lowest, t));

        run.boundary_t.push_back(t);
        run.boundary_flux.push_back(g[0] * I[0]);
        if (k % rec_every == 0 || k == steps) record(t);
        if (snap_every && (k % snap_every == 0 || k == steps)) {
            run.snapshot_t.push_back(t);
            run.snapshots.push_back(I);
        }
    }
    run.final_state = {S, V, B, I};
    return run;
}

}  // namespace cholera::between_host
