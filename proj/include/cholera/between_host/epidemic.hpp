#pragma once

#include "cholera/between_host/model.hpp"

#include <functional>
#include <vector>

namespace cholera::between_host {

struct Grid {
    int n_omega = 400;   // intervals on [0, omega0]
    double dt = 0.0;     // 0: cfl * d_omega / max g
    double cfl = 0.5;

    void validate() const;
};

/// S, V, B and the infected density at the n_omega + 1 grid nodes.
struct StructuredState {
    double S = 0.0;
    double V = 0.0;
    double B = 0.0;
    std::vector<double> I;
};

/// Samples the initial density phi on the uniform grid.
StructuredState initial_state(const Params& p, int n_omega, double S0, double V0, double B0,
                              const std::function<double(double)>& phi);

struct EpidemicOptions {
    double t_max = 100.0;
    double record_interval = 0.0;    // 0: about 2000 samples over the run
    double snapshot_interval = 0.0;  // 0: no I-grid snapshots
    double negativity_tol = 1e-8;
};

struct EpidemicRun {
    double dt = 0.0;         // step actually used (t_max is hit exactly)
    double d_omega = 0.0;
    std::vector<double> omega;

    std::vector<double> t, S, I_total, V, B, F;
    /// H(t) = g(0) I(t, 0) at every step, for the characteristics oracle.
    std::vector<double> boundary_t, boundary_flux;
    std::vector<double> snapshot_t;
    std::vector<std::vector<double>> snapshots;

    StructuredState final_state;

    /// Linear interpolation of the recorded boundary flux.
    double boundary_history(double t) const;
};

/// First-order upwind transport for I followed by the exact decay factor
/// exp(-mu2 dt) on each node; S, V, B advanced
/// by RK4 with the omega-integrals frozen over the step; the boundary node
/// solved from the nonlocal condition at the new time level (trapezoid
/// quadrature on the grid, so the I(t,0) self-term is solved in closed form).
///
/// Throws ValidationError on a CFL violation and NumericalError when any
/// compartment drops below -negativity_tol.
EpidemicRun simulate_epidemic(const Params& p, const StructuredState& initial, const Grid& grid,
                              const EpidemicOptions& options);

}  // namespace cholera::between_host
