#pragma once

#include "cholera/numerics/ode.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <optional>
#include <string>
#include <vector>

namespace cholera::within_host {

/// Rates of the target-cell / pathogen / immune-response system
///
///   T' = Lambda - mu T - alpha P^2 T
///   P' = alpha P^2 T - gamma P - delta P W
///   W' = epsilon (kappa P - c W)
///
/// The quadratic incidence in P produces an Allee effect: small inocula
/// are cleared, large ones settle on the infected branch.
struct Params {
    double Lambda = 1.0;   // target-cell production
    double mu = 0.1;       // target-cell death
    double alpha = 1.0;    // infection rate
    double gamma = 0.5;    // pathogen death
    double delta = 0.3;    // immune clearance
    double epsilon = 0.01; // time-scale separation
    double kappa = 1.0;    // immune activation
    double c = 0.5;        // immune self-deactivation

    /// Throws ValidationError naming the first non-positive field, or
    /// epsilon > 1.
    void validate() const;
    /// Soft diagnostics (epsilon above 0.1 weakens the time-scale split).
    std::vector<std::string> warnings() const;

    /// Gamma = gamma + delta W, the effective pathogen removal rate.
    double removal_rate(double W) const { return gamma + delta * W; }
};

struct State {
    double T = 0.0;
    double P = 0.0;
    double W = 0.0;
};

/// (T, P) with W frozen.
struct FastPoint {
    double T = 0.0;
    double P = 0.0;
};

struct FastEquilibria {
    FastPoint trivial;               // (Lambda/mu, 0), always present
    std::optional<FastPoint> lower;  // P-, the saddle separatrix
    std::optional<FastPoint> upper;  // P+, the infected state

    bool nontrivial_exists() const { return upper.has_value(); }
};

State rhs_full(const State& s, const Params& p);
FastPoint rhs_fast(const FastPoint& x, const Params& p, double W);

/// Equilibria of the fast subsystem at frozen immune response W.
/// The nontrivial pair exists iff Lambda >= 2 Gamma sqrt(mu/alpha); at
/// equality both roots coincide.
FastEquilibria equilibria_fast(const Params& p, double W);

Eigen::Matrix2d jacobian_fast(const FastPoint& x, const Params& p, double W);

/// Discriminant of the quadratic alpha Gamma P^2 - alpha Lambda P + Gamma mu = 0,
/// scaled to Lambda - 2 Gamma sqrt(mu/alpha) so its zero is the fold.
double fold_margin(const Params& p, double W);

/// A Hopf candidate: a positive root of Gamma - Gamma^4/(alpha Lambda^2) = mu.
struct HopfRoot {
    double gamma_value = 0.0;   // Gamma at the root
    double p_star = 0.0;        // Gamma^2 / (alpha Lambda), where the trace vanishes
    double t_star = 0.0;        // Gamma / (alpha P*)
    bool exceeds_mu = false;    // Gamma > mu
    bool exceeds_two_mu = false;// Gamma > 2 mu, det > 0 as derived in its proof
    bool valid = false;         // gate used for reporting a Hopf point
};

struct CriticalLoci {
    double gamma_fold = 0.0;        // (Lambda/2) sqrt(alpha/mu)
    std::vector<HopfRoot> hopf;     // ascending in Gamma
};

CriticalLoci critical_loci(const Params& p);

/// Gamma -> delta at fixed W, and Gamma -> W at fixed delta.
double delta_for_removal_rate(double gamma_value, const Params& p, double W);
double w_for_removal_rate(double gamma_value, const Params& p);

/// Immune response at which the infected branch disappears, (Gamma_fold - gamma)/delta.
double fold_w(const Params& p);
/// delta of the fold with W frozen.
double fold_delta(const Params& p, double W);
/// Parameter values of the valid Hopf root. Throw NumericalError when no
/// valid root exists.
double hopf_delta(const Params& p, double W);
double hopf_w(const Params& p);

/// Upper branch of the slow manifold W = phi(P) = -gamma/delta + alpha Lambda P / (delta (alpha P^2 + mu)).
double slow_manifold_w(double P, const Params& p);

struct ManifoldTip {
    double P = 0.0;  // sqrt(mu/alpha)
    double W = 0.0;  // phi at the tip
};
ManifoldTip slow_manifold_tip(const Params& p);

/// W-nullcline kappa P / c.
double w_nullcline(double P, const Params& p);

/// Crossing of the W-nullcline with the infected (P > tip) part of the slow
/// manifold, if any: a chronic-infection state of the reduced slow flow.
std::optional<State> nullcline_crossing(const Params& p);

/// P+ at immune response W (larger root). Throws ValidationError above the tip.
double infected_branch_p(const Params& p, double W);

/// Individual immune growth rate g(omega) = kappa P+(omega) - c omega for
/// 0 <= omega <= W_fold.
double immune_growth_g(double omega, const Params& p);

// ---------------------------------------------------------------------------
// Simulation

struct InfectionOptions {
    double p_clear = 1e-6;
    numerics::IntegratorSpec integrator = numerics::IntegratorSpec::adaptive(1e-10, 1e-13);
};

struct InfectionRun {
    std::vector<double> t;
    std::vector<State> states;
    std::optional<double> recovery_time;
    std::optional<State> state_at_recovery;
    double w_fold = 0.0;
    double p_clear = 0.0;
    /// max W before recovery reached W_fold
    bool fold_exceeded = false;
    double max_w_before_recovery = 0.0;
};

/// Integrates the full system. The first time P drops below p_clear the
/// infection counts as cleared; P is set to zero and the run continues on
/// the P = 0 branch (T relaxes to Lambda/mu, W decays at rate epsilon c).
InfectionRun simulate_infection(const Params& p, const State& initial, double t_max,
                                const InfectionOptions& options = {});

struct SlowRun {
    std::vector<double> tau;  // slow time epsilon t
    std::vector<double> W;
    /// Slow time at which W reaches the manifold tip, if it does.
    std::optional<double> tau_fold;
};

/// Reduced slow flow dW/dtau = kappa P+(W) - c W on the infected branch,
/// integrated until tau_max or until W reaches the tip.
SlowRun simulate_reduced_slow(const Params& p, double W0, double tau_max,
                              const numerics::IntegratorSpec& spec =
                                  numerics::IntegratorSpec::adaptive(1e-11, 1e-13));

}  // namespace cholera::within_host
