#include "cholera/within_host.hpp"

#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <algorithm>
#include <cmath>

namespace cholera::within_host {

using numerics::Vector;

void Params::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"Lambda", Lambda}, {"mu", mu},           {"alpha", alpha}, {"gamma", gamma},
        {"delta", delta},   {"epsilon", epsilon}, {"kappa", kappa}, {"c", c},
    };
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value) || !(value > 0.0))
            throw ValidationError(std::string("within_host.") + name, "must be positive and finite");
    }
    if (epsilon > 1.0)
        throw ValidationError("within_host.epsilon", "must not exceed 1 (time-scale separation)");
}

std::vector<std::string> Params::warnings() const {
    std::vector<std::string> out;
    if (epsilon > 0.1)
        out.emplace_back("within_host.epsilon > 0.1: slow-fast reduction is only qualitative");
    return out;
}

State rhs_full(const State& s, const Params& p) {
    const double infection = p.alpha * s.P * s.P * s.T;
    return {p.Lambda - p.mu * s.T - infection,
            infection - p.gamma * s.P - p.delta * s.P * s.W,
            p.epsilon * (p.kappa * s.P - p.c * s.W)};
}

FastPoint rhs_fast(const FastPoint& x, const Params& p, double W) {
    const double infection = p.alpha * x.P * x.P * x.T;
    return {p.Lambda - p.mu * x.T - infection, infection - p.removal_rate(W) * x.P};
}

double fold_margin(const Params& p, double W) {
    return p.Lambda - 2.0 * p.removal_rate(W) * std::sqrt(p.mu / p.alpha);
}

namespace {

FastPoint on_branch(const Params& p, double P) { return {p.Lambda / (p.mu + p.alpha * P * P), P}; }

// Discriminant of alpha Gamma P^2 - alpha Lambda P + Gamma mu, clamped to zero
// inside a relative rounding band so the double root at the fold is found.
std::optional<double> discriminant_root(const Params& p, double gamma_value) {
    const double scale = p.alpha * p.alpha * p.Lambda * p.Lambda;
    const double disc = scale - 4.0 * p.alpha * p.mu * gamma_value * gamma_value;
    if (disc < -1e-14 * scale) return std::nullopt;
    return std::sqrt(std::max(disc, 0.0));
}

}  // namespace

FastEquilibria equilibria_fast(const Params& p, double W) {
    FastEquilibria eq;
    eq.trivial = {p.Lambda / p.mu, 0.0};
    const double gamma_value = p.removal_rate(W);
    if (!(gamma_value > 0.0)) return eq;
    const auto sq = discriminant_root(p, gamma_value);
    if (!sq) return eq;
    const double p_plus = (p.alpha * p.Lambda + *sq) / (2.0 * gamma_value * p.alpha);
    // Product of the roots is mu/alpha; dividing avoids cancellation in P-.
    const double p_minus = *sq == 0.0 ? p_plus : (p.mu / p.alpha) / p_plus;
    eq.upper = on_branch(p, p_plus);
    eq.lower = on_branch(p, p_minus);
    return eq;
}

Eigen::Matrix2d jacobian_fast(const FastPoint& x, const Params& p, double W) {
    Eigen::Matrix2d J;
    const double aP2 = p.alpha * x.P * x.P;
    const double aPT = p.alpha * x.P * x.T;
    J << -p.mu - aP2, -2.0 * aPT,
         aP2, 2.0 * aPT - p.removal_rate(W);
    return J;
}

CriticalLoci critical_loci(const Params& p) {
    CriticalLoci loci;
    loci.gamma_fold = 0.5 * p.Lambda * std::sqrt(p.alpha / p.mu);

    const double aL2 = p.alpha * p.Lambda * p.Lambda;
    auto h = [&](double g) { return g - g * g * g * g / aL2 - p.mu; };
    const double g_peak = std::cbrt(aL2 / 4.0);
    const double h_peak = h(g_peak);
    std::vector<double> roots;
    if (h_peak == 0.0) {
        roots.push_back(g_peak);
    } else if (h_peak > 0.0) {
        roots.push_back(numerics::find_root(h, {0.0, g_peak}, 1e-15));
        roots.push_back(numerics::find_root(h, {g_peak, std::cbrt(aL2)}, 1e-15));
    }
    for (double g : roots) {
        HopfRoot r;
        r.gamma_value = g;
        r.p_star = g * g / (p.alpha * p.Lambda);
        r.t_star = g / (p.alpha * r.p_star);
        r.exceeds_mu = g > p.mu;
        r.exceeds_two_mu = g > 2.0 * p.mu;
        r.valid = r.exceeds_two_mu;
        loci.hopf.push_back(r);
    }
    return loci;
}

double delta_for_removal_rate(double gamma_value, const Params& p, double W) {
    if (!(W > 0.0)) throw ValidationError("W", "must be positive to translate Gamma into delta");
    return (gamma_value - p.gamma) / W;
}

double w_for_removal_rate(double gamma_value, const Params& p) {
    return (gamma_value - p.gamma) / p.delta;
}

double fold_w(const Params& p) { return w_for_removal_rate(critical_loci(p).gamma_fold, p); }

double fold_delta(const Params& p, double W) {
    return delta_for_removal_rate(critical_loci(p).gamma_fold, p, W);
}

namespace {

double first_valid_hopf(const Params& p, const std::function<double(double)>& translate) {
    for (const auto& r : critical_loci(p).hopf) {
        if (!r.valid) continue;
        const double value = translate(r.gamma_value);
        if (value > 0.0) return value;
    }
    throw NumericalError("no positive Hopf root with Gamma > 2 mu for these parameters");
}

}  // namespace

double hopf_delta(const Params& p, double W) {
    return first_valid_hopf(p, [&](double g) { return delta_for_removal_rate(g, p, W); });
}

double hopf_w(const Params& p) {
    return first_valid_hopf(p, [&](double g) { return w_for_removal_rate(g, p); });
}

double slow_manifold_w(double P, const Params& p) {
    if (P < 0.0) throw ValidationError("P", "must be non-negative");
    return -p.gamma / p.delta + p.alpha * p.Lambda * P / (p.delta * (p.alpha * P * P + p.mu));
}

ManifoldTip slow_manifold_tip(const Params& p) {
    const double P = std::sqrt(p.mu / p.alpha);
    return {P, slow_manifold_w(P, p)};
}

double w_nullcline(double P, const Params& p) {
    if (P < 0.0) throw ValidationError("P", "must be non-negative");
    return p.kappa * P / p.c;
}

std::optional<State> nullcline_crossing(const Params& p) {
    auto gap = [&](double P) { return w_nullcline(P, p) - slow_manifold_w(P, p); };
    const double tip = slow_manifold_tip(p).P;
    if (gap(tip) >= 0.0) return std::nullopt;
    double hi = 2.0 * tip;
    while (gap(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12) return std::nullopt;
    }
    const double P = numerics::find_root(gap, {tip, hi}, 1e-14);
    return State{p.Lambda / (p.mu + p.alpha * P * P), P, w_nullcline(P, p)};
}

double infected_branch_p(const Params& p, double W) {
    const auto eq = equilibria_fast(p, W);
    if (!eq.upper)
        throw ValidationError("omega", "immune status " + std::to_string(W) +
                                           " lies above the manifold tip");
    return eq.upper->P;
}

double immune_growth_g(double omega, const Params& p) {
    if (omega < 0.0) throw ValidationError("omega", "must be non-negative");
    return p.kappa * infected_branch_p(p, omega) - p.c * omega;
}

InfectionRun simulate_infection(const Params& p, const State& initial, double t_max,
                                const InfectionOptions& options) {
    p.validate();
    if (!(t_max > 0.0)) throw ValidationError("t_max", "must be positive");
    if (initial.T < 0.0 || initial.P < 0.0 || initial.W < 0.0)
        throw ValidationError("initial", "state must be non-negative");
    if (!(options.p_clear > 0.0)) throw ValidationError("p_clear", "must be positive");

    InfectionRun run;
    run.w_fold = fold_w(p);
    run.p_clear = options.p_clear;

    const numerics::VectorField rhs = [&p](double, const Vector& y) {
        const State d = rhs_full({y[0], y[1], y[2]}, p);
        Vector out(3);
        out << d.T, d.P, d.W;
        return out;
    };
    auto append = [&run](const numerics::Trajectory& tr, std::size_t from) {
        for (std::size_t i = from; i < tr.size(); ++i) {
            run.t.push_back(tr.t[i]);
            run.states.push_back({tr.y[i][0], tr.y[i][1], tr.y[i][2]});
        }
    };

    Vector y0(3);
    y0 << initial.T, initial.P, initial.W;
    double t_resume = 0.0;
    if (initial.P > 0.0 && initial.P <= options.p_clear) {
        run.recovery_time = 0.0;
        run.state_at_recovery = initial;
        run.max_w_before_recovery = initial.W;
        y0[1] = 0.0;
    } else if (initial.P > 0.0) {
        numerics::EventSpec clearance{
            [pc = options.p_clear](double, const Vector& y) { return y[1] - pc; }, -1, true};
        const auto tr = numerics::integrate_ode(rhs, y0, {0.0, t_max}, options.integrator, clearance);
        append(tr, 0);
        for (const auto& s : run.states) run.max_w_before_recovery = std::max(run.max_w_before_recovery, s.W);
        if (!tr.event_time) {
            run.fold_exceeded = run.max_w_before_recovery >= run.w_fold;
            return run;
        }
        run.recovery_time = *tr.event_time;
        run.state_at_recovery = State{tr.back()[0], tr.back()[1], tr.back()[2]};
        t_resume = *tr.event_time;
        y0 = tr.back();
        y0[1] = 0.0;
        run.states.back().P = 0.0;
    }
    run.fold_exceeded = run.recovery_time && run.max_w_before_recovery >= run.w_fold;

    if (t_resume < t_max) {
        const auto tr = numerics::integrate_ode(rhs, y0, {t_resume, t_max}, options.integrator);
        append(tr, run.t.empty() ? 0 : 1);
    }
    return run;
}

SlowRun simulate_reduced_slow(const Params& p, double W0, double tau_max,
                              const numerics::IntegratorSpec& spec) {
    p.validate();
    const double w_tip = fold_w(p);
    if (W0 > w_tip) throw ValidationError("W0", "starts above the manifold tip");
    auto branch_p = [&p](double W) {
        const double g = p.removal_rate(W);
        const double disc = std::max(0.0, p.alpha * p.alpha * p.Lambda * p.Lambda -
                                              4.0 * p.alpha * p.mu * g * g);
        return (p.alpha * p.Lambda + std::sqrt(disc)) / (2.0 * g * p.alpha);
    };
    const numerics::VectorField rhs = [&](double, const Vector& y) {
        Vector d(1);
        d[0] = p.kappa * branch_p(y[0]) - p.c * y[0];
        return d;
    };
    numerics::EventSpec at_tip{[w_tip](double, const Vector& y) { return y[0] - w_tip; }, +1, true};
    Vector y0(1);
    y0[0] = W0;
    const auto tr = numerics::integrate_ode(rhs, y0, {0.0, tau_max}, spec, at_tip);
    SlowRun out;
    out.tau = tr.t;
    for (const auto& y : tr.y) out.W.push_back(y[0]);
    out.tau_fold = tr.event_time;
    return out;
}

}  // namespace cholera::within_host
