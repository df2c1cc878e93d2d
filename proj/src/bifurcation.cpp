#include "cholera/bifurcation.hpp"

#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <algorithm>
#include <cmath>

namespace cholera::bifurcation {

using numerics::Vector;

void Sweep::validate() const {
    if (n < 0) throw ValidationError("sweep.n", "must be non-negative");
    if (!std::isfinite(range.start) || !std::isfinite(range.end))
        throw ValidationError("sweep.range", "must be finite");
    if (n > 0 && range.start == range.end)
        throw ValidationError("sweep.range", "start and end must differ");
    const double lo = std::min(range.start, range.end);
    if (which == SweepParameter::Delta && !(lo > 0.0))
        throw ValidationError("sweep.range", "delta must stay positive");
    if (which == SweepParameter::W && lo < 0.0)
        throw ValidationError("sweep.range", "W must be non-negative");
    if (which == SweepParameter::Delta && frozen_w < 0.0)
        throw ValidationError("sweep.frozen_w", "must be non-negative");
}

double Sweep::value(int k) const {
    if (n == 0) return range.start;
    if (k == n) return range.end;
    return range.start + (range.end - range.start) * k / n;
}

FastSetting apply(const Params& base, const Sweep& sweep, double v) {
    FastSetting s{base, sweep.frozen_w};
    if (sweep.which == SweepParameter::Delta)
        s.params.delta = v;
    else
        s.W = v;
    return s;
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::StableNode: return "stable_node";
        case Stability::StableFocus: return "stable_focus";
        case Stability::UnstableNode: return "unstable_node";
        case Stability::UnstableFocus: return "unstable_focus";
        case Stability::Saddle: return "saddle";
    }
    return "?";
}

std::string to_string(BranchKind k) {
    switch (k) {
        case BranchKind::Trivial: return "trivial";
        case BranchKind::Lower: return "lower";
        case BranchKind::Upper: return "upper";
    }
    return "?";
}

std::string to_string(EventKind k) { return k == EventKind::Fold ? "fold" : "hopf"; }

BranchPoint classify(double parameter, BranchKind kind, const FastSetting& s, double T, double P) {
    const Eigen::Matrix2d J = within_host::jacobian_fast({T, P}, s.params, s.W);
    BranchPoint b;
    b.parameter = parameter;
    b.branch = kind;
    b.T = T;
    b.P = P;
    b.trace = J.trace();
    b.det = J.determinant();
    const double disc = b.trace * b.trace - 4.0 * b.det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        b.ev1 = 0.5 * (b.trace + sq);
        b.ev2 = 0.5 * (b.trace - sq);
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        b.ev1 = {0.5 * b.trace, im};
        b.ev2 = {0.5 * b.trace, -im};
    }
    if (b.det < 0.0)
        b.stability = Stability::Saddle;
    else if (disc < 0.0)
        b.stability = b.trace < 0.0 ? Stability::StableFocus : Stability::UnstableFocus;
    else
        b.stability = b.trace < 0.0 ? Stability::StableNode : Stability::UnstableNode;
    return b;
}

Branches sweep_branch(const Params& p, const Sweep& sweep) {
    p.validate();
    sweep.validate();
    Branches out;
    for (int k = 0; k <= sweep.n; ++k) {
        const double v = sweep.value(k);
        const FastSetting s = apply(p, sweep, v);
        const auto eq = within_host::equilibria_fast(s.params, s.W);
        out.trivial.push_back(classify(v, BranchKind::Trivial, s, eq.trivial.T, eq.trivial.P));
        if (eq.upper) {
            out.upper.push_back(classify(v, BranchKind::Upper, s, eq.upper->T, eq.upper->P));
            out.lower.push_back(classify(v, BranchKind::Lower, s, eq.lower->T, eq.lower->P));
        }
    }
    if (out.upper.empty())
        throw ValidationError("sweep.range", "no nontrivial equilibrium anywhere on the sweep");
    return out;
}

namespace {

double upper_trace(const Params& p, const Sweep& sweep, double v) {
    const FastSetting s = apply(p, sweep, v);
    const auto eq = within_host::equilibria_fast(s.params, s.W);
    if (!eq.upper) throw NumericalError("upper branch vanished during Hopf refinement");
    return within_host::jacobian_fast(*eq.upper, s.params, s.W).trace();
}

BifurcationEvent event_at(EventKind kind, const Params& p, const Sweep& sweep, double v) {
    const FastSetting s = apply(p, sweep, v);
    const auto eq = within_host::equilibria_fast(s.params, s.W);
    BifurcationEvent e{kind, v, 0.0, 0.0};
    if (eq.upper) {
        e.T = eq.upper->T;
        e.P = eq.upper->P;
    } else {
        // Rounding put the refined fold just outside; report the tip.
        e.P = std::sqrt(s.params.mu / s.params.alpha);
        e.T = s.params.Lambda / (s.params.mu + s.params.alpha * e.P * e.P);
    }
    return e;
}

}  // namespace

std::vector<BifurcationEvent> detect_events(const Params& p, const Sweep& sweep,
                                            const Branches& branches) {
    std::vector<BifurcationEvent> events;
    auto margin = [&](double v) {
        const FastSetting s = apply(p, sweep, v);
        return within_host::fold_margin(s.params, s.W);
    };

    // Fold: the nontrivial pair exists on one side of a sample interval only.
    for (int k = 0; k < sweep.n; ++k) {
        const double a = sweep.value(k), b = sweep.value(k + 1);
        const bool ea = margin(a) >= 0.0, eb = margin(b) >= 0.0;
        if (ea == eb) continue;
        const double v = numerics::find_root(margin, {std::min(a, b), std::max(a, b)}, 1e-13);
        events.push_back(event_at(EventKind::Fold, p, sweep, v));
    }

    // Hopf: trace sign change on the upper branch with det > 0.
    const auto& up = branches.upper;
    for (std::size_t i = 0; i + 1 < up.size(); ++i) {
        const auto& a = up[i];
        const auto& b = up[i + 1];
        if (std::abs(sweep.value(1) - sweep.value(0)) * 1.5 < std::abs(b.parameter - a.parameter))
            continue;  // not neighbours (gap in existence)
        if ((a.trace < 0.0) == (b.trace < 0.0)) continue;
        if (!(a.det > 0.0 && b.det > 0.0)) continue;
        auto tr = [&](double v) { return upper_trace(p, sweep, v); };
        const double v = numerics::find_root(
            tr, {std::min(a.parameter, b.parameter), std::max(a.parameter, b.parameter)}, 1e-13);
        events.push_back(event_at(EventKind::Hopf, p, sweep, v));
    }

    std::sort(events.begin(), events.end(),
              [](const auto& x, const auto& y) { return x.parameter < y.parameter; });
    return events;
}

CycleSample cycle_at(const Params& p, const Sweep& sweep, double v, const CycleOptions& opt) {
    CycleSample out;
    out.parameter = v;
    const FastSetting s = apply(p, sweep, v);
    const auto eq = within_host::equilibria_fast(s.params, s.W);
    if (!eq.upper) {
        out.collapsed = true;
        return out;
    }
    const numerics::VectorField rhs = [&s](double, const Vector& y) {
        const auto d = within_host::rhs_fast({y[0], y[1]}, s.params, s.W);
        Vector r(2);
        r << d.T, d.P;
        return r;
    };
    Vector y0(2);
    y0 << eq.upper->T, eq.upper->P * (1.0 + opt.perturbation);
    auto spec = numerics::IntegratorSpec::adaptive(1e-9, 1e-12);
    spec.max_step = opt.max_step;
    const double t_end = opt.transient + opt.window;
    const auto tr = numerics::integrate_ode(rhs, y0, {0.0, t_end}, spec);

    std::vector<double> t, P;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.t[i] < opt.transient) continue;
        t.push_back(tr.t[i]);
        P.push_back(tr.y[i][1]);
    }
    if (P.empty()) throw NumericalError("cycle_at: no samples in the observation window");
    out.p_min = *std::min_element(P.begin(), P.end());
    out.p_max = *std::max_element(P.begin(), P.end());
    if (out.p_max < 1e-6) {
        out.collapsed = true;
        return out;
    }
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < P.size(); ++i)
        if (P[i] > P[i - 1] && P[i] > P[i + 1]) peaks.push_back(t[i]);
    const double rel = (out.p_max - out.p_min) / out.p_max;
    if (rel <= opt.min_rel_amplitude) return out;  // settled on the equilibrium
    if (peaks.size() >= 3) {
        out.oscillating = true;
        out.period = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
        out.near_homoclinic = *out.period > opt.homoclinic_period;
    } else {
        // Too few maxima in the window: the period exceeds the window.
        out.near_homoclinic = true;
    }
    return out;
}

std::vector<CycleSample> cycle_amplitude(const Params& p, const Sweep& sweep,
                                         const CycleOptions& opt) {
    p.validate();
    sweep.validate();
    if (opt.samples < 0) throw ValidationError("cycles.samples", "must be non-negative");
    if (!(opt.transient >= 0.0) || !(opt.window > 0.0))
        throw ValidationError("cycles.window", "transient >= 0 and window > 0 required");
    Sweep grid = sweep;
    grid.n = opt.samples;
    std::vector<CycleSample> out;
    for (int k = 0; k <= grid.n; ++k) out.push_back(cycle_at(p, grid, grid.value(k), opt));
    return out;
}

numerics::ContinuationResult continue_fast_branch(const Params& p, const Sweep& sweep) {
    sweep.validate();
    const FastSetting s0 = apply(p, sweep, sweep.range.start);
    const auto eq = within_host::equilibria_fast(s0.params, s0.W);
    if (!eq.upper)
        throw ValidationError("sweep.range", "no nontrivial equilibrium at the sweep start");
    const numerics::Residual F = [&](const Vector& x, double v) {
        const FastSetting s = apply(p, sweep, v);
        const auto d = within_host::rhs_fast({x[0], x[1]}, s.params, s.W);
        Vector r(2);
        r << d.T, d.P;
        return r;
    };
    numerics::ContinuationOptions opt;
    opt.jacobian = [&](const Vector& x, double v) -> Eigen::MatrixXd {
        const FastSetting s = apply(p, sweep, v);
        return within_host::jacobian_fast({x[0], x[1]}, s.params, s.W);
    };
    opt.lower_bounds = Vector::Constant(2, 1e-9);
    Vector x0(2);
    x0 << eq.upper->T, eq.upper->P;
    return numerics::continue_branch(F, x0, sweep.range, std::max(sweep.n, 1), opt);
}

}  // namespace cholera::bifurcation
