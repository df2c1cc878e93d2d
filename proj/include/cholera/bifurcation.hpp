#pragma once

#include "cholera/numerics/continuation.hpp"
#include "cholera/within_host.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace cholera::bifurcation {

using within_host::Params;

enum class SweepParameter { Delta, W };

/// One-parameter sweep of the fast subsystem. For a delta sweep the immune
/// response is frozen at `frozen_w`; for a W sweep delta comes from params.
struct Sweep {
    SweepParameter which = SweepParameter::Delta;
    numerics::Interval range{0.1, 1.4};
    int n = 260;  // intervals; n + 1 samples, n = 0 gives a single point
    double frozen_w = 0.9;

    void validate() const;
    double value(int k) const;
};

/// Parameters and frozen W at sweep value `v`.
struct FastSetting {
    Params params;
    double W = 0.0;
};
FastSetting apply(const Params& base, const Sweep& sweep, double v);

enum class Stability { StableNode, StableFocus, UnstableNode, UnstableFocus, Saddle };
enum class BranchKind { Trivial, Lower, Upper };

std::string to_string(Stability s);
std::string to_string(BranchKind k);

struct BranchPoint {
    double parameter = 0.0;
    BranchKind branch = BranchKind::Trivial;
    double T = 0.0;
    double P = 0.0;
    std::complex<double> ev1;  // larger real part first
    std::complex<double> ev2;
    Stability stability = Stability::StableNode;
    double trace = 0.0;
    double det = 0.0;
};

/// Classifies the equilibrium (T, P) from the fast Jacobian.
BranchPoint classify(double parameter, BranchKind kind, const FastSetting& s, double T, double P);

struct Branches {
    std::vector<BranchPoint> trivial;
    std::vector<BranchPoint> lower;  // P-, only where it exists
    std::vector<BranchPoint> upper;  // P+
};

/// Closed-form equilibria along the sweep, classified by eigenvalues.
/// Throws ValidationError when the nontrivial pair exists nowhere on the sweep.
Branches sweep_branch(const Params& p, const Sweep& sweep);

enum class EventKind { Fold, Hopf };
std::string to_string(EventKind k);

struct BifurcationEvent {
    EventKind kind = EventKind::Fold;
    double parameter = 0.0;
    double T = 0.0;
    double P = 0.0;
};

/// Folds where the nontrivial pair appears or disappears between samples
/// (det changes sign along upper-then-lower); Hopf points where the upper
/// branch trace changes sign with det > 0. Each parameter is refined with
/// find_root on the analytic condition. Ordered by parameter.
std::vector<BifurcationEvent> detect_events(const Params& p, const Sweep& sweep,
                                            const Branches& branches);

struct CycleOptions {
    double transient = 500.0;
    double window = 500.0;
    double homoclinic_period = 1e3;
    double min_rel_amplitude = 1e-4;
    double perturbation = 1e-2;  // relative kick off the upper equilibrium
    double max_step = 0.05;
    int samples = 40;            // sweep points for the cycle scan
};

struct CycleSample {
    double parameter = 0.0;
    bool oscillating = false;
    bool collapsed = false;      // went to the infection-free state
    bool near_homoclinic = false;
    double p_min = 0.0;
    double p_max = 0.0;
    std::optional<double> period;
};

/// Long-time behaviour of the fast system started next to the upper
/// equilibrium at a single sweep value.
CycleSample cycle_at(const Params& p, const Sweep& sweep, double v, const CycleOptions& opt = {});

/// cycle_at over `opt.samples + 1` evenly spaced sweep values.
std::vector<CycleSample> cycle_amplitude(const Params& p, const Sweep& sweep,
                                         const CycleOptions& opt = {});

/// Numerical continuation of the upper branch as a cross-check of the
/// closed form; the fold shows up as a turning point.
numerics::ContinuationResult continue_fast_branch(const Params& p, const Sweep& sweep);

}  // namespace cholera::bifurcation
