#include "cholera/bifurcation.hpp"
#include "cholera/numerics/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace cholera;
using namespace cholera::bifurcation;

namespace {

Sweep delta_sweep() { return Sweep{SweepParameter::Delta, {0.1, 1.4}, 260, 0.9}; }
Sweep w_sweep(double hi = 3.6) { return Sweep{SweepParameter::W, {0.0, hi}, 360, 0.0}; }

}  // namespace

TEST_CASE("sweep validation") {
    Sweep s = delta_sweep();
    s.n = -1;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = delta_sweep();
    s.frozen_w = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK(delta_sweep().value(260) == doctest::Approx(1.4));
}

TEST_CASE("delta sweep: upper branch ends at the fold") {
    const Params p;
    const auto b = sweep_branch(p, delta_sweep());
    REQUIRE(!b.upper.empty());
    CHECK(b.trivial.size() == 261);
    CHECK(b.upper.back().parameter < 1.2013);
    CHECK(b.upper.back().parameter > 1.2013 - 0.006);
    CHECK(b.lower.size() == b.upper.size());
    for (const auto& pt : b.trivial) CHECK(pt.stability == Stability::StableNode);
    for (const auto& pt : b.lower) CHECK(pt.stability == Stability::Saddle);
}

TEST_CASE("delta sweep events") {
    const Params p;
    const auto b = sweep_branch(p, delta_sweep());
    const auto ev = detect_events(p, delta_sweep(), b);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].kind == EventKind::Hopf);
    CHECK(ev[0].parameter == doctest::Approx(0.51573).epsilon(1e-5));
    CHECK(ev[1].kind == EventKind::Fold);
    CHECK(ev[1].parameter == doctest::Approx(1.20127).epsilon(1e-5));
    // The fold is where both roots coincide: P = sqrt(mu/alpha).
    CHECK(ev[1].P == doctest::Approx(std::sqrt(0.1)).epsilon(1e-5));
}

TEST_CASE("W sweep events, with and without the fold in range") {
    const Params p;
    auto ev = detect_events(p, w_sweep(), sweep_branch(p, w_sweep()));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].kind == EventKind::Hopf);
    CHECK(ev[0].parameter == doctest::Approx(1.5472).epsilon(1e-4));
    ev = detect_events(p, w_sweep(3.7), sweep_branch(p, w_sweep(3.7)));
    REQUIRE(ev.size() == 2);
    CHECK(ev[1].kind == EventKind::Fold);
    CHECK(ev[1].parameter == doctest::Approx(3.603796).epsilon(1e-6));
}

TEST_CASE("stability changes across the Hopf point") {
    const Params p;
    const auto b = sweep_branch(p, w_sweep());
    for (const auto& pt : b.upper) {
        const bool stable = pt.stability == Stability::StableNode || pt.stability == Stability::StableFocus;
        if (pt.parameter < 1.54) CHECK(stable);
        if (pt.parameter > 1.56) CHECK_FALSE(stable);
        CHECK(pt.ev1.real() >= pt.ev2.real());
        CHECK(pt.ev1.real() + pt.ev2.real() == doctest::Approx(pt.trace));
    }
}

TEST_CASE("no nontrivial equilibrium anywhere on the sweep") {
    const Params p;
    Sweep s{SweepParameter::W, {3.7, 5.0}, 10, 0.0};
    CHECK_THROWS_AS(sweep_branch(p, s), ValidationError);
}

TEST_CASE("cycles: stable equilibrium before Hopf, oscillation just after") {
    const Params p;
    const auto before = cycle_at(p, w_sweep(), 0.0);
    CHECK_FALSE(before.oscillating);
    CHECK_FALSE(before.collapsed);
    const auto after = cycle_at(p, w_sweep(), 1.58);
    CHECK(after.oscillating);
    REQUIRE(after.period);
    CHECK(*after.period > 0.0);
    CHECK(after.p_min < after.p_max);
    // Far past the Hopf point the orbit collapses onto the infection-free state.
    const auto far = cycle_at(p, w_sweep(), 2.5);
    CHECK(far.collapsed);
}

TEST_CASE("continuation cross-check of the fold") {
    const Params p;
    const auto res = continue_fast_branch(p, delta_sweep());
    REQUIRE(res.folds.size() == 1);
    CHECK(res.folds[0].parameter == doctest::Approx(1.20127).epsilon(1e-5));
}
