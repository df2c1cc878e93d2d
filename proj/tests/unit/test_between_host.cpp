#include "cholera/between_host/characteristics.hpp"
#include "cholera/between_host/coefficients.hpp"
#include "cholera/between_host/epidemic.hpp"
#include "cholera/between_host/model.hpp"
#include "cholera/between_host/renewal.hpp"
#include "cholera/between_host/spectral.hpp"
#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace cholera;
using namespace cholera::between_host;

namespace {

// r=1, mu1=0.1, beta_h=0.2, P=g=1, mu2=0.1, omega0=5.
Params constant_case(double beta_e = 0.0, double xi = 0.0) {
    Params p;
    p.beta_e = beta_e;
    p.xi = Coefficient::constant(xi);
    return p;
}

// Closed-form DFE characteristic function for constant coefficients.
double G_closed(double lambda, const Params& p, double xi) {
    const double k = 0.1 + lambda;
    const double tail = (1.0 - std::exp(-5.0 * k)) / k;
    return 10.0 * (p.beta_h + p.beta_e * xi / (p.sigma + lambda)) * tail;
}

}  // namespace

TEST_CASE("coefficient families") {
    CHECK(Coefficient::constant(2.0)(7.0) == 2.0);
    CHECK(Coefficient::linear(1.0, 0.5)(2.0) == 2.0);
    CHECK(Coefficient::exponential(2.0, -1.0)(1.0) == doctest::Approx(2.0 / std::exp(1.0)));
    const auto t = Coefficient::table({0.0, 1.0, 3.0}, {1.0, 3.0, 4.0});
    CHECK(t(0.5) == doctest::Approx(2.0));
    CHECK(t(2.0) == doctest::Approx(3.5));
    CHECK(t(3.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(t(3.5), ValidationError);
    CHECK_THROWS_AS(Coefficient::table({0.0, 0.0}, {1.0, 1.0}), ValidationError);
}

TEST_CASE("within-host link") {
    within_host::Params w;
    const auto link = within_host_link(w);
    CHECK(link.omega0 == doctest::Approx(within_host::fold_w(w)));
    CHECK(link.P(0.0) == doctest::Approx(1.0 + std::sqrt(0.9)));
    CHECK(link.g(0.0) == doctest::Approx(1.0 + std::sqrt(0.9)));
}

TEST_CASE("parameter validation") {
    Params p = constant_case();
    p.mu1 = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = constant_case();
    p.g = Coefficient::linear(1.0, -1.0);
    try {
        p.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "functions.g");
    }
}

TEST_CASE("survival with constant rates") {
    const Params p = constant_case();
    for (double w : {0.0, 1.0, 2.5, 5.0}) CHECK(survival_pi(w, p) == doctest::Approx(std::exp(-0.1 * w)).epsilon(1e-12));
    CHECK_THROWS_AS(survival_pi(5.5, p), ValidationError);
    Params q = constant_case();
    q.g = Coefficient::linear(1.0, 0.1);
    // G(omega) = 10 ln(1 + 0.1 omega)
    CHECK(immune_time(3.0, q) == doctest::Approx(10.0 * std::log(1.3)).epsilon(1e-10));
}

TEST_CASE("R0 closed forms") {
    CHECK(std::abs(r0(constant_case()) - 20.0 * (1 - std::exp(-0.5))) < 1e-9);
    const double env = 20.0 * (1 - std::exp(-0.5)) + 0.5 * 0.4 * 10 * (1 - std::exp(-0.5)) / 0.5;
    CHECK(std::abs(r0(constant_case(0.05, 0.4)) - env) < 1e-9);
}

TEST_CASE("DFE characteristic function") {
    const Params p = constant_case(0.05, 0.4);
    const numerics::QuadratureSpec fine{numerics::QuadratureRule::Simpson, 512};
    for (double l : {-0.05, 0.0, 0.3, 2.0})
        CHECK(dfe_char_G(l, p, fine) == doctest::Approx(G_closed(l, p, 0.4)).epsilon(1e-9));
    CHECK(dfe_char_G(0.0, p) == doctest::Approx(r0(p)).epsilon(1e-14));
    CHECK_THROWS_AS(dfe_char_G(-0.6, p), ValidationError);
}

TEST_CASE("spectral root against an independent bisection") {
    for (double beta_h : {0.2, 0.03, 0.01}) {
        Params p = constant_case(0.05, 0.4);
        p.beta_h = beta_h;
        const double oracle = numerics::find_root([&](double l) { return G_closed(l, p, 0.4) - 1.0; },
                                                  {-0.49, 20.0}, 1e-13);
        const double lam = dfe_spectral_root(p, {numerics::QuadratureRule::Simpson, 512});
        CHECK(lam == doctest::Approx(oracle).epsilon(1e-7));
        CHECK((lam > 0) == (r0(p) > 1));
    }
}

TEST_CASE("endemic equilibrium closed form") {
    const Params p = constant_case();
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq);
    const double R0 = 20.0 * (1 - std::exp(-0.5));
    CHECK(eq->S == doctest::Approx(10.0 / R0).epsilon(1e-10));
    CHECK(eq->I0 == doctest::Approx(1.0 - 0.1 * eq->S).epsilon(1e-10));
    CHECK(eq->V == doctest::Approx(eq->I0 * std::exp(-0.5) / 0.1).epsilon(1e-10));
    CHECK(eq->density(2.0, p) == doctest::Approx(eq->I0 * std::exp(-0.2)).epsilon(1e-10));
    for (double r : endemic_residuals(p, *eq)) CHECK(std::abs(r) < 1e-7);
}

TEST_CASE("endemic equilibrium with environment and waning") {
    Params p = constant_case(0.05, 0.4);
    p.rho = 0.2;
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq);
    CHECK(eq->B > 0.0);
    for (double r : endemic_residuals(p, *eq)) CHECK(std::abs(r) < 1e-7);
}

TEST_CASE("no endemic state below threshold") {
    Params p = constant_case();
    p.beta_h = 0.01;
    CHECK(r0(p) < 1.0);
    CHECK_FALSE(endemic_equilibrium(p));
    CHECK_THROWS_AS(endemic_char_residual(0.0, p), ValidationError);
}

TEST_CASE("characteristics closed form") {
    const Params p = constant_case();
    auto phi = [](double w) { return 0.02 * std::exp(-0.1 * w); };
    auto H = [](double s) { return 1.0 + 0.1 * s; };
    // g = 1: initial-data branch for omega > t, boundary branch otherwise.
    CHECK(characteristics_eval(1.0, 3.0, p, phi, H) == doctest::Approx(phi(2.0) * std::exp(-0.1)).epsilon(1e-10));
    CHECK(characteristics_eval(4.0, 3.0, p, phi, H) == doctest::Approx(H(1.0) * std::exp(-0.3)).epsilon(1e-10));
}

TEST_CASE("immune clock with linear growth") {
    Params p = constant_case();
    p.g = Coefficient::linear(1.0, 0.1);
    const ImmuneClock clock(p);
    CHECK(clock.horizon() == doctest::Approx(10.0 * std::log(1.5)).epsilon(1e-10));
    for (double th : {0.0, 1.0, 3.3}) CHECK(clock.omega(th) == doctest::Approx(10.0 * (std::exp(0.1 * th) - 1)).epsilon(1e-9));
}

TEST_CASE("renewal kernel closed form") {
    const Params p = constant_case(0.05, 0.4);
    const RenewalKernel K(p);
    CHECK(K.window() == doctest::Approx(35.0));
    auto env = [&](double th) {
        const double lo = std::max(0.0, th - 5.0), hi = std::min(th, 30.0);
        if (hi <= lo) return 0.0;
        return 0.05 * 0.4 * std::exp(-0.1 * th) * (std::exp(-0.4 * lo) - std::exp(-0.4 * hi)) / 0.4;
    };
    for (double th : {0.5, 4.0, 7.0, 20.0, 33.0}) {
        CHECK(K.direct(th) == doctest::Approx(th <= 5.0 ? 0.2 * std::exp(-0.1 * th) : 0.0).epsilon(1e-9));
        CHECK(K.environmental(th) == doctest::Approx(env(th)).epsilon(1e-8));
    }
    CHECK(renewal_kernel_A(2.0, p) == doctest::Approx(K(2.0)));
    CHECK(std::abs(renewal_identity(p) - 1.0) < 1e-6);
}

TEST_CASE("renewal run stays at the endemic state") {
    const Params p = constant_case();
    const auto eq = endemic_equilibrium(p);
    REQUIRE(eq);
    const double Fstar = p.r / eq->S - p.mu1;
    RenewalHistory hist{[&](double) { return Fstar; }, {}};
    const auto run = simulate_renewal(p, hist, eq->S, 20.0);
    CHECK(run.F.back() == doctest::Approx(Fstar).epsilon(1e-4));
    CHECK(run.S.back() == doctest::Approx(eq->S).epsilon(1e-4));
    RenewalOptions bad;
    bad.h = 0.03;
    CHECK_THROWS_AS(simulate_renewal(p, hist, eq->S, 1.0, bad), ValidationError);
}

TEST_CASE("epidemic without transmission follows the characteristics") {
    Params p = constant_case();
    p.beta_h = 0.0;
    // Vanishes at omega = 0, so the density stays continuous.
    auto phi = [](double w) { return 0.02 * w * std::exp(-0.5 * w); };
    const auto init = initial_state(p, 400, 4.0, 0.0, 0.0, phi);
    EpidemicOptions opt;
    opt.t_max = 3.0;
    opt.snapshot_interval = 3.0;
    const auto run = simulate_epidemic(p, init, Grid{}, opt);
    CHECK(run.t.back() == 3.0);
    CHECK(run.final_state.S == doctest::Approx(10.0 - 6.0 * std::exp(-0.3)).epsilon(1e-8));
    double err = 0.0;
    for (std::size_t i = 0; i < run.omega.size(); ++i) {
        const double w = run.omega[i];
        const double exact = w > 3.0 ? phi(w - 3.0) * std::exp(-0.3) : 0.0;
        err = std::max(err, std::abs(run.final_state.I[i] - exact));
    }
    CHECK(err < 1e-3);
}

TEST_CASE("CFL violation is a validation error") {
    const Params p = constant_case();
    const auto init = initial_state(p, 100, 5.0, 0.0, 0.0, [](double) { return 0.01; });
    Grid g;
    g.n_omega = 100;
    g.dt = 0.2;
    EpidemicOptions opt;
    opt.t_max = 1.0;
    try {
        simulate_epidemic(p, init, g, opt);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "grid.dt");
    }
}

TEST_CASE("endemic spectral residual: reduced form is the negative") {
    const Params p = constant_case();
    REQUIRE(is_reduced_case(p));
    for (double l : {0.0, 0.5, 3.0})
        CHECK(endemic_char_residual_reduced(l, p) == doctest::Approx(-endemic_char_residual(l, p)).epsilon(1e-10));
    const auto scan = scan_endemic_residual(p, 0.0, 10.0, 0.05);
    CHECK(scan.roots.empty());
    CHECK(scan.lambda.size() == scan.residual.size());
    CHECK_FALSE(is_reduced_case(constant_case(0.05, 0.4)));
}
