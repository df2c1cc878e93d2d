#include "cholera/io/commands.hpp"

#include "cholera/between_host/characteristics.hpp"
#include "cholera/between_host/epidemic.hpp"
#include "cholera/between_host/renewal.hpp"
#include "cholera/between_host/spectral.hpp"
#include "cholera/numerics/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <fstream>
#include <map>

namespace cholera::io {

namespace fs = std::filesystem;
namespace wh = within_host;
namespace bh = between_host;
namespace bif = bifurcation;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json state_json(const wh::State& s) { return {{"T", s.T}, {"P", s.P}, {"W", s.W}}; }

std::string trajectory_csv(const wh::InfectionRun& run) {
    CsvBuilder csv{"t", "T", "P", "W"};
    for (std::size_t i = 0; i < run.t.size(); ++i)
        csv.row({run.t[i], run.states[i].T, run.states[i].P, run.states[i].W});
    return csv.str();
}

json infection_summary(const wh::InfectionRun& run) {
    return {{"recovery_time", optional_number(run.recovery_time)},
            {"state_at_recovery", run.state_at_recovery ? state_json(*run.state_at_recovery) : json(nullptr)},
            {"w_fold", run.w_fold},
            {"p_clear", run.p_clear},
            {"fold_exceeded", run.fold_exceeded},
            {"max_w_before_recovery", run.max_w_before_recovery},
            {"samples", run.t.size()}};
}

// ---------------------------------------------------------------- within-host

json cmd_within_sim(const ScenarioConfig& cfg, OutputDir& out) {
    const auto run = wh::simulate_infection(cfg.within_host, cfg.within_initial, cfg.t_max,
                                            {cfg.p_clear, wh::InfectionOptions{}.integrator});
    out.write_text("trajectory.csv", trajectory_csv(run));
    spdlog::debug("within-sim: {} samples, recovery {}", run.t.size(),
                 run.recovery_time ? std::to_string(*run.recovery_time) : "none");
    return infection_summary(run);
}

std::string branch_csv(const std::vector<bif::BranchPoint>& branch) {
    CsvBuilder csv{"param", "T", "P", "re_ev1", "im_ev1", "re_ev2", "im_ev2", "stability"};
    for (const auto& b : branch)
        csv.row({b.parameter, b.T, b.P, b.ev1.real(), b.ev1.imag(), b.ev2.real(), b.ev2.imag()},
                {bif::to_string(b.stability)});
    return csv.str();
}

std::string cycles_csv(const std::vector<bif::CycleSample>& cycles) {
    CsvBuilder csv{"param", "oscillating", "collapsed", "near_homoclinic", "P_min", "P_max", "period"};
    for (const auto& c : cycles)
        csv.row({c.parameter, double(c.oscillating), double(c.collapsed), double(c.near_homoclinic),
                 c.p_min, c.p_max, c.period.value_or(std::numeric_limits<double>::quiet_NaN())});
    return csv.str();
}

json events_json(const std::vector<bif::BifurcationEvent>& events) {
    json list = json::array();
    for (const auto& e : events)
        list.push_back({{"kind", bif::to_string(e.kind)}, {"parameter", e.parameter}, {"T", e.T}, {"P", e.P}});
    return list;
}

json loci_json(const wh::Params& p) {
    const auto loci = wh::critical_loci(p);
    json hopf = json::array();
    for (const auto& h : loci.hopf)
        hopf.push_back({{"gamma", h.gamma_value},
                        {"P_star", h.p_star},
                        {"T_star", h.t_star},
                        {"exceeds_mu", h.exceeds_mu},
                        {"exceeds_two_mu", h.exceeds_two_mu},
                        {"valid", h.valid},
                        {"W_at_delta", wh::w_for_removal_rate(h.gamma_value, p)}});
    return {{"gamma_fold", loci.gamma_fold}, {"W_fold", wh::fold_w(p)}, {"hopf", hopf}};
}

std::optional<double> first_event(const std::vector<bif::BifurcationEvent>& events, bif::EventKind k) {
    for (const auto& e : events)
        if (e.kind == k) return e.parameter;
    return std::nullopt;
}

json cmd_bifurcate(const ScenarioConfig& cfg, OutputDir& out) {
    json events, summary;
    const std::pair<const char*, const bif::Sweep*> sweeps[] = {{"delta", &cfg.delta_sweep},
                                                               {"W", &cfg.w_sweep}};
    for (const auto& [name, sweep] : sweeps) {
        const auto branches = bif::sweep_branch(cfg.within_host, *sweep);
        const auto ev = bif::detect_events(cfg.within_host, *sweep, branches);
        const auto cycles = bif::cycle_amplitude(cfg.within_host, *sweep, cfg.cycles);
        const std::string tag = name;
        out.write_text("branch_" + tag + "_trivial.csv", branch_csv(branches.trivial));
        out.write_text("branch_" + tag + "_lower.csv", branch_csv(branches.lower));
        out.write_text("branch_" + tag + "_upper.csv", branch_csv(branches.upper));
        out.write_text("cycles_" + tag + ".csv", cycles_csv(cycles));
        events[tag] = events_json(ev);
        summary["fold_" + tag] = optional_number(first_event(ev, bif::EventKind::Fold));
        summary["hopf_" + tag] = optional_number(first_event(ev, bif::EventKind::Hopf));
        int oscillating = 0, homoclinic = 0;
        for (const auto& c : cycles) {
            oscillating += c.oscillating;
            homoclinic += c.near_homoclinic;
        }
        summary["cycles_" + tag] = {{"samples", cycles.size()},
                                    {"oscillating", oscillating},
                                    {"near_homoclinic", homoclinic}};
        spdlog::debug("bifurcate {}: {} events", tag, ev.size());
    }
    // Independent cross-check of the delta fold by arclength continuation.
    json cont = json::array();
    try {
        const auto res = bif::continue_fast_branch(cfg.within_host, cfg.delta_sweep);
        for (const auto& f : res.folds) cont.push_back({{"parameter", f.parameter}, {"T", f.x[0]}, {"P", f.x[1]}});
    } catch (const NumericalError& e) {
        spdlog::warn("continuation cross-check failed: {}", e.what());
    }
    events["continuation_delta_folds"] = cont;
    events["critical_loci"] = loci_json(cfg.within_host);
    out.write_json("events.json", events);
    summary["continuation_delta_folds"] = cont;
    return summary;
}

json cmd_manifold(const ScenarioConfig& cfg, OutputDir& out) {
    const auto& p = cfg.within_host;
    const auto eq0 = wh::equilibria_fast(p, 0.0);
    const double p_hi = 1.2 * (eq0.upper ? eq0.upper->P : 2.0 * wh::slow_manifold_tip(p).P);
    CsvBuilder csv{"P", "W_manifold", "W_nullcline"};
    constexpr int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double P = p_hi * i / n;
        csv.row({P, wh::slow_manifold_w(P, p), wh::w_nullcline(P, p)});
    }
    out.write_text("manifold.csv", csv.str());
    const auto run = wh::simulate_infection(p, cfg.within_initial, cfg.t_max,
                                            {cfg.p_clear, wh::InfectionOptions{}.integrator});
    out.write_text("trajectory.csv", trajectory_csv(run));

    const auto tip = wh::slow_manifold_tip(p);
    const auto crossing = wh::nullcline_crossing(p);
    json hopf_w = nullptr;
    try {
        hopf_w = wh::hopf_w(p);
    } catch (const NumericalError&) {
    }
    return {{"tip", {{"P", tip.P}, {"W", tip.W}}},
            {"W_fold", wh::fold_w(p)},
            {"W_hopf", hopf_w},
            {"nullcline_crossing", crossing ? state_json(*crossing) : json(nullptr)},
            {"infection", infection_summary(run)}};
}

// --------------------------------------------------------------- between-host

json endemic_json(const bh::EndemicEquilibrium& eq, const std::array<double, 5>& res) {
    return {{"S", eq.S}, {"I0", eq.I0}, {"V", eq.V}, {"B", eq.B}, {"K", eq.K}, {"R0", eq.R0},
            {"residuals",
             {{"S", res[0]}, {"transport", res[1]}, {"boundary", res[2]}, {"V", res[3]}, {"B", res[4]}}}};
}

json cmd_r0(const ScenarioConfig& cfg, OutputDir&) {
    auto p = cfg.between_host;
    const double total = bh::r0(p, cfg.quadrature());
    p.beta_e = 0.0;
    const double direct = bh::r0(p, cfg.quadrature());
    return {{"R0", total},
            {"R0_direct", direct},
            {"R0_environmental", total - direct},
            {"G0", bh::dfe_char_G(0.0, cfg.between_host, cfg.quadrature())},
            {"S0_dfe", cfg.between_host.r / cfg.between_host.mu1}};
}

json cmd_equilibria(const ScenarioConfig& cfg, OutputDir& out) {
    const auto& w = cfg.within_host;
    const double W = cfg.within_initial.W;
    const auto fast = wh::equilibria_fast(w, W);
    auto point = [&](const std::optional<wh::FastPoint>& x) -> json {
        if (!x) return nullptr;
        const Eigen::Matrix2d J = wh::jacobian_fast(*x, w, W);
        return {{"T", x->T}, {"P", x->P}, {"trace", J.trace()}, {"det", J.determinant()}};
    };
    json within{{"W", W},
                {"trivial", point(fast.trivial)},
                {"lower", point(fast.lower)},
                {"upper", point(fast.upper)},
                {"critical_loci", loci_json(w)}};
    if (W > 0.0) within["delta_fold_at_W"] = wh::fold_delta(w, W);

    const auto& p = cfg.between_host;
    json between{{"dfe", {{"S", p.r / p.mu1}, {"I", 0.0}, {"V", 0.0}, {"B", 0.0}}},
                 {"R0", bh::r0(p, cfg.quadrature())}};
    const auto eq = bh::endemic_equilibrium(p, cfg.quadrature());
    if (eq) {
        between["endemic"] = endemic_json(*eq, bh::endemic_residuals(p, *eq, cfg.quadrature()));
        CsvBuilder csv{"omega", "I"};
        for (std::size_t i = 0; i < eq->omega.size(); ++i) csv.row({eq->omega[i], eq->I[i]});
        out.write_text("endemic_I.csv", csv.str());
    } else {
        between["endemic"] = nullptr;
    }
    return {{"within_host", within}, {"between_host", between}};
}

bh::Grid refined(const ScenarioConfig& cfg, int k) {
    bh::Grid g = cfg.grid;
    g.n_omega *= k;
    g.dt /= k;
    return g;
}

bh::EpidemicRun run_pde(const ScenarioConfig& cfg, int refine) {
    const bh::Grid grid = refined(cfg, refine);
    const auto init = bh::initial_state(cfg.between_host, grid.n_omega, cfg.S0, cfg.V0, cfg.B0, cfg.phi);
    bh::EpidemicOptions opt;
    opt.t_max = cfg.t_max;
    opt.record_interval = cfg.record_interval;
    opt.snapshot_interval = cfg.snapshot_interval;
    return bh::simulate_epidemic(cfg.between_host, init, grid, opt);
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

json cmd_epi_sim(const ScenarioConfig& cfg, OutputDir& out, const RunOptions& ro) {
    const auto run = run_pde(cfg, ro.grid_refine);
    CsvBuilder csv{"t", "S", "I_total", "V", "B", "F"};
    for (std::size_t i = 0; i < run.t.size(); ++i)
        csv.row({run.t[i], run.S[i], run.I_total[i], run.V[i], run.B[i], run.F[i]});
    out.write_text("timeseries.csv", csv.str());
    if (!run.snapshots.empty()) {
        std::vector<std::string> header{"t"};
        for (double w : run.omega) header.push_back(format_number(w));
        CsvBuilder grid(header);
        for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
            std::vector<double> row{run.snapshot_t[i]};
            row.insert(row.end(), run.snapshots[i].begin(), run.snapshots[i].end());
            grid.row(row);
        }
        out.write_text("I_grid.csv", grid.str());
    }
    const auto& fin = run.final_state;
    json summary{{"dt", run.dt},
                 {"d_omega", run.d_omega},
                 {"n_omega", run.omega.size() - 1},
                 {"R0", bh::r0(cfg.between_host, cfg.quadrature())},
                 {"final",
                  {{"t", run.t.back()}, {"S", fin.S}, {"I0", fin.I.front()}, {"I_total", run.I_total.back()},
                   {"V", fin.V}, {"B", fin.B}, {"F", run.F.back()}}}};
    if (const auto eq = bh::endemic_equilibrium(cfg.between_host, cfg.quadrature())) {
        summary["endemic"] = endemic_json(*eq, bh::endemic_residuals(cfg.between_host, *eq, cfg.quadrature()));
        summary["relative_gap"] = {{"S", rel_diff(fin.S, eq->S)},
                                   {"I0", rel_diff(fin.I.front(), eq->I0)},
                                   {"B", eq->B > 0.0 ? json(rel_diff(fin.B, eq->B)) : json(nullptr)}};
    } else {
        summary["endemic"] = nullptr;
        summary["infected_mass_final"] = run.I_total.back() + fin.B;
    }
    return summary;
}

/// Force-of-infection history equivalent to the PDE initial density when the
/// history has constant susceptibles S0: I(0, w) = H(-G(w)) pi(w), F = H / S0.
std::function<double(double)> history_from_density(const ScenarioConfig& cfg,
                                                   std::shared_ptr<bh::ImmuneClock> clock) {
    const auto& p = cfg.between_host;
    return [&cfg, &p, clock](double s) {
        const double theta = -s;
        if (theta > clock->horizon() || cfg.S0 <= 0.0) return 0.0;
        const double w = clock->omega(theta);
        const double pi = std::exp(-clock->log_survival(theta)) / p.g(w);
        return cfg.phi(w) / pi / cfg.S0;
    };
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t) {
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double s = (t - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - s) * y[i - 1] + s * y[i];
}

json cmd_renewal_check(const ScenarioConfig& cfg, OutputDir& out, const RunOptions& ro) {
    const auto& p = cfg.between_host;
    const auto pde = run_pde(cfg, ro.grid_refine);
    auto clock = std::make_shared<bh::ImmuneClock>(p);
    const bh::RenewalHistory hist{history_from_density(cfg, clock), {}};
    bh::RenewalOptions ropt;
    ropt.h = cfg.renewal_h;
    const auto ren = bh::simulate_renewal(p, hist, cfg.S0, cfg.t_max, ropt);

    CsvBuilder csv{"t", "S_renewal", "F_renewal", "S_pde", "F_pde"};
    double max_diff = 0.0, max_F = 0.0;
    for (std::size_t i = 0; i < pde.t.size(); ++i) {
        const double Fr = interpolate(ren.t, ren.F, pde.t[i]);
        const double Sr = interpolate(ren.t, ren.S, pde.t[i]);
        csv.row({pde.t[i], Sr, Fr, pde.S[i], pde.F[i]});
        max_diff = std::max(max_diff, std::abs(Fr - pde.F[i]));
        max_F = std::max(max_F, std::abs(pde.F[i]));
    }
    out.write_text("renewal.csv", csv.str());

    json summary{{"matched", p.beta_e == 0.0 && cfg.B0 == 0.0},
                 {"window", ren.window},
                 {"h", cfg.renewal_h},
                 {"max_abs_F_difference", max_diff},
                 {"max_rel_F_difference", max_F > 0.0 ? max_diff / max_F : 0.0},
                 {"final", {{"S", ren.S.back()}, {"F", ren.F.back()}}}};
    if (const auto eq = bh::endemic_equilibrium(p, cfg.quadrature())) {
        summary["endemic_identity"] = bh::renewal_identity(p);
        summary["F_star"] = p.r / eq->S - p.mu1;
        summary["S_star"] = eq->S;
    }
    return summary;
}

json cmd_spectral(const ScenarioConfig& cfg, OutputDir& out) {
    const auto& p = cfg.between_host;
    json summary{{"R0", bh::r0(p, cfg.quadrature())},
                 {"G0", bh::dfe_char_G(0.0, p, cfg.quadrature())},
                 {"lambda_hat", bh::dfe_spectral_root(p, cfg.quadrature())},
                 {"reduced_case", bh::is_reduced_case(p)}};
    if (!bh::endemic_equilibrium(p, cfg.quadrature())) {
        summary["endemic_scan"] = nullptr;
        return summary;
    }
    const auto scan = bh::scan_endemic_residual(p, cfg.scan.lo, cfg.scan.hi, cfg.scan.step, cfg.quadrature());
    CsvBuilder csv{"lambda", "residual"};
    for (std::size_t i = 0; i < scan.lambda.size(); ++i) csv.row({scan.lambda[i], scan.residual[i]});
    out.write_text("endemic_scan.csv", csv.str());
    summary["endemic_scan"] = {{"lo", scan.lo},
                               {"hi", scan.hi},
                               {"step", scan.step},
                               {"roots", scan.roots},
                               {"min_abs_residual", scan.min_abs_residual}};
    if (bh::is_reduced_case(p))
        summary["reduced_residual_at_0"] = bh::endemic_char_residual_reduced(0.0, p, cfg.quadrature());
    return summary;
}

// ------------------------------------------------------------------ plot data

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ValidationError("plot-data", "column " + name + " missing");
        return static_cast<std::size_t>(it - header.begin());
    }
    double num(std::size_t r, const std::string& name) const { return std::stod(rows[r][col(name)]); }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

Table read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("plot-data", "missing upstream output " + path.filename().string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("plot-data", "empty file " + path.string());
    t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

// Emits one gnuplot block per run of equal stability so line styles can
// follow the tag.
void branch_blocks(std::string& out, const Table& t, const std::string& kind) {
    std::string last;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string stab = t.rows[r][t.col("stability")];
        if (r > 0 && stab != last) {
            // Repeat the boundary point so segments join.
            out += fmt::format("{} {} {} {}\n\n", t.rows[r][t.col("param")], t.rows[r][t.col("P")], last, kind);
        }
        out += fmt::format("{} {} {} {}\n", t.rows[r][t.col("param")], t.rows[r][t.col("P")], stab, kind);
        last = stab;
    }
    out += "\n\n";
}

void cycle_blocks(std::string& out, const Table& t) {
    for (const char* which : {"P_max", "P_min"}) {
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            if (t.num(r, "oscillating") == 0.0) continue;
            out += fmt::format("{} {} stable_cycle cycle_{}\n", t.rows[r][t.col("param")],
                               t.rows[r][t.col(which)], which[2] == 'a' ? "max" : "min");
        }
        out += "\n\n";
    }
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"within-sim", "bifurcate", "manifold", "r0",
                                                "equilibria", "epi-sim", "renewal-check", "spectral"};
    return names;
}

RunOutput run_command(const std::string& sub, const ScenarioConfig& cfg, const fs::path& dir,
                      const RunOptions& ro) {
    if (std::find(subcommands().begin(), subcommands().end(), sub) == subcommands().end())
        throw ValidationError("subcommand", "unknown subcommand '" + sub + "'");
    if (ro.grid_refine < 1) throw ValidationError("grid-refine", "must be at least 1");
    OutputDir out(dir);

    json result;
    if (sub == "within-sim") result = cmd_within_sim(cfg, out);
    else if (sub == "bifurcate") result = cmd_bifurcate(cfg, out);
    else if (sub == "manifold") result = cmd_manifold(cfg, out);
    else if (sub == "r0") result = cmd_r0(cfg, out);
    else if (sub == "equilibria") result = cmd_equilibria(cfg, out);
    else if (sub == "epi-sim") result = cmd_epi_sim(cfg, out, ro);
    else if (sub == "renewal-check") result = cmd_renewal_check(cfg, out, ro);
    else result = cmd_spectral(cfg, out);

    json warnings = json::array();
    for (const auto& w : cfg.within_host.warnings()) warnings.push_back(w);
    json summary{{"command", sub},
                 {"config", cfg.echo()},
                 {"options", {{"grid_refine", ro.grid_refine}, {"seed", ro.seed ? json(*ro.seed) : json(nullptr)}}},
                 {"warnings", warnings},
                 {"result", result}};
    out.write_json("summary.json", summary);

    RunOutput r;
    r.dir = dir;
    r.files = out.files();
    r.summary = summary;
    r.manifest = out.write_manifest();
    return r;
}

RunOutput emit_plot_data(const fs::path& dir, const std::string& figure) {
    std::string text;
    std::string name;
    if (figure == "fig1" || figure == "fig2") {
        const std::string tag = figure == "fig1" ? "delta" : "W";
        // Read everything first so a missing input writes nothing.
        const Table upper = read_csv(dir / ("branch_" + tag + "_upper.csv"));
        const Table lower = read_csv(dir / ("branch_" + tag + "_lower.csv"));
        const Table trivial = read_csv(dir / ("branch_" + tag + "_trivial.csv"));
        const Table cycles = read_csv(dir / ("cycles_" + tag + ".csv"));
        text = fmt::format("# {} P stability kind\n", tag);
        branch_blocks(text, upper, "equilibrium_upper");
        branch_blocks(text, lower, "equilibrium_lower");
        branch_blocks(text, trivial, "equilibrium_trivial");
        cycle_blocks(text, cycles);
        name = figure + ".dat";
    } else if (figure == "fig3") {
        const Table manifold = read_csv(dir / "manifold.csv");
        const Table traj = read_csv(dir / "trajectory.csv");
        text = "# P W kind\n";
        for (std::size_t r = 0; r < manifold.rows.size(); ++r)
            text += fmt::format("{} {} manifold\n", manifold.rows[r][manifold.col("P")],
                                manifold.rows[r][manifold.col("W_manifold")]);
        text += "\n\n";
        for (std::size_t r = 0; r < manifold.rows.size(); ++r)
            text += fmt::format("{} {} nullcline\n", manifold.rows[r][manifold.col("P")],
                                manifold.rows[r][manifold.col("W_nullcline")]);
        text += "\n\n";
        for (std::size_t r = 0; r < traj.rows.size(); ++r)
            text += fmt::format("{} {} trajectory\n", traj.rows[r][traj.col("P")], traj.rows[r][traj.col("W")]);
        name = "fig3.dat";
    } else {
        throw ValidationError("figure", "must be fig1, fig2 or fig3");
    }
    OutputDir out(dir);
    out.write_text(name, text);
    RunOutput r;
    r.dir = dir;
    r.files = out.files();
    r.summary = {{"figure", figure}, {"file", name}};
    r.manifest = out.write_manifest();
    return r;
}

}  // namespace cholera::io
