#include "cholera/io/commands.hpp"

#include "cholera/numerics/errors.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <map>

namespace cholera::cli {

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("cholera");
    spdlog::set_default_logger(logger);
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("TOOL_LOG")) level = spdlog::level::from_str(env);
    spdlog::set_level(level);
}

struct SubOptions {
    std::string config;
    std::string out = "out";
    int grid_refine = 1;
    std::optional<long long> seed;
    std::string figure;
};

}  // namespace

int run(const std::vector<std::string>& args) {
    if (!spdlog::get("cholera")) setup_logging();

    CLI::App app{"Within-host and between-host cholera model analyses"};
    app.require_subcommand(1);
    std::map<std::string, SubOptions> opts;
    std::map<std::string, CLI::App*> subs;

    auto common = [&](CLI::App* sc, SubOptions& o, bool needs_config) {
        auto* c = sc->add_option("--config", o.config, "scenario JSON file");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sc->add_option("--out", o.out, "output directory")->capture_default_str();
        sc->add_option("--grid-refine", o.grid_refine, "refinement factor for the epidemic grid")
            ->check(CLI::Range(1, 1 << 20))
            ->capture_default_str();
        sc->add_option("--seed", o.seed, "recorded in summary.json; all analyses are deterministic");
    };
    for (const auto& name : io::subcommands()) {
        auto* sc = app.add_subcommand(name);
        common(sc, opts[name], true);
        subs[name] = sc;
    }
    auto* plot = app.add_subcommand("plot-data", "gnuplot data for fig1, fig2 or fig3");
    common(plot, opts["plot-data"], false);
    plot->add_option("--figure", opts["plot-data"].figure)->required()->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    subs["plot-data"] = plot;

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& [name, sc] : subs) {
            if (!sc->parsed()) continue;
            const auto& o = opts[name];
            io::RunOutput res;
            if (name == "plot-data") {
                res = io::emit_plot_data(o.out, o.figure);
            } else {
                const auto cfg = io::load_scenario(o.config);
                res = io::run_command(name, cfg, o.out, {o.grid_refine, o.seed});
            }
            for (const auto& f : res.files) std::cout << (res.dir / f).string() << '\n';
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace cholera::cli
