#pragma once

#include "cholera/between_host/epidemic.hpp"
#include "cholera/between_host/model.hpp"
#include "cholera/bifurcation.hpp"
#include "cholera/within_host.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace cholera::io {

using json = nlohmann::json;

/// A named coefficient family as written in the config, kept so the summary
/// can echo it.
struct FunctionSpec {
    json descriptor;
    bool within_host_derived = false;
};

struct ScanSettings {
    double lo = 0.0;
    double hi = 50.0;
    double step = 0.01;
};

struct ScenarioConfig {
    within_host::Params within_host;
    within_host::State within_initial{0.5, 0.9, 0.0};
    double p_clear = 1e-6;

    between_host::Params between_host;
    double S0 = 10.0;
    double V0 = 0.0;
    double B0 = 0.0;
    between_host::Coefficient phi = between_host::Coefficient::constant(0.01);
    FunctionSpec fn_mu2, fn_xi, fn_P, fn_g, fn_phi;

    between_host::Grid grid;
    std::size_t quadrature_panels = 64;
    double renewal_h = 0.01;

    double t_max = 1000.0;
    double record_interval = 0.0;
    double snapshot_interval = 0.0;
    bifurcation::Sweep delta_sweep{bifurcation::SweepParameter::Delta, {0.1, 1.4}, 260, 0.9};
    bifurcation::Sweep w_sweep{bifurcation::SweepParameter::W, {0.0, 3.6}, 360, 0.0};
    bifurcation::CycleOptions cycles;
    ScanSettings scan;

    /// Every setting including defaults, in the config's own layout.
    json echo() const;
    numerics::QuadratureSpec quadrature() const {
        return {numerics::QuadratureRule::Simpson, quadrature_panels};
    }
};

/// Parses and validates a scenario document. Unknown keys, wrong types and
/// invalid values throw ValidationError naming the field (e.g.
/// "within_host.delta").
ScenarioConfig parse_scenario(const json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Builds a coefficient from a family descriptor such as
/// {"family": "exponential", "a": 1, "b": -0.1}.
between_host::Coefficient make_coefficient(const json& descriptor, const std::string& field);

}  // namespace cholera::io
