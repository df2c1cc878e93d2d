#include "cholera/io/scenario.hpp"

#include "cholera/numerics/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace cholera::io {

namespace {

// Reads one JSON object and remembers which keys were consumed so that
// anything left over can be rejected.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ValidationError(path_, "must be a JSON object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json* get(const std::string& key) {
        if (!obj_.contains(key)) return nullptr;
        used_.insert(key);
        return &obj_.at(key);
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) throw ValidationError(field(key), "must be a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ValidationError(field(key), "must be finite");
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) throw ValidationError(field(key), "must be an integer");
            const auto x = v->get<long long>();
            if (x < 0) throw ValidationError(field(key), "must be non-negative");
            out = static_cast<Int>(x);
        }
    }

    void finish() const {
        for (const auto& [key, _] : obj_.items())
            if (!used_.count(key)) throw ValidationError(field(key), "unknown key");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

void read_sweep(Section& parent, const std::string& key, bifurcation::Sweep& sweep) {
    const json* v = parent.get(key);
    if (!v) return;
    Section s(*v, parent.field(key));
    if (const json* r = s.get("range")) {
        if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number())
            throw ValidationError(s.field("range"), "must be a pair of numbers");
        sweep.range = {(*r)[0].get<double>(), (*r)[1].get<double>()};
    }
    s.integer("n", sweep.n);
    if (sweep.which == bifurcation::SweepParameter::Delta) s.number("frozen_w", sweep.frozen_w);
    s.finish();
    try {
        sweep.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(parent.field(key), e.what());
    }
}

FunctionSpec read_function(Section& functions, const std::string& key, json fallback) {
    FunctionSpec spec;
    const json* v = functions.get(key);
    spec.descriptor = v ? *v : std::move(fallback);
    if (!spec.descriptor.is_object() || !spec.descriptor.contains("family") ||
        !spec.descriptor["family"].is_string())
        throw ValidationError(functions.field(key), "must be an object with a string 'family'");
    spec.within_host_derived = spec.descriptor["family"] == "within_host";
    return spec;
}

}  // namespace

between_host::Coefficient make_coefficient(const json& d, const std::string& field) {
    Section s(d, field);
    const std::string family = s.get("family")->get<std::string>();
    between_host::Coefficient c;
    auto num = [&](const char* key) {
        if (!s.has(key)) throw ValidationError(s.field(key), "required for family '" + family + "'");
        double x = 0.0;
        s.number(key, x);
        return x;
    };
    if (family == "constant") {
        c = between_host::Coefficient::constant(num("value"));
    } else if (family == "linear") {
        const double a = num("a");
        c = between_host::Coefficient::linear(a, num("b"));
    } else if (family == "exponential") {
        const double a = num("a");
        c = between_host::Coefficient::exponential(a, num("b"));
    } else if (family == "table") {
        const json* x = s.get("x");
        const json* y = s.get("y");
        if (!x || !y || !x->is_array() || !y->is_array())
            throw ValidationError(field, "table needs numeric arrays 'x' and 'y'");
        try {
            c = between_host::Coefficient::table(x->get<std::vector<double>>(), y->get<std::vector<double>>());
        } catch (const json::exception&) {
            throw ValidationError(field, "table entries must be numbers");
        } catch (const ValidationError& e) {
            throw ValidationError(field, e.what());
        }
    } else {
        throw ValidationError(s.field("family"), "unknown family '" + family + "'");
    }
    s.finish();
    return c;
}

ScenarioConfig parse_scenario(const json& doc) {
    ScenarioConfig cfg;
    Section root(doc, "");

    bool omega0_given = false;
    if (const json* v = root.get("within_host")) {
        Section s(*v, "within_host");
        auto& p = cfg.within_host;
        s.number("Lambda", p.Lambda);
        s.number("mu", p.mu);
        s.number("alpha", p.alpha);
        s.number("gamma", p.gamma);
        s.number("delta", p.delta);
        s.number("epsilon", p.epsilon);
        s.number("kappa", p.kappa);
        s.number("c", p.c);
        s.number("p_clear", cfg.p_clear);
        if (const json* init = s.get("initial")) {
            Section si(*init, "within_host.initial");
            si.number("T", cfg.within_initial.T);
            si.number("P", cfg.within_initial.P);
            si.number("W", cfg.within_initial.W);
            si.finish();
        }
        s.finish();
    }
    cfg.within_host.validate();
    if (!(cfg.p_clear > 0.0)) throw ValidationError("within_host.p_clear", "must be positive");
    if (cfg.within_initial.T < 0.0 || cfg.within_initial.P < 0.0 || cfg.within_initial.W < 0.0)
        throw ValidationError("within_host.initial", "state must be non-negative");

    if (const json* v = root.get("between_host")) {
        Section s(*v, "between_host");
        auto& p = cfg.between_host;
        s.number("r", p.r);
        s.number("mu1", p.mu1);
        s.number("mu3", p.mu3);
        s.number("beta_h", p.beta_h);
        s.number("beta_e", p.beta_e);
        s.number("rho", p.rho);
        s.number("sigma", p.sigma);
        omega0_given = s.has("omega0");
        s.number("omega0", p.omega0);
        s.number("a_bar", p.a_bar);
        if (const json* init = s.get("initial")) {
            Section si(*init, "between_host.initial");
            si.number("S", cfg.S0);
            si.number("V", cfg.V0);
            si.number("B", cfg.B0);
            si.finish();
        }
        s.finish();
    }
    if (cfg.S0 < 0.0 || cfg.V0 < 0.0 || cfg.B0 < 0.0)
        throw ValidationError("between_host.initial", "compartments must be non-negative");

    {
        static const json empty = json::object();
        const json* v = root.get("functions");
        Section s(v ? *v : empty, "functions");
        cfg.fn_mu2 = read_function(s, "mu2", {{"family", "constant"}, {"value", 0.1}});
        cfg.fn_xi = read_function(s, "xi", {{"family", "constant"}, {"value", 0.0}});
        cfg.fn_P = read_function(s, "P", {{"family", "constant"}, {"value", 1.0}});
        cfg.fn_g = read_function(s, "g", {{"family", "constant"}, {"value", 1.0}});
        cfg.fn_phi = read_function(s, "phi", {{"family", "constant"}, {"value", 0.01}});
        s.finish();

        for (const auto* f : {&cfg.fn_mu2, &cfg.fn_xi, &cfg.fn_phi})
            if (f->within_host_derived)
                throw ValidationError("functions", "only P and g may use the within_host family");
        auto& p = cfg.between_host;
        if (cfg.fn_P.within_host_derived || cfg.fn_g.within_host_derived) {
            if (omega0_given)
                throw ValidationError("between_host.omega0",
                                      "is fixed to W_fold when a within_host family is used");
            const auto link = between_host::within_host_link(cfg.within_host);
            p.omega0 = link.omega0;
            if (cfg.fn_P.within_host_derived) p.P = link.P;
            if (cfg.fn_g.within_host_derived) p.g = link.g;
        }
        p.mu2 = make_coefficient(cfg.fn_mu2.descriptor, "functions.mu2");
        p.xi = make_coefficient(cfg.fn_xi.descriptor, "functions.xi");
        if (!cfg.fn_P.within_host_derived) p.P = make_coefficient(cfg.fn_P.descriptor, "functions.P");
        if (!cfg.fn_g.within_host_derived) p.g = make_coefficient(cfg.fn_g.descriptor, "functions.g");
        cfg.phi = make_coefficient(cfg.fn_phi.descriptor, "functions.phi");
    }
    cfg.between_host.validate();
    for (int i = 0; i <= 64; ++i) {
        const double v = cfg.phi(cfg.between_host.omega0 * i / 64);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("functions.phi", "initial density must be non-negative and finite");
    }

    if (const json* v = root.get("grid")) {
        Section s(*v, "grid");
        s.integer("n_omega", cfg.grid.n_omega);
        s.number("dt", cfg.grid.dt);
        s.number("cfl", cfg.grid.cfl);
        s.integer("quadrature_panels", cfg.quadrature_panels);
        s.number("renewal_h", cfg.renewal_h);
        s.finish();
    }
    cfg.grid.validate();
    cfg.quadrature().validate();
    if (!(cfg.renewal_h > 0.0)) throw ValidationError("grid.renewal_h", "must be positive");

    if (const json* v = root.get("run")) {
        Section s(*v, "run");
        s.number("t_max", cfg.t_max);
        s.number("record_interval", cfg.record_interval);
        s.number("snapshot_interval", cfg.snapshot_interval);
        read_sweep(s, "delta_sweep", cfg.delta_sweep);
        read_sweep(s, "w_sweep", cfg.w_sweep);
        if (const json* c = s.get("cycles")) {
            Section sc(*c, "run.cycles");
            sc.integer("samples", cfg.cycles.samples);
            sc.number("transient", cfg.cycles.transient);
            sc.number("window", cfg.cycles.window);
            sc.number("homoclinic_period", cfg.cycles.homoclinic_period);
            sc.number("min_rel_amplitude", cfg.cycles.min_rel_amplitude);
            sc.number("perturbation", cfg.cycles.perturbation);
            sc.number("max_step", cfg.cycles.max_step);
            sc.finish();
        }
        if (const json* c = s.get("lambda_scan")) {
            Section sc(*c, "run.lambda_scan");
            sc.number("lo", cfg.scan.lo);
            sc.number("hi", cfg.scan.hi);
            sc.number("step", cfg.scan.step);
            sc.finish();
        }
        s.finish();
    }
    if (!(cfg.t_max > 0.0)) throw ValidationError("run.t_max", "must be positive");
    if (cfg.record_interval < 0.0) throw ValidationError("run.record_interval", "must be >= 0");
    if (cfg.snapshot_interval < 0.0) throw ValidationError("run.snapshot_interval", "must be >= 0");
    if (!(cfg.cycles.window > 0.0) || cfg.cycles.transient < 0.0)
        throw ValidationError("run.cycles", "need transient >= 0 and window > 0");
    if (!(cfg.cycles.max_step > 0.0)) throw ValidationError("run.cycles.max_step", "must be positive");
    if (!(cfg.scan.hi > cfg.scan.lo) || !(cfg.scan.step > 0.0))
        throw ValidationError("run.lambda_scan", "need lo < hi and step > 0");

    root.finish();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

json ScenarioConfig::echo() const {
    const auto& w = within_host;
    const auto& b = between_host;
    auto sweep = [](const bifurcation::Sweep& s) {
        json j{{"range", {s.range.start, s.range.end}}, {"n", s.n}};
        if (s.which == bifurcation::SweepParameter::Delta) j["frozen_w"] = s.frozen_w;
        return j;
    };
    return {
        {"within_host",
         {{"Lambda", w.Lambda}, {"mu", w.mu}, {"alpha", w.alpha}, {"gamma", w.gamma},
          {"delta", w.delta}, {"epsilon", w.epsilon}, {"kappa", w.kappa}, {"c", w.c},
          {"p_clear", p_clear},
          {"initial", {{"T", within_initial.T}, {"P", within_initial.P}, {"W", within_initial.W}}}}},
        {"between_host",
         {{"r", b.r}, {"mu1", b.mu1}, {"mu3", b.mu3}, {"beta_h", b.beta_h}, {"beta_e", b.beta_e},
          {"rho", b.rho}, {"sigma", b.sigma}, {"omega0", b.omega0}, {"a_bar", b.a_bar},
          {"initial", {{"S", S0}, {"V", V0}, {"B", B0}}}}},
        {"functions",
         {{"mu2", fn_mu2.descriptor}, {"xi", fn_xi.descriptor}, {"P", fn_P.descriptor},
          {"g", fn_g.descriptor}, {"phi", fn_phi.descriptor}}},
        {"grid",
         {{"n_omega", grid.n_omega}, {"dt", grid.dt}, {"cfl", grid.cfl},
          {"quadrature_panels", quadrature_panels}, {"renewal_h", renewal_h}}},
        {"run",
         {{"t_max", t_max}, {"record_interval", record_interval},
          {"snapshot_interval", snapshot_interval}, {"delta_sweep", sweep(delta_sweep)},
          {"w_sweep", sweep(w_sweep)},
          {"cycles",
           {{"samples", cycles.samples}, {"transient", cycles.transient}, {"window", cycles.window},
            {"homoclinic_period", cycles.homoclinic_period},
            {"min_rel_amplitude", cycles.min_rel_amplitude}, {"perturbation", cycles.perturbation},
            {"max_step", cycles.max_step}}},
          {"lambda_scan", {{"lo", scan.lo}, {"hi", scan.hi}, {"step", scan.step}}}}},
    };
}

}  // namespace cholera::io
