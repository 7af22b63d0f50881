// levy-extrema: batch front-end for the extrema-distribution pipeline.
// Commands: factorize | density | ruin | validate, driven by a JSON config.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "levx/mc.hpp"
#include "levx/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// deterministic JSON writing (17 significant digits for floating point)
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_json(std::ostream& os, const ordered_json& j, int indent) {
    const std::string pad(indent, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            std::size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                os << pad << "  " << ordered_json(it.key()).dump() << ": ";
                write_json(os, it.value(), indent + 2);
                if (k + 1 < j.size()) os << ",";
                os << "\n";
            }
            os << pad << "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                os << pad << "  ";
                write_json(os, j[k], indent + 2);
                if (k + 1 < j.size()) os << ",";
                os << "\n";
            }
            os << pad << "]";
            return;
        }
        case ordered_json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

std::string render_json(const ordered_json& j) {
    std::ostringstream os;
    write_json(os, j, 0);
    os << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// config parsing with strict key checking
// ---------------------------------------------------------------------------

void require_keys(const ordered_json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

double get_number(const ordered_json& obj, const std::string& where, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

levx::LevyModel parse_model(const ordered_json& m) {
    require_keys(m, "model",
                 {"family", "mu", "sigma", "tilt", "intensity", "jumps", "alpha", "beta", "delta",
                  "lambda", "scale"});
    if (!m.contains("family") || !m["family"].is_string()) {
        throw ConfigError("model: missing 'family'");
    }
    const std::string family = m["family"].get<std::string>();
    if (family == "brownian_drift") {
        return levx::BrownianDrift{get_number(m, "model", "mu", 0.0),
                                   get_number(m, "model", "sigma")};
    }
    if (family == "cosech_squared") {
        return levx::CosechSquaredJumps{get_number(m, "model", "mu", 0.0),
                                        get_number(m, "model", "sigma", 0.0),
                                        get_number(m, "model", "tilt", 0.0)};
    }
    if (family == "generalized_hyperbolic") {
        return levx::GeneralizedHyperbolic{
            get_number(m, "model", "lambda"), get_number(m, "model", "alpha"),
            get_number(m, "model", "beta", 0.0), get_number(m, "model", "delta"),
            get_number(m, "model", "mu", 0.0)};
    }
    if (family == "symmetric_stable") {
        return levx::SymmetricStable{get_number(m, "model", "mu", 0.0),
                                     get_number(m, "model", "alpha"),
                                     get_number(m, "model", "scale", 1.0)};
    }
    if (family == "compound_poisson_mixed_gamma") {
        levx::CompoundPoissonMixedGamma cp;
        cp.mu = get_number(m, "model", "mu", 0.0);
        cp.sigma = get_number(m, "model", "sigma", 0.0);
        cp.intensity = get_number(m, "model", "intensity");
        if (!m.contains("jumps")) throw ConfigError("model: mixed-gamma family needs 'jumps'");
        const auto& jumps = m["jumps"];
        require_keys(jumps, "model.jumps", {"positive", "negative"});
        auto parse_side = [](const ordered_json& side, const std::string& where) {
            std::vector<levx::MixedGammaTerm> out;
            if (!side.is_array()) throw ConfigError(where + ": expected an array");
            for (const auto& term : side) {
                require_keys(term, where, {"weight", "shape", "rate"});
                out.push_back(levx::MixedGammaTerm{get_number(term, where, "weight"),
                                                   static_cast<int>(get_number(term, where, "shape")),
                                                   get_number(term, where, "rate")});
            }
            return out;
        };
        if (jumps.contains("positive")) {
            cp.jumps.positive = parse_side(jumps["positive"], "model.jumps.positive");
        }
        if (jumps.contains("negative")) {
            cp.jumps.negative = parse_side(jumps["negative"], "model.jumps.negative");
        }
        return cp;
    }
    throw ConfigError("model: unknown family '" + family + "'");
}

levx::StoppingTime parse_stopping(const ordered_json& s) {
    require_keys(s, "stopping", {"kind", "q"});
    if (!s.contains("kind") || !s["kind"].is_string()) {
        throw ConfigError("stopping: missing 'kind'");
    }
    const std::string kind = s["kind"].get<std::string>();
    const double q = get_number(s, "stopping", "q");
    if (kind == "exponential") return levx::StoppingTime::exponential(q);
    if (kind == "geometric") return levx::StoppingTime::geometric(q);
    throw ConfigError("stopping: unknown kind '" + kind + "'");
}

levx::PipelineOptions parse_pipeline(const ordered_json& p) {
    levx::PipelineOptions opts;
    if (p.is_null()) return opts;
    require_keys(p, "pipeline",
                 {"pole_count", "class", "grid_halfwidth", "grid_points", "p", "search",
                  "coefficients"});
    opts.pole_count = static_cast<std::size_t>(
        get_number(p, "pipeline", "pole_count", static_cast<double>(opts.pole_count)));
    if (p.contains("class")) {
        const std::string cls = p["class"].get<std::string>();
        if (cls == "D") {
            opts.cls = levx::RationalClass::D;
        } else if (cls == "Dstar") {
            opts.cls = levx::RationalClass::DStar;
        } else {
            throw ConfigError("pipeline.class: expected 'D' or 'Dstar'");
        }
    }
    opts.grid_halfwidth = get_number(p, "pipeline", "grid_halfwidth", opts.grid_halfwidth);
    opts.grid_points = static_cast<std::size_t>(
        get_number(p, "pipeline", "grid_points", static_cast<double>(opts.grid_points)));
    opts.norm_order = get_number(p, "pipeline", "p", opts.norm_order);
    if (p.contains("search")) {
        const auto& s = p["search"];
        require_keys(s, "pipeline.search",
                     {"im_min", "im_max", "re_max", "re_margin", "axis_samples", "max_depth"});
        opts.region.im_min = get_number(s, "pipeline.search", "im_min", opts.region.im_min);
        opts.region.im_max = get_number(s, "pipeline.search", "im_max", opts.region.im_max);
        opts.region.re_max = get_number(s, "pipeline.search", "re_max", opts.region.re_max);
        opts.region.re_margin =
            get_number(s, "pipeline.search", "re_margin", opts.region.re_margin);
        opts.region.axis_samples = static_cast<int>(get_number(
            s, "pipeline.search", "axis_samples", opts.region.axis_samples));
        opts.region.max_depth = static_cast<int>(
            get_number(s, "pipeline.search", "max_depth", opts.region.max_depth));
    }
    if (p.contains("coefficients")) {
        if (!p["coefficients"].is_array()) {
            throw ConfigError("pipeline.coefficients: expected an array");
        }
        std::vector<double> c;
        for (const auto& v : p["coefficients"]) c.push_back(v.get<double>());
        opts.coefficient_override = std::move(c);
    }
    return opts;
}

struct ValidateOptions {
    levx::SimConfig sim;
};

ValidateOptions parse_validate(const ordered_json& v) {
    ValidateOptions out;
    out.sim.bridge_correction = true;
    if (v.is_null()) return out;
    require_keys(v, "validate", {"paths", "dt", "seed", "bridge_correction", "threads"});
    out.sim.paths = static_cast<std::size_t>(
        get_number(v, "validate", "paths", static_cast<double>(out.sim.paths)));
    out.sim.dt = get_number(v, "validate", "dt", out.sim.dt);
    out.sim.seed = static_cast<std::uint64_t>(
        get_number(v, "validate", "seed", static_cast<double>(out.sim.seed)));
    if (v.contains("bridge_correction")) {
        out.sim.bridge_correction = v["bridge_correction"].get<bool>();
    }
    out.sim.threads =
        static_cast<unsigned>(get_number(v, "validate", "threads", out.sim.threads));
    return out;
}

// ---------------------------------------------------------------------------
// result serialization
// ---------------------------------------------------------------------------

ordered_json resolved_config_json(const ordered_json& raw, const std::string& command,
                                  const std::string& out_dir,
                                  std::optional<std::uint64_t> seed) {
    ordered_json resolved = raw;
    resolved["command"] = command;
    if (!resolved.contains("output")) resolved["output"] = ordered_json::object();
    resolved["output"]["directory"] = out_dir;
    if (seed) {
        if (!resolved.contains("validate")) resolved["validate"] = ordered_json::object();
        resolved["validate"]["seed"] = static_cast<double>(*seed);
    }
    return resolved;
}

ordered_json density_terms_json(const levx::ExtremaDensity& d, const char* side) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : d.terms) {
        ordered_json entry;
        entry["side"] = side;
        entry["coef"] = t.coef;
        entry["rate"] = t.rate;
        entry["degree"] = t.degree;
        entry["freq"] = t.freq;
        entry["phase"] = t.phase;
        arr.push_back(entry);
    }
    return arr;
}

ordered_json manifest_json(const levx::PipelineResult& res, double bound_p,
                           const ordered_json& resolved_config) {
    ordered_json m;
    ordered_json poles = ordered_json::array();
    for (const auto& p : res.poles.all()) {
        ordered_json e;
        e["re"] = p.location.real();
        e["im"] = p.location.imag();
        e["multiplicity"] = p.multiplicity;
        poles.push_back(e);
    }
    m["poles"] = poles;

    ordered_json coeffs = ordered_json::array();
    for (const auto& [term, c] : res.approximant.terms) {
        ordered_json e;
        switch (term.form) {
            case levx::BasisForm::R1: e["form"] = "r1"; break;
            case levx::BasisForm::R2: e["form"] = "r2"; break;
            case levx::BasisForm::R3: e["form"] = "r3"; break;
            case levx::BasisForm::R4: e["form"] = "r4"; break;
        }
        e["rate"] = term.rate;
        if (term.form == levx::BasisForm::R3 || term.form == levx::BasisForm::R4) {
            e["osc"] = term.osc;
        }
        e["power"] = term.power;
        e["value"] = c;
        coeffs.push_back(e);
    }
    m["coefficients"] = coeffs;
    m["a0"] = res.a0;
    m["fit_error"] = res.fit_err;
    m["bound_p"] = bound_p;
    m["bound_value"] = res.bound_value;
    m["atom_sup"] = res.supremum.atom;
    m["atom_inf"] = res.infimum.atom;
    ordered_json terms = density_terms_json(res.supremum, "supremum");
    for (const auto& t : density_terms_json(res.infimum, "infimum")) terms.push_back(t);
    m["density_terms"] = terms;
    m["rescale_plus"] = res.rescale_plus;
    m["rescale_minus"] = res.rescale_minus;
    if (!res.warnings.empty()) {
        m["warnings"] = res.warnings;
    }
    m["config"] = resolved_config;
    return m;
}

std::string density_csv(const levx::ExtremaDensity& d) {
    // atom-only densities have no rates; keep a unit window so the file still plots
    const double window = d.terms.empty() ? 1.0 : 10.0 / d.min_rate();
    std::ostringstream os;
    os << "x,density\n";
    const int rows = 2001;
    for (int k = 0; k < rows; ++k) {
        double x = window * static_cast<double>(k) / (rows - 1);
        if (d.side == levx::ExtremumSide::Infimum) x = -window + x;
        os << format_double(x) << "," << format_double(d.eval(x)) << "\n";
    }
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wiener-Hopf extrema distributions for Levy processes"};
    std::string command, config_path, out_override;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_raw = 0;
    app.add_option("command", command, "factorize | density | ruin | validate")->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_override, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", seed_raw, "RNG seed for validate");
    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) seed_override = seed_raw;

    ordered_json error_record;
    try {
        if (command != "factorize" && command != "density" && command != "ruin" &&
            command != "validate") {
            throw ConfigError("unknown command '" + command + "'");
        }
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file " + config_path);
        ordered_json cfg;
        try {
            cfg = ordered_json::parse(in);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        require_keys(cfg, "config",
                     {"command", "model", "stopping", "pipeline", "output", "ruin", "validate"});
        if (cfg.contains("command")) {
            const std::string declared = cfg["command"].get<std::string>();
            if (declared != command) {
                throw ConfigError("config declares command '" + declared +
                                  "' but CLI requested '" + command + "'");
            }
        }
        if (!cfg.contains("model")) throw ConfigError("config: missing 'model'");
        if (!cfg.contains("stopping")) throw ConfigError("config: missing 'stopping'");

        levx::LevyModel model = parse_model(cfg["model"]);
        levx::validate(model);
        levx::StoppingTime stop = parse_stopping(cfg["stopping"]);
        levx::PipelineOptions pipeline =
            parse_pipeline(cfg.contains("pipeline") ? cfg["pipeline"] : ordered_json());

        std::vector<double> ruin_reserves;
        if (command == "ruin") {
            if (!cfg.contains("ruin")) throw ConfigError("config: ruin command needs 'ruin'");
            require_keys(cfg["ruin"], "ruin", {"u_values"});
            if (!cfg["ruin"].contains("u_values") || !cfg["ruin"]["u_values"].is_array()) {
                throw ConfigError("ruin.u_values: expected an array");
            }
            for (const auto& v : cfg["ruin"]["u_values"]) {
                ruin_reserves.push_back(v.get<double>());
            }
        }
        ValidateOptions validate_opts =
            parse_validate(cfg.contains("validate") ? cfg["validate"] : ordered_json());
        if (seed_override) validate_opts.sim.seed = *seed_override;

        std::string out_dir = "out";
        if (cfg.contains("output")) {
            require_keys(cfg["output"], "output", {"directory"});
            if (cfg["output"].contains("directory")) {
                out_dir = cfg["output"]["directory"].get<std::string>();
            }
        }
        if (!out_override.empty()) out_dir = out_override;

        const ordered_json resolved =
            resolved_config_json(cfg, command, out_dir, seed_override);

        // ---- numerical stage -------------------------------------------------
        std::string stage = "pipeline";
        try {
            const levx::PipelineResult result = levx::run_pipeline(model, stop, pipeline);

            // collect all artifacts in memory before touching the filesystem
            std::vector<std::pair<std::string, std::string>> artifacts;
            artifacts.emplace_back("manifest.json",
                                   render_json(manifest_json(result, pipeline.norm_order,
                                                             resolved)));
            if (command == "density") {
                stage = "density";
                artifacts.emplace_back("sup_density.csv", density_csv(result.supremum));
                artifacts.emplace_back("inf_density.csv", density_csv(result.infimum));
            } else if (command == "ruin") {
                stage = "ruin";
                const levx::RuinCurve curve = levx::ruin_curve(
                    result.infimum, ruin_reserves, stop, levx::family_name(model));
                std::ostringstream os;
                os << "u,ruin_probability\n";
                for (std::size_t k = 0; k < curve.reserves.size(); ++k) {
                    os << format_double(curve.reserves[k]) << ","
                       << format_double(curve.probabilities[k]) << "\n";
                }
                artifacts.emplace_back("ruin.csv", os.str());
            } else if (command == "validate") {
                stage = "validate";
                const auto samples = levx::simulate_extrema(model, stop, validate_opts.sim);
                std::vector<double> sup, inf;
                sup.reserve(samples.size());
                inf.reserve(samples.size());
                for (const auto& s : samples) {
                    sup.push_back(s.supremum);
                    inf.push_back(s.infimum);
                }
                ordered_json report;
                report["paths"] = static_cast<double>(validate_opts.sim.paths);
                report["dt"] = validate_opts.sim.dt;
                report["seed"] = static_cast<double>(validate_opts.sim.seed);
                report["ks_supremum"] = levx::ks_distance(sup, result.supremum);
                report["ks_infimum"] = levx::ks_distance(inf, result.infimum);
                report["config"] = resolved;
                artifacts.emplace_back("validate_report.json", render_json(report));
            }

            fs::create_directories(out_dir);
            for (const auto& [name, content] : artifacts) {
                write_file(fs::path(out_dir) / name, content);
            }
        } catch (const levx::Error& e) {
            error_record["error"] = {{"stage", stage}, {"message", e.what()}};
            std::cerr << render_json(error_record);
            return kExitNumerical;
        }
        return 0;
    } catch (const ConfigError& e) {
        error_record["error"] = {{"stage", "config"}, {"message", e.what()}};
        std::cerr << render_json(error_record);
        return kExitConfig;
    } catch (const levx::DomainError& e) {
        error_record["error"] = {{"stage", "config"}, {"message", e.what()}};
        std::cerr << render_json(error_record);
        return kExitConfig;
    } catch (const std::exception& e) {
        error_record["error"] = {{"stage", "internal"}, {"message", e.what()}};
        std::cerr << render_json(error_record);
        return kExitNumerical;
    }
}
