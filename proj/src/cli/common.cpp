#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "abcd/cli/commands.hpp"

namespace abcd::cli {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fs::path resolve_output_dir(const Options& opt) {
    if (opt.out) return *opt.out;
    if (const char* root = std::getenv("ABCD_OUT_ROOT"); root && *root) return fs::path(root) / opt.subcommand;
    return fs::path("abcd_out") / opt.subcommand;
}

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw ConfigError("output path exists and is not a directory: " + dir.string());
        if (!fs::is_empty(dir, ec)) throw ConfigError("output directory is not empty: " + dir.string());
        return;
    }
    if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
    if (!fs::create_directory(dir, ec) && !fs::is_directory(dir))
        throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file_atomic(const fs::path& p, const std::string& content) {
    fs::path tmp = p;
    tmp += ".partial";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, p);
}

void write_manifest(const fs::path& dir, const RunManifest& m, const Config& cfg) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["config_path"] = m.config_path;
    j["output_dir"] = m.output_dir;
    j["seed"] = m.seed;
    j["jobs"] = m.jobs;
    j["resolved"] = m.resolved;
    write_file_atomic(dir / "manifest.json", j.dump(2) + "\n");
    if (!m.config_path.empty()) write_file_atomic(dir / "config.ini", cfg.text());
}

atlas::NormalizedParameters read_parameters(const Config& cfg, atlas::NormalizedParameters fallback) {
    const auto a = cfg.find_double("parameters", "a");
    const auto c = cfg.find_double("parameters", "c");
    const auto nu = cfg.find_double("parameters", "nu");
    const auto b = cfg.find_double("parameters", "b");
    const bool direct = a || c;
    const bool chart = nu || b;
    if (direct && chart) throw cfg.error_at("parameters", a ? "a" : "c", "give either (a, c) or (nu, b), not both");
    if (direct) {
        if (!a || !c) throw cfg.error_at("parameters", a ? "a" : "c", "a and c must be given together");
        if (!(*a < 0.0 && *c < 0.0)) throw cfg.error_at("parameters", "a", "normalized a, c must be negative");
        return {*a, *c, 0.0};
    }
    if (chart) {
        if (!nu || !b) throw cfg.error_at("parameters", nu ? "nu" : "b", "nu and b must be given together");
        try {
            return atlas::normalize(atlas::from_nu_b({*nu, *b}));
        } catch (const atlas::ParameterError& e) {
            throw cfg.error_at("parameters", "nu", std::string("inadmissible point: ") + e.what());
        }
    }
    return fallback;
}

sim::SimulationConfig read_simulation_config(const Config& cfg) {
    sim::SimulationConfig s;
    s.params = read_parameters(cfg, s.params);

    s.grid.N = static_cast<std::size_t>(cfg.get_int("grid", "N", static_cast<long long>(s.grid.N)));
    s.grid.L = cfg.get_double("grid", "L", s.grid.L);

    const std::string preset = cfg.get_string("initial", "preset", "gaussian");
    if (preset == "gaussian") {
        s.initial.kind = sim::InitialKind::gaussian;
    } else if (preset == "solitary") {
        s.initial.kind = sim::InitialKind::solitary;
        s.T = 10.0;
        s.grid.N = cfg.has("grid", "N") ? s.grid.N : 2048;
    } else if (preset == "zero") {
        s.initial.kind = sim::InitialKind::zero;
    } else {
        throw cfg.error_at("initial", "preset", "expected gaussian | solitary | zero, got '" + preset + "'");
    }
    const double amp = cfg.get_double("initial", "amp", 0.01);
    s.initial.amp_u = cfg.get_double("initial", "amp_u", amp);
    s.initial.amp_eta = cfg.get_double("initial", "amp_eta", amp);
    s.initial.width = cfg.get_double("initial", "width", s.initial.width);
    s.initial.center = cfg.get_double("initial", "center", s.initial.center);

    s.dt = cfg.get_double("time", "dt", s.dt);
    s.T = cfg.get_double("time", "T", s.T);
    const long long cad = cfg.get_int("time", "cadence", s.cadence);
    if (cad < 1 || cad > 1000000) throw cfg.error_at("time", "cadence", "must be in [1, 1e6]");
    s.cadence = static_cast<int>(cad);

    s.lambda = cfg.get_double("weights", "lambda", s.lambda);
    const std::string mode = cfg.get_string("weights", "mode", "fixed");
    if (mode == "fixed") {
        s.time_dependent_weight = false;
    } else if (mode == "moving") {
        s.time_dependent_weight = true;
    } else {
        throw cfg.error_at("weights", "mode", "expected fixed | moving, got '" + mode + "'");
    }
    s.C0 = cfg.get_double("weights", "C0", s.C0);
    s.t0 = cfg.get_double("weights", "t0", s.t0);

    const auto al = cfg.find_double("virial", "alpha");
    const auto be = cfg.find_double("virial", "beta");
    if (al || be) s.alpha_beta = atlas::AlphaBeta{al.value_or(0.0), be.value_or(0.0)};

    s.nonlinear = cfg.get_bool("numerics", "nonlinear", true);
    const std::string da = cfg.get_string("numerics", "dealias", "auto");
    if (da == "auto") {
        s.dealias = sim::DealiasMode::automatic;
    } else if (da == "on") {
        s.dealias = sim::DealiasMode::on;
    } else if (da == "off") {
        s.dealias = sim::DealiasMode::off;
    } else {
        throw cfg.error_at("numerics", "dealias", "expected auto | on | off");
    }
    s.blowup_factor = cfg.get_double("numerics", "blowup_factor", s.blowup_factor);

    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(cfg.source() + ": invalid simulation settings: " + e.what());
    }
    return s;
}

nlohmann::json to_json(const sim::SimulationConfig& c) {
    nlohmann::json j;
    j["a"] = c.params.a;
    j["c"] = c.params.c;
    j["b_origin"] = c.params.b_origin;
    j["N"] = c.grid.N;
    j["L"] = c.grid.L;
    j["dt"] = c.resolved_dt();
    j["T"] = c.T;
    j["cadence"] = c.cadence;
    j["initial"] = {{"preset", sim::to_string(c.initial.kind)},
                    {"amp_u", c.initial.amp_u},
                    {"amp_eta", c.initial.amp_eta},
                    {"width", c.initial.width},
                    {"center", c.initial.center}};
    j["lambda"] = c.lambda;
    j["weight_mode"] = c.time_dependent_weight ? "moving" : "fixed";
    j["C0"] = c.C0;
    j["t0"] = c.t0;
    const auto ab = c.resolved_alpha_beta();
    j["alpha"] = ab.alpha;
    j["beta"] = ab.beta;
    j["nonlinear"] = c.nonlinear;
    j["dealias"] = c.resolved_dealias();
    j["blowup_factor"] = c.blowup_factor;
    return j;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned t = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int run_command(const Options& opt, std::ostream& out, std::ostream& err) {
    try {
        Config cfg = opt.config ? Config::load(*opt.config) : Config{};
        if (opt.subcommand == "atlas") return cmd_atlas(opt, cfg, out);
        if (opt.subcommand == "simulate") return cmd_simulate(opt, cfg, out);
        if (opt.subcommand == "verify") return cmd_verify(opt, cfg, out);
        if (opt.subcommand == "dispersion") return cmd_dispersion(opt, cfg, out);
        err << "unknown subcommand '" << opt.subcommand << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const atlas::ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace abcd::cli
