#include <cmath>
#include <fstream>
#include <sstream>

#include "abcd/cli/commands.hpp"

namespace abcd::cli {

namespace {

struct SweepPoint {
    sim::SimulationConfig cfg;
    double nu = std::nan("");
    double b = std::nan("");
    double amp = std::nan("");
};

double relative_drift(double x0, double x1) {
    const double d = std::abs(x1 - x0);
    return std::abs(x0) > 0.0 ? d / std::abs(x0) : d;
}

//! Runs one configuration into `dir`. Returns the summary written to summary.json.
nlohmann::json run_into(const fs::path& dir, const sim::SimulationConfig& cfg, std::ostream* log) {
    const sim::Grid g(cfg.grid);
    const sim::FieldPair init = sim::make_initial_data(g, cfg);

    std::ofstream csv(dir / "diagnostics.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write diagnostics.csv in " + dir.string());
    diag::write_csv_header(csv);
    const auto res = sim::run_from(cfg, init, [&](const diag::DiagnosticsRecord& r) {
        diag::write_csv_row(csv, r);
        csv.flush();
    });
    csv.close();

    nlohmann::json s;
    s["status"] = sim::to_string(res.status);
    s["message"] = res.message;
    s["steps"] = res.steps;
    s["t_final"] = res.t_final;
    s["records"] = res.records.size();
    if (res.final_state.all_finite()) sim::write_state_dump(dir / "final_state.bin", res.final_state, res.t_final);

    std::ostringstream rep;
    rep << "status " << sim::to_string(res.status) << ": " << res.message << '\n';
    rep << "steps " << res.steps << " t_final " << fmt17(res.t_final) << " dt " << fmt17(cfg.resolved_dt()) << '\n';

    const auto& R = res.records;
    if (!R.empty()) {
        const auto& r0 = R.front();
        const auto& r1 = R.back();
        const double e_drift = relative_drift(r0.E, r1.E);
        const double p_drift = relative_drift(r0.P, r1.P);
        double max_boundary = 0.0, min_dh = INFINITY, min_q = INFINITY;
        for (const auto& r : R) {
            max_boundary = std::max(max_boundary, r.boundary_flag);
            min_dh = std::min(min_dh, r.dH_predicted());
            min_q = std::min(min_q, r.Q);
        }
        s["E_drift"] = e_drift;
        s["P_drift"] = p_drift;
        s["max_boundary_flag"] = max_boundary;
        s["min_dH_dt"] = min_dh;
        s["min_Q"] = min_q;
        rep << "energy drift (relative) " << fmt17(e_drift) << '\n';
        rep << "momentum drift (relative) " << fmt17(p_drift) << '\n';
        rep << "max outer-domain amplitude " << fmt17(max_boundary) << '\n';
        rep << "min dH/dt " << fmt17(min_dh) << "  min Q " << fmt17(min_q) << '\n';

        if (res.final_state.all_finite()) {
            const double sup_drift = std::max((res.final_state.u - init.u).sup_norm(),
                                              (res.final_state.eta - init.eta).sup_norm());
            s["sup_drift"] = sup_drift;
            if (cfg.initial.kind == sim::InitialKind::solitary) {
                rep << "stationarity sup-drift " << fmt17(sup_drift) << " (threshold 1e-06) "
                    << (sup_drift < 1e-6 ? "ok" : "exceeded") << '\n';
            }
        }
        if (R.size() >= 3) {
            const auto h = diag::identity_residual(R, &diag::DiagnosticsRecord::H,
                                                   &diag::DiagnosticsRecord::dH_predicted, true);
            const auto e = diag::identity_residual(R, &diag::DiagnosticsRecord::E_loc,
                                                   &diag::DiagnosticsRecord::dEloc_predicted, false);
            s["dH_identity_residual"] = h.max_relative;
            s["dEloc_identity_residual"] = e.max_relative;
            s["dH_identity_absolute"] = h.max_absolute;
            s["dEloc_identity_absolute"] = e.max_absolute;
            // Relative numbers mean little when the rates themselves are at rounding level (stationary data).
            rep << "virial identity residual (pointwise relative) " << fmt17(h.max_relative) << ", absolute "
                << fmt17(h.max_absolute) << '\n';
            rep << "local energy identity residual (relative to max) " << fmt17(e.max_relative) << ", absolute "
                << fmt17(e.max_absolute) << '\n';
        }
        if (r0.localH1 > 0.0) {
            const double ratio = r1.localH1 / r0.localH1;
            const auto ti = diag::localized_time_integral(R, cfg.C0, cfg.t0);
            s["localH1_ratio"] = ratio;
            s["lambda_integral"] = ti.total;
            s["lambda_integral_tail_fraction"] = ti.tail_fraction();
            if (cfg.initial.kind == sim::InitialKind::gaussian) {
                rep << "decay localH1(T)/localH1(0) " << fmt17(ratio) << " at lambda " << fmt17(cfg.lambda)
                    << " (reference 0.5) " << (ratio < 0.5 ? "below" : "not below") << '\n';
                rep << "time integral of localH1/lambda(t): total " << fmt17(ti.total) << ", last-quarter share "
                    << fmt17(ti.tail_fraction()) << '\n';
            }
        }
    }
    write_file_atomic(dir / "report.txt", rep.str());
    write_file_atomic(dir / "plot_diagnostics.py", plot_script_diagnostics());
    if (log) *log << rep.str();
    // Written last: its presence marks the directory complete.
    write_file_atomic(dir / "summary.json", s.dump(2) + "\n");
    return s;
}

}  // namespace

int cmd_simulate(const Options& opt, const Config& cfg, std::ostream& out) {
    const sim::SimulationConfig base = read_simulation_config(cfg);
    const auto amps = cfg.get_doubles("sweep", "amplitudes", {});
    const auto points = cfg.get_pairs("sweep", "points");
    cfg.require_all_used();

    std::vector<SweepPoint> sweep;
    const bool is_sweep = !amps.empty() || !points.empty();
    if (is_sweep) {
        std::vector<std::pair<double, double>> pts = points;
        if (pts.empty()) pts.emplace_back(std::nan(""), std::nan(""));
        std::vector<double> as = amps;
        if (as.empty()) as.push_back(std::nan(""));
        for (const auto& [nu, b] : pts) {
            for (double amp : as) {
                SweepPoint sp{base, nu, b, amp};
                if (!std::isnan(nu)) {
                    try {
                        sp.cfg.params = atlas::normalize(atlas::from_nu_b({nu, b}));
                    } catch (const atlas::ParameterError& e) {
                        throw ConfigError(cfg.source() + ": [sweep] points: inadmissible (" + fmt17(nu) + ":" +
                                          fmt17(b) + "): " + e.what());
                    }
                    sp.cfg.alpha_beta = base.alpha_beta;
                }
                if (!std::isnan(amp)) sp.cfg.initial.amp_u = sp.cfg.initial.amp_eta = amp;
                try {
                    sp.cfg.validate();
                } catch (const std::exception& e) {
                    throw ConfigError(cfg.source() + ": [sweep] point invalid: " + e.what());
                }
                sweep.push_back(sp);
            }
        }
    }

    const fs::path dir = resolve_output_dir(opt);
    prepare_output_dir(dir);
    RunManifest m{"simulate", opt.config ? opt.config->string() : "", dir.string(), opt.seed, opt.jobs, {}};
    m.resolved = to_json(base);
    if (is_sweep) {
        nlohmann::json pts = nlohmann::json::array();
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            auto j = to_json(sweep[i].cfg);
            j["dir"] = "point_" + std::to_string(i);
            pts.push_back(j);
        }
        m.resolved["sweep"] = pts;
    }
    write_manifest(dir, m, cfg);

    if (!is_sweep) {
        const auto s = run_into(dir, base, &out);
        out << "simulate: wrote " << dir.string() << '\n';
        return s["status"] == "completed" ? kExitOk : kExitInstability;
    }

    parallel_for(sweep.size(), opt.jobs, [&](std::size_t i) {
        const fs::path sub = dir / ("point_" + std::to_string(i));
        fs::create_directory(sub);
        (void)run_into(sub, sweep[i].cfg, nullptr);
    });

    // Aggregate from completed directories only.
    std::ostringstream agg;
    agg << "point,nu,b,a,c,amp,status,E_drift,localH1_ratio,lambda_integral_tail_fraction,min_dH_dt,max_boundary_flag\n";
    bool any_unstable = false;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const fs::path summary = dir / ("point_" + std::to_string(i)) / "summary.json";
        if (!fs::exists(summary)) continue;
        std::ifstream in(summary);
        const auto j = nlohmann::json::parse(in);
        auto num = [&](const char* k) { return j.contains(k) ? fmt17(j[k].get<double>()) : std::string("nan"); };
        const auto& p = sweep[i];
        const std::string status = j["status"].get<std::string>();
        any_unstable |= status != "completed";
        agg << i << ',' << fmt17(p.nu) << ',' << fmt17(p.b) << ',' << fmt17(p.cfg.params.a) << ','
            << fmt17(p.cfg.params.c) << ',' << fmt17(p.cfg.initial.amp_u) << ',' << status << ',' << num("E_drift")
            << ',' << num("localH1_ratio") << ',' << num("lambda_integral_tail_fraction") << ',' << num("min_dH_dt")
            << ',' << num("max_boundary_flag") << '\n';
    }
    write_file_atomic(dir / "sweep_summary.csv", agg.str());
    out << "simulate: sweep of " << sweep.size() << " points written to " << dir.string() << '\n';
    return any_unstable ? kExitInstability : kExitOk;
}

}  // namespace abcd::cli
