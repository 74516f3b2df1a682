#include <cmath>
#include <sstream>

#include "abcd/atlas.hpp"
#include "abcd/cli/commands.hpp"

namespace abcd::cli {

namespace {

struct DispersionPoint {
    std::string label;
    double nu = std::nan("");
    double b = std::nan("");
    atlas::NormalizedParameters n;
};

}  // namespace

int cmd_dispersion(const Options& opt, const Config& cfg, std::ostream& out) {
    const double k_max = cfg.get_double("dispersion", "k_max", 100.0);
    const long long table_points = cfg.get_int("dispersion", "table_points", 2001);
    const long long scan_points = cfg.get_int("dispersion", "scan_points", 1000001);
    const double nu = cfg.get_double("dispersion", "nu", 1.0 / 3.0);
    const auto b_values = cfg.get_doubles("dispersion", "b_values", {2.0 / 9.0, 0.25, 1.0 / 3.0, 0.5});
    const bool has_point = cfg.has_section("parameters");
    const auto single = has_point ? read_parameters(cfg, {}) : atlas::NormalizedParameters{};
    cfg.require_all_used();
    if (!(k_max > 0.0)) throw cfg.error_at("dispersion", "k_max", "must be positive");
    if (table_points < 2) throw cfg.error_at("dispersion", "table_points", "need at least 2");
    if (scan_points < 2) throw cfg.error_at("dispersion", "scan_points", "need at least 2");

    std::vector<DispersionPoint> pts;
    if (has_point) {
        DispersionPoint p{"parameters", std::nan(""), single.b_origin > 0.0 ? single.b_origin : std::nan(""), single};
        pts.push_back(p);
    } else {
        for (double b : b_values) {
            DispersionPoint p;
            p.nu = nu;
            p.b = b;
            p.label = "b=" + fmt17(b);
            try {
                p.n = atlas::normalize(atlas::from_nu_b({nu, b}));
            } catch (const atlas::ParameterError& e) {
                throw cfg.error_at("dispersion", "b_values",
                                   "inadmissible (nu, b) = (" + fmt17(nu) + ", " + fmt17(b) + "): " + e.what());
            }
            pts.push_back(p);
        }
    }

    const fs::path dir = resolve_output_dir(opt);
    prepare_output_dir(dir);
    RunManifest m{"dispersion", opt.config ? opt.config->string() : "", dir.string(), opt.seed, opt.jobs, {}};
    nlohmann::json jp = nlohmann::json::array();
    for (const auto& p : pts) jp.push_back({{"label", p.label}, {"nu", p.nu}, {"b", p.b}, {"a", p.n.a}, {"c", p.n.c}});
    m.resolved = {{"k_max", k_max}, {"table_points", table_points}, {"scan_points", scan_points}, {"points", jp}};
    write_manifest(dir, m, cfg);

    std::ostringstream table, report;
    table << "label,nu,b,a,c,k,omega,group_velocity\n";
    for (const auto& p : pts) {
        for (long long i = 0; i < table_points; ++i) {
            const double k = k_max * static_cast<double>(i) / static_cast<double>(table_points - 1);
            table << p.label << ',' << fmt17(p.nu) << ',' << fmt17(p.b) << ',' << fmt17(p.n.a) << ',' << fmt17(p.n.c)
                  << ',' << fmt17(k) << ',' << fmt17(atlas::dispersion_omega(k, p.n)) << ','
                  << fmt17(atlas::group_velocity(k, p.n)) << '\n';
        }
        // Dense scan, independent of the table spacing.
        double scan_min = INFINITY, scan_arg = 0.0;
        for (long long i = 0; i < scan_points; ++i) {
            const double k = k_max * static_cast<double>(i) / static_cast<double>(scan_points - 1);
            const double w = atlas::group_velocity(k, p.n);
            if (w < scan_min) {
                scan_min = w;
                scan_arg = k;
            }
        }
        const auto rep = std::isnan(p.b) ? atlas::analyze_group_velocity(p.n) : atlas::analyze_group_velocity(p.b, p.n);
        report << p.label << " (a, c) = (" << fmt17(p.n.a) << ", " << fmt17(p.n.c) << "): " << rep.describe() << '\n';
        report << "  mu- = " << fmt17(rep.mu_minus) << ", mu+ = " << fmt17(rep.mu_plus)
               << (rep.real_critical_points ? "" : " (complex)") << ", min p = " << fmt17(rep.min_value) << '\n';
        report << "  k-scan on [0, " << fmt17(k_max) << "]: min |w'| = " << fmt17(scan_min) << " at k = " << fmt17(scan_arg)
               << "; |w'(0)| = " << fmt17(atlas::group_velocity(0.0, p.n)) << '\n';
        report << "  everywhere positive: " << (rep.everywhere_positive ? "yes" : "no") << '\n';
    }
    write_file_atomic(dir / "dispersion_table.csv", table.str());
    write_file_atomic(dir / "dispersion_report.txt", report.str());
    write_file_atomic(dir / "plot_dispersion.py", plot_script_dispersion());
    out << report.str();
    out << "dispersion: wrote " << dir.string() << '\n';
    return kExitOk;
}

}  // namespace abcd::cli
