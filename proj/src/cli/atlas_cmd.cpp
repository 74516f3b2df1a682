#include <cmath>
#include <limits>
#include <sstream>

#include "abcd/atlas.hpp"
#include "abcd/cli/commands.hpp"

namespace abcd::cli {

namespace {

constexpr double kSixth = 1.0 / 6.0;

std::string interval_cells(const atlas::Interval& iv) {
    if (iv.empty()) return "nan,nan,0,0,1";
    return fmt17(iv.lo) + "," + fmt17(iv.hi) + "," + (iv.lo_closed ? "1" : "0") + "," + (iv.hi_closed ? "1" : "0") +
           ",0";
}

struct AtlasSettings {
    long long nu_points = 200;
    long long b_points = 200;
    double b_min = kSixth;
    double b_max = 1.0;
    double slice_nu = 1.0 / 3.0;
    std::vector<double> b_slices{2.0 / 9.0, 0.25, 1.0 / 3.0, 0.5, 0.75};
    double band_min = -2.0;
    long long band_points = 40;
    double gamma_a_min = -1.0;
    double gamma_a_max = 0.0;
    long long gamma_points = 201;
};

AtlasSettings read_atlas(const Config& cfg) {
    AtlasSettings s;
    s.nu_points = cfg.get_int("atlas", "nu_points", s.nu_points);
    s.b_points = cfg.get_int("atlas", "b_points", s.b_points);
    s.b_min = cfg.get_double("atlas", "b_min", s.b_min);
    s.b_max = cfg.get_double("atlas", "b_max", s.b_max);
    s.slice_nu = cfg.get_double("atlas", "slice_nu", s.slice_nu);
    s.b_slices = cfg.get_doubles("atlas", "b_slices", s.b_slices);
    s.band_min = cfg.get_double("atlas", "band_min", s.band_min);
    s.band_points = cfg.get_int("atlas", "band_points", s.band_points);
    s.gamma_a_min = cfg.get_double("atlas", "gamma_a_min", s.gamma_a_min);
    s.gamma_a_max = cfg.get_double("atlas", "gamma_a_max", s.gamma_a_max);
    s.gamma_points = cfg.get_int("atlas", "gamma_points", s.gamma_points);
    if (s.nu_points < 2) throw cfg.error_at("atlas", "nu_points", "need at least 2");
    if (s.b_points < 1) throw cfg.error_at("atlas", "b_points", "need at least 1");
    if (!(s.b_max > s.b_min)) throw cfg.error_at("atlas", "b_max", "must exceed b_min");
    if (!(s.band_min < 0.0)) throw cfg.error_at("atlas", "band_min", "must be negative");
    if (s.band_points < 1) throw cfg.error_at("atlas", "band_points", "need at least 1");
    if (s.gamma_points < 2) throw cfg.error_at("atlas", "gamma_points", "need at least 2");
    for (double b : s.b_slices)
        if (!(b > 0.0)) throw cfg.error_at("atlas", "b_slices", "slices must be positive");
    return s;
}

double b_node(const AtlasSettings& s, long long j) {
    return s.b_min + (s.b_max - s.b_min) * static_cast<double>(j + 1) / static_cast<double>(s.b_points);
}

}  // namespace

int cmd_atlas(const Options& opt, const Config& cfg, std::ostream& out) {
    const AtlasSettings s = read_atlas(cfg);
    cfg.require_all_used();

    const fs::path dir = resolve_output_dir(opt);
    prepare_output_dir(dir);
    RunManifest m{"atlas", opt.config ? opt.config->string() : "", dir.string(), opt.seed, opt.jobs, {}};
    m.resolved = {{"nu_points", s.nu_points}, {"b_points", s.b_points},     {"b_min", s.b_min},
                  {"b_max", s.b_max},         {"slice_nu", s.slice_nu},     {"b_slices", s.b_slices},
                  {"band_min", s.band_min},   {"band_points", s.band_points}, {"gamma_a_min", s.gamma_a_min},
                  {"gamma_a_max", s.gamma_a_max}, {"gamma_points", s.gamma_points}};
    write_manifest(dir, m, cfg);

    // (nu, b) region
    std::ostringstream region;
    region << "nu,b,a,c,admissible,dispersion_like\n";
    std::size_t n_adm = 0, n_disp = 0;
    for (long long j = 0; j < s.b_points; ++j) {
        const double b = b_node(s, j);
        if (!(b > kSixth)) continue;
        for (long long i = 0; i < s.nu_points; ++i) {
            const double nu = static_cast<double>(i) / static_cast<double>(s.nu_points - 1);
            const auto p = atlas::from_nu_b({nu, b});
            const bool adm = atlas::validate_physical(p).pass();
            const bool disp = adm && atlas::is_dispersion_like(atlas::normalize(p));
            n_adm += adm;
            n_disp += disp;
            region << fmt17(nu) << ',' << fmt17(b) << ',' << fmt17(p.a) << ',' << fmt17(p.c) << ',' << adm << ','
                   << disp << '\n';
        }
    }
    write_file_atomic(dir / "atlas_region.csv", region.str());

    // b-scan along one nu slice
    std::ostringstream slice;
    slice << "nu,b,a,c,admissible,margin,status\n";
    double first_disp_b = std::numeric_limits<double>::quiet_NaN();
    for (long long j = 0; j < s.b_points; ++j) {
        const double b = b_node(s, j);
        if (!(b > kSixth)) continue;
        const auto p = atlas::from_nu_b({s.slice_nu, b});
        const bool adm = atlas::validate_physical(p).pass();
        std::string status = "inadmissible";
        double margin = std::numeric_limits<double>::quiet_NaN();
        if (adm) {
            const auto n = atlas::normalize(p);
            margin = atlas::dispersion_margin(n);
            status = atlas::to_string(atlas::dispersion_status(n));
            if (std::isnan(first_disp_b) && atlas::is_dispersion_like(n)) first_disp_b = b;
        }
        slice << fmt17(s.slice_nu) << ',' << fmt17(b) << ',' << fmt17(p.a) << ',' << fmt17(p.c) << ',' << adm << ','
              << fmt17(margin) << ',' << status << '\n';
    }
    write_file_atomic(dir / "atlas_nu_slice.csv", slice.str());

    // admissible and dispersive nu-intervals per b slice
    std::ostringstream intervals;
    intervals << "b,adm_lo,adm_hi,adm_lo_closed,adm_hi_closed,adm_empty,I_lo,I_hi,I_lo_closed,I_hi_closed,I_empty\n";
    for (double b : s.b_slices) {
        intervals << fmt17(b) << ',' << interval_cells(atlas::admissible_nu_interval(b)) << ','
                  << interval_cells(atlas::dispersive_nu_interval(b)) << '\n';
    }
    write_file_atomic(dir / "atlas_intervals.csv", intervals.str());

    // gamma(b) curve samples and its intersection with the B1 line
    std::ostringstream gamma;
    gamma << "b,a,c\n";
    std::ostringstream gline;
    gline << "b,discriminant,roots,a1,c1,a2,c2\n";
    for (double b : s.b_slices) {
        for (long long i = 0; i < s.gamma_points; ++i) {
            const double a = s.gamma_a_min + (s.gamma_a_max - s.gamma_a_min) * static_cast<double>(i) /
                                                 static_cast<double>(s.gamma_points - 1);
            double c;
            try {
                c = atlas::gamma_boundary(b, a);
            } catch (const atlas::ParameterError&) {
                continue;
            }
            gamma << fmt17(b) << ',' << fmt17(a) << ',' << fmt17(c) << '\n';
        }
        const auto roots = atlas::gamma_line_intersections(b);
        const double line = 1.0 / 3.0 - 2.0 * b;
        gline << fmt17(b) << ',' << fmt17(atlas::gamma_line_discriminant(b)) << ',' << roots.size();
        for (std::size_t r = 0; r < 2; ++r) {
            if (r < roots.size()) {
                gline << ',' << fmt17(roots[r]) << ',' << fmt17(line - roots[r]);
            } else {
                gline << ",nan,nan";
            }
        }
        gline << '\n';
    }
    write_file_atomic(dir / "atlas_gamma.csv", gamma.str());
    write_file_atomic(dir / "atlas_gamma_line.csv", gline.str());

    // (alpha, beta) bands on the normalized (a, c) grid
    std::ostringstream bands;
    bands << "a,c,A2_lo,A2_hi,A3_lo,A3_hi,intersect_lo,intersect_hi\n";
    for (long long i = 0; i < s.band_points; ++i) {
        const double a = s.band_min * static_cast<double>(s.band_points - i) / static_cast<double>(s.band_points);
        for (long long j = 0; j < s.band_points; ++j) {
            const double c = s.band_min * static_cast<double>(s.band_points - j) / static_cast<double>(s.band_points);
            const auto bs = atlas::alpha_beta_bands({a, c, 0.0});
            const auto cut = bs.intersection();
            bands << fmt17(a) << ',' << fmt17(c) << ',' << fmt17(bs.a2.lower) << ',' << fmt17(bs.a2.upper) << ','
                  << fmt17(bs.a3.lower) << ',' << fmt17(bs.a3.upper) << ',' << fmt17(cut.lower) << ','
                  << fmt17(cut.upper) << '\n';
        }
    }
    write_file_atomic(dir / "atlas_bands.csv", bands.str());

    write_file_atomic(dir / "plot_region.py", plot_script_region());
    write_file_atomic(dir / "plot_bands.py", plot_script_bands());

    out << "atlas: " << n_adm << " admissible grid points, " << n_disp << " dispersion-like\n";
    if (std::isnan(first_disp_b)) {
        out << "atlas: no dispersion-like point on the nu = " << fmt17(s.slice_nu) << " slice\n";
    } else {
        out << "atlas: nu = " << fmt17(s.slice_nu) << " slice becomes dispersion-like at b = " << fmt17(first_disp_b)
            << " (grid step " << fmt17((s.b_max - s.b_min) / static_cast<double>(s.b_points)) << ")\n";
    }
    out << "atlas: wrote " << dir.string() << '\n';
    return kExitOk;
}

}  // namespace abcd::cli
