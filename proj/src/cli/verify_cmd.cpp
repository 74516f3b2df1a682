#include <algorithm>
#include <sstream>

#include "abcd/cli/commands.hpp"

namespace abcd::cli {

namespace {

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

}  // namespace

int cmd_verify(const Options& opt, const Config& cfg, std::ostream& out) {
    VerifySettings vs;
    vs.seed = opt.seed;
    vs.jobs = opt.jobs;
    vs.dt_factor = cfg.get_double("verify", "dt_factor", 1.0);
    const std::string mutation = cfg.get_string("verify", "mutation", "none");
    vs.only = split_names(cfg.get_string("verify", "only", ""));
    cfg.require_all_used();

    if (!(vs.dt_factor > 0.0)) throw cfg.error_at("verify", "dt_factor", "must be positive");
    if (mutation == "a3_sign")
        vs.mutation = Mutation::a3_sign;
    else if (mutation != "none")
        throw cfg.error_at("verify", "mutation", "unknown mutation '" + mutation + "' (none | a3_sign)");
    for (const auto& name : vs.only) {
        const auto& cat = property_catalog();
        if (std::none_of(cat.begin(), cat.end(), [&](const PropertyCase& c) { return c.name == name; }))
            throw cfg.error_at("verify", "only", "unknown property '" + name + "'");
    }

    const fs::path dir = resolve_output_dir(opt);
    prepare_output_dir(dir);
    RunManifest m{"verify", opt.config ? opt.config->string() : "", dir.string(), opt.seed, opt.jobs, {}};
    m.resolved = {{"dt_factor", vs.dt_factor}, {"mutation", mutation}, {"only", vs.only}};
    write_manifest(dir, m, cfg);

    const auto results = run_property_suite(vs);
    std::ostringstream rep;
    nlohmann::json js = nlohmann::json::array();
    for (const auto& r : results) {
        rep << format_result_line(r) << '\n';
        js.push_back({{"name", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    const int code = suite_exit_code(results);
    rep << "exit " << code << '\n';
    write_file_atomic(dir / "verify_report.txt", rep.str());
    write_file_atomic(dir / "verify_report.json", nlohmann::json{{"exit_code", code}, {"results", js}}.dump(2) + "\n");
    out << rep.str();
    return code;
}

}  // namespace abcd::cli
