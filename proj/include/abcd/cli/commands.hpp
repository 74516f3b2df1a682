#pragma once

// The four subcommands of abcd_lab and the plumbing they share.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abcd/cli/config.hpp"
#include "abcd/run.hpp"

namespace abcd::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitInstability = 3,
    kExitProperty = 4,
};

struct Options {
    std::string subcommand;
    std::optional<fs::path> config;
    std::optional<fs::path> out;
    std::uint64_t seed = 20240611;
    unsigned jobs = 1;
};

//! Dispatches on opt.subcommand; returns the process exit code.
int run_command(const Options& opt, std::ostream& out, std::ostream& err);

int cmd_atlas(const Options& opt, const Config& cfg, std::ostream& out);
int cmd_simulate(const Options& opt, const Config& cfg, std::ostream& out);
int cmd_verify(const Options& opt, const Config& cfg, std::ostream& out);
int cmd_dispersion(const Options& opt, const Config& cfg, std::ostream& out);

// --- shared plumbing ------------------------------------------------------

//! --out, else $ABCD_OUT_ROOT/<subcommand>, else ./abcd_out/<subcommand>.
[[nodiscard]] fs::path resolve_output_dir(const Options& opt);

//! Creates the directory (parents allowed). Refuses a non-empty existing one.
void prepare_output_dir(const fs::path& dir);

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    nlohmann::json resolved = nlohmann::json::object();
};

//! Writes manifest.json and, when a config was given, config.ini (verbatim copy).
void write_manifest(const fs::path& dir, const RunManifest& m, const Config& cfg);

//! Writes via a temporary file and rename so readers never see partial output.
void write_file_atomic(const fs::path& p, const std::string& content);

//! [parameters]: either (a, c) directly or (nu, b) through the physical chart.
[[nodiscard]] atlas::NormalizedParameters read_parameters(const Config& cfg, atlas::NormalizedParameters fallback);

//! All simulation keys ([parameters] [grid] [time] [initial] [weights] [virial] [numerics]).
[[nodiscard]] sim::SimulationConfig read_simulation_config(const Config& cfg);

[[nodiscard]] nlohmann::json to_json(const sim::SimulationConfig& c);

//! Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions are rethrown
//! (the first by index) after all workers finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

[[nodiscard]] std::string fmt17(double v);

// --- property suite -------------------------------------------------------

enum class PropertyStatus { pass, fail, inconclusive };

[[nodiscard]] const char* to_string(PropertyStatus s);

struct PropertyResult {
    std::string name;
    PropertyStatus status = PropertyStatus::fail;
    std::string detail;
    double seconds = 0.0;
};

enum class Mutation { none, a3_sign };

struct VerifySettings {
    std::uint64_t seed = 20240611;
    unsigned jobs = 1;
    //! Multiplies the time step of every simulation-backed property.
    double dt_factor = 1.0;
    Mutation mutation = Mutation::none;
    //! Subset of property names; empty means all.
    std::vector<std::string> only;
};

struct PropertyCase {
    std::string name;
    std::function<PropertyResult(const VerifySettings&)> run;
};

[[nodiscard]] const std::vector<PropertyCase>& property_catalog();

[[nodiscard]] std::vector<PropertyResult> run_property_suite(const VerifySettings& s);

//! 4 if anything failed, else 3 if anything was inconclusive, else 0.
[[nodiscard]] int suite_exit_code(const std::vector<PropertyResult>& rs);

[[nodiscard]] std::string format_result_line(const PropertyResult& r);

// --- plot scripts ---------------------------------------------------------

[[nodiscard]] std::string plot_script_region();
[[nodiscard]] std::string plot_script_bands();
[[nodiscard]] std::string plot_script_diagnostics();
[[nodiscard]] std::string plot_script_dispersion();

}  // namespace abcd::cli
