#pragma once

// Driver: step the system to the horizon and sample diagnostics on a cadence.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abcd/diagnostics.hpp"
#include "abcd/simulator.hpp"

namespace abcd::sim {

enum class InitialKind { zero, gaussian, solitary };

const char* to_string(InitialKind k);

struct InitialDataSpec {
    InitialKind kind = InitialKind::gaussian;
    double amp_u = 0.01;
    double amp_eta = 0.01;
    double width = 5.0;
    double center = 0.0;
};

enum class DealiasMode { automatic, on, off };

struct SimulationConfig {
    NormalizedParameters params{-1.0, -1.0, 0.0};
    spectral::GridSpec grid{1024, 100.0};
    double dt = 0.0;  // 0 selects default_dt
    double T = 20.0;
    InitialDataSpec initial;
    int cadence = 10;  // steps between diagnostics
    double lambda = 20.0;
    bool time_dependent_weight = false;
    double C0 = 4.0;
    double t0 = 2.0;
    //! Unset: select_alpha_beta when dispersion-like, else (0, 0).
    std::optional<atlas::AlphaBeta> alpha_beta;
    bool nonlinear = true;
    DealiasMode dealias = DealiasMode::automatic;
    double blowup_factor = 1e3;

    //! Throws std::invalid_argument describing the first bad field.
    void validate() const;
    [[nodiscard]] double resolved_dt() const;
    [[nodiscard]] bool resolved_dealias() const { return dealias == DealiasMode::on || (dealias == DealiasMode::automatic && T > 50.0); }
    [[nodiscard]] atlas::AlphaBeta resolved_alpha_beta() const;
};

enum class RunStatus { completed, unstable, nonfinite };

const char* to_string(RunStatus s);

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string message;
    std::vector<diag::DiagnosticsRecord> records;
    FieldPair final_state;
    double t_final = 0.0;
    std::size_t steps = 0;
};

[[nodiscard]] FieldPair make_initial_data(const Grid& g, const SimulationConfig& cfg);

using RecordCallback = std::function<void(const diag::DiagnosticsRecord&)>;

//! Deterministic, single-threaded. The callback sees each record as it is produced.
[[nodiscard]] RunResult run(const SimulationConfig& cfg, const RecordCallback& on_record = {});

//! Same, from an explicit initial state on the configured grid.
[[nodiscard]] RunResult run_from(const SimulationConfig& cfg, const FieldPair& initial,
                                 const RecordCallback& on_record = {});

}  // namespace abcd::sim
