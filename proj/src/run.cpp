#include "abcd/run.hpp"

#include <cmath>
#include <sstream>

namespace abcd::sim {

const char* to_string(InitialKind k) {
    switch (k) {
        case InitialKind::zero: return "zero";
        case InitialKind::gaussian: return "gaussian";
        case InitialKind::solitary: return "solitary";
    }
    return "?";
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::unstable: return "unstable";
        case RunStatus::nonfinite: return "nonfinite";
    }
    return "?";
}

void SimulationConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (!(params.a < 0.0 && params.c < 0.0)) fail("parameters: need a < 0 and c < 0");
    Grid g(grid);  // throws on bad N, L
    if (!(dt >= 0.0) || !std::isfinite(dt)) fail("dt must be >= 0 (0 = default)");
    if (!(T > 0.0) || !std::isfinite(T)) fail("T must be positive");
    if (cadence < 1) fail("cadence must be >= 1");
    if (!(lambda > 0.0)) fail("lambda must be positive");
    if (!(C0 > 0.0)) fail("C0 must be positive");
    if (!(t0 >= 2.0)) fail("t0 must be >= 2");
    if (!(blowup_factor > 1.0)) fail("blowup_factor must exceed 1");
    if (initial.kind == InitialKind::gaussian && !(initial.width > 0.0)) fail("initial width must be positive");
    if (initial.kind == InitialKind::solitary && params.a != params.c) fail("solitary preset requires a = c");
}

double SimulationConfig::resolved_dt() const {
    return dt > 0.0 ? dt : default_dt(Grid(grid), params);
}

atlas::AlphaBeta SimulationConfig::resolved_alpha_beta() const {
    if (alpha_beta) return *alpha_beta;
    if (atlas::is_dispersion_like(params)) return atlas::select_alpha_beta(params);
    return {0.0, 0.0};
}

FieldPair make_initial_data(const Grid& g, const SimulationConfig& cfg) {
    switch (cfg.initial.kind) {
        case InitialKind::zero: return zero_data(g);
        case InitialKind::gaussian:
            return gaussian_data(g, cfg.initial.amp_u, cfg.initial.amp_eta, cfg.initial.width, cfg.initial.center);
        case InitialKind::solitary: return solitary_wave(g, cfg.params);
    }
    throw std::logic_error("unknown initial data kind");
}

RunResult run(const SimulationConfig& cfg, const RecordCallback& on_record) {
    cfg.validate();
    const Grid g(cfg.grid);
    return run_from(cfg, make_initial_data(g, cfg), on_record);
}

RunResult run_from(const SimulationConfig& cfg, const FieldPair& initial, const RecordCallback& on_record) {
    cfg.validate();
    const Grid g(cfg.grid);
    AbcdSystem sys(g, cfg.params, {cfg.nonlinear, cfg.resolved_dealias()});
    diag::DiagnosticsOptions dopt;
    dopt.lambda = cfg.lambda;
    dopt.time_dependent = cfg.time_dependent_weight;
    dopt.C0 = cfg.C0;
    dopt.t0 = cfg.t0;
    dopt.ab = cfg.resolved_alpha_beta();
    diag::DiagnosticsEvaluator eval(g, cfg.params, dopt);

    const double dt = cfg.resolved_dt();
    const auto nsteps = static_cast<std::size_t>(std::llround(cfg.T / dt));

    RunResult res;
    FieldPair s = initial;
    const double amp0 = s.amplitude();
    // Zero data never blows up; keep a floor so the ratio test is meaningful.
    const double limit = cfg.blowup_factor * std::max(amp0, 1e-300);

    auto emit = [&](double t) {
        auto rec = eval.evaluate(s, t);
        if (on_record) on_record(rec);
        res.records.push_back(rec);
    };

    emit(0.0);
    for (std::size_t step = 1; step <= nsteps; ++step) {
        s = sys.rk4_step(s, dt);
        const double t = dt * static_cast<double>(step);
        res.steps = step;
        res.t_final = t;
        if (!s.all_finite()) {
            res.status = RunStatus::nonfinite;
            std::ostringstream os;
            os << "non-finite state at t = " << t << " (step " << step << ")";
            res.message = os.str();
            break;
        }
        if (amp0 > 0.0 && s.amplitude() > limit) {
            res.status = RunStatus::unstable;
            std::ostringstream os;
            os << "amplitude " << s.amplitude() << " exceeded " << cfg.blowup_factor << "x initial at t = " << t
               << " (step " << step << ")";
            res.message = os.str();
            break;
        }
        if (step % static_cast<std::size_t>(cfg.cadence) == 0) emit(t);
    }
    res.final_state = std::move(s);
    if (res.status == RunStatus::completed) res.message = "completed";
    return res;
}

}  // namespace abcd::sim
