// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "abcd/run.hpp"
#include "oracles.hpp"

using namespace abcd;
using diag::DiagnosticsRecord;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string g(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

const atlas::NormalizedParameters kLab{-1.0, -1.0, 0.0};

sim::SimulationConfig small_gaussian(atlas::NormalizedParameters n, double dt, double T) {
    sim::SimulationConfig c;
    c.params = n;
    c.grid = {1024, 100.0};
    c.dt = dt;
    c.T = T;
    c.lambda = 20.0;
    c.initial = {sim::InitialKind::gaussian, 0.01, 0.01, 5.0, 0.0};
    c.dealias = sim::DealiasMode::off;
    return c;
}

// The identity run is shared by criteria 3 and 4.
const sim::RunResult& identity_run(double dt) {
    static sim::RunResult coarse = sim::run(small_gaussian(kLab, 0.005, 20.0));
    static sim::RunResult fine = sim::run(small_gaussian(kLab, 0.0025, 20.0));
    return dt == 0.005 ? coarse : fine;
}

Verdict atlas_exactness() {
    const int M = 200;
    std::size_t mism = 0;
    for (int j = 0; j < M; ++j) {
        const double b = 1.0 / 6 + (1.0 - 1.0 / 6) * (j + 1) / M;
        const auto iv = atlas::admissible_nu_interval(b);
        for (int i = 0; i < M; ++i) {
            const double nu = static_cast<double>(i) / (M - 1);
            const auto p = atlas::from_nu_b({nu, b});
            const auto rep = atlas::validate_physical(p);
            if (rep.pass() != iv.contains(nu)) ++mism;
            if (rep.pass()) {
                const auto n = atlas::normalize(p);
                if (!(n.a < 0 && n.c < 0)) ++mism;
            }
        }
    }
    // nu = 1/3 slice: first dispersion-like b
    const double step = (1.0 - 1.0 / 6) / M;
    double first = NAN;
    for (int j = 0; j < M && std::isnan(first); ++j) {
        const double b = 1.0 / 6 + step * (j + 1);
        const auto p = atlas::from_nu_b({1.0 / 3, b});
        if (atlas::validate_physical(p).pass() && atlas::is_dispersion_like(atlas::normalize(p))) first = b;
    }
    const auto q = atlas::normalize({-1.0 / 18, 2.0 / 9, -1.0 / 18, 2.0 / 9});
    const double lhs = 3.0 * (q.a + q.c) + 2.0, rhs = 8.0 * q.a * q.c;
    const bool ok = mism == 0 && std::abs(first - 2.0 / 9) <= step * (1 + 1e-9) && lhs == 0.5 && rhs == 0.5;
    return {ok, std::to_string(mism) + " round-trip mismatches on 200x200; nu=1/3 boundary at b=" + g(first) +
                    " (2/9 = " + g(2.0 / 9) + ", step " + g(step) + "); (-1/4,-1/4): " + g(lhs) + " vs " + g(rhs)};
}

Verdict representation() {
    const spectral::Grid gr(1024, 100.0);
    spectral::SpectralOps ops(gr);
    oracle::Gen gen(20240611);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const atlas::NormalizedParameters n{gen.uniform(-2, -0.05), gen.uniform(-2, -0.05), 0.0};
        const atlas::AlphaBeta ab{gen.uniform(-1, 1), gen.uniform(-1, 1)};
        const auto phi = spectral::weight_family(spectral::WeightKind::tanh, 20.0, gr);
        const sim::FieldPair s{spectral::Field::sample(gr, oracle::Bumps::draw(gen)),
                               spectral::Field::sample(gr, oracle::Bumps::draw(gen))};
        const double q = diag::dH_decomposition(ops, s, phi, n, ab).Q;
        worst = std::max(worst, std::abs(diag::quadratic_Q_canonical(ops, s, phi, n, ab) - q) / std::abs(q));
    }
    return {worst < 1e-9, "max relative error " + g(worst) + " over 100 random states"};
}

Verdict virial_identity() {
    const auto& a = identity_run(0.005);
    const auto& b = identity_run(0.0025);
    if (a.status != sim::RunStatus::completed || b.status != sim::RunStatus::completed) return {false, "run failed"};
    const auto ea = diag::identity_residual(a.records, &DiagnosticsRecord::H, &DiagnosticsRecord::dH_predicted, true);
    const auto eb = diag::identity_residual(b.records, &DiagnosticsRecord::H, &DiagnosticsRecord::dH_predicted, true);
    const double gain = ea.max_relative / eb.max_relative;
    return {ea.max_relative < 1e-5 && gain >= 3.5, "max pointwise relative residual " + g(ea.max_relative) + " at " +
                                                        std::to_string(ea.points) + " cadence points; dt/2 gain " + g(gain)};
}

Verdict local_energy_identity() {
    const auto& a = identity_run(0.005);
    if (a.status != sim::RunStatus::completed) return {false, "run failed"};
    const auto e = diag::identity_residual(a.records, &DiagnosticsRecord::E_loc, &DiagnosticsRecord::dEloc_predicted, false);
    const auto p = diag::identity_residual(a.records, &DiagnosticsRecord::E_loc, &DiagnosticsRecord::dEloc_predicted, true);
    return {e.max_relative < 1e-5, "max residual relative to max |dE_loc/dt| " + g(e.max_relative) +
                                       " (pointwise relative " + g(p.max_relative) + ")"};
}

Verdict conservation() {
    auto c = small_gaussian(kLab, 0.005, 50.0);
    c.cadence = 100;
    const auto r = sim::run(c);
    if (r.status != sim::RunStatus::completed) return {false, r.message};
    double e = 0, p = 0;
    for (const auto& x : r.records) {
        e = std::max(e, std::abs(x.E / r.records[0].E - 1));
        p = std::max(p, std::abs(x.P / r.records[0].P - 1));
    }
    return {e < 1e-7 && p < 1e-7, "relative drift over T=50: E " + g(e) + ", P " + g(p)};
}

Verdict solitary() {
    const spectral::Grid gr(2048, 100.0);
    sim::AbcdSystem sys(gr, kLab);
    const auto s0 = sim::solitary_wave(gr, kLab);
    const auto r = sys.rhs(s0);
    const double res = std::max(r.u.sup_norm(), r.eta.sup_norm());
    auto s = s0;
    for (int i = 0; i < 1000; ++i) s = sys.rk4_step(s, 0.01);
    const double drift = std::max((s.u - s0.u).sup_norm(), (s.eta - s0.eta).sup_norm());
    return {res < 1e-8 && drift < 1e-6, "rhs sup-norm " + g(res) + ", sup-drift over T=10 " + g(drift)};
}

Verdict positivity() {
    std::ostringstream os;
    bool ok = true;
    const atlas::NormalizedParameters pts[] = {kLab, atlas::normalize(atlas::from_nu_b({1.0 / 3, 0.5})),
                                               atlas::normalize(atlas::from_nu_b({0.8, 0.45}))};
    for (const auto& n : pts) {
        const auto r = sim::run(small_gaussian(n, 0.01, 20.0));
        if (r.status != sim::RunStatus::completed) return {false, r.message};
        double q = INFINITY, d = INFINITY;
        for (const auto& x : r.records) {
            q = std::min(q, x.Q);
            d = std::min(d, x.dH_predicted());
        }
        ok &= q >= 0 && d > 0;
        os << "(" << g(n.a) << "," << g(n.c) << ") min Q " << g(q) << " min dH/dt " << g(d) << "; ";
    }
    bool empty = false;
    try {
        (void)atlas::select_alpha_beta({-0.25, -0.25, 0.0});
    } catch (const atlas::ParameterError&) {
        empty = atlas::alpha_beta_bands({-0.25, -0.25, 0.0}).a3.empty();
    }
    ok &= empty;
    os << "(-1/4,-1/4) A3 band " << (empty ? "empty" : "NOT empty");
    return {ok, os.str()};
}

Verdict decay() {
    sim::SimulationConfig c;
    c.params = atlas::normalize(atlas::from_nu_b({1.0 / 3, 0.5}));
    c.grid = {2048, 256.0};
    c.T = 200.0;
    c.lambda = 20.0;
    c.initial = {sim::InitialKind::gaussian, 0.01, 0.01, 5.0, 0.0};
    const auto r = sim::run(c);
    if (r.status != sim::RunStatus::completed) return {false, r.message};
    const double ratio = r.records.back().localH1 / r.records.front().localH1;
    const auto ti = diag::localized_time_integral(r.records, c.C0, c.t0);
    return {ratio < 0.5 && ti.tail_fraction() < 0.1,
            "localH1(200)/localH1(0) = " + g(ratio) + ", last-quarter tail " + g(ti.tail_fraction()) + " of the integral"};
}

Verdict dispersion() {
    std::ostringstream os;
    bool ok = true;
    for (double b : {2.0 / 9, 0.25, 1.0 / 3, 0.5}) {
        const auto n = atlas::normalize(atlas::from_nu_b({1.0 / 3, b}));
        const auto rep = atlas::analyze_group_velocity(b, n);
        double mn = INFINITY;
        for (int i = 0; i <= 1000000; ++i) mn = std::min(mn, atlas::group_velocity(1e-4 * i, n));
        const bool zero_ok = atlas::group_velocity(0.0, n) == 1.0;
        ok &= rep.everywhere_positive && mn > 0 && zero_ok;
        os << "b=" << g(b) << ": " << rep.describe() << ", scan min " << g(mn) << (zero_ok ? "" : ", |w'(0)| != 1")
           << "; ";
    }
    return {ok, os.str()};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Verdict()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> cs = {
        {1, "parameter atlas exactness", 10, atlas_exactness},
        {2, "representation identity", 30, representation},
        {3, "virial identity", 120, virial_identity},
        {4, "localized-energy identity", 0, local_energy_identity},
        {5, "conservation", 0, conservation},
        {6, "solitary-wave oracle", 0, solitary},
        {7, "positivity", 0, positivity},
        {8, "decay observable", 0, decay},
        {9, "dispersion", 5, dispersion},
    };
    int failed = 0;
    for (const auto& c : cs) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v = c.run();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && s > c.budget_s) {
            v.pass = false;
            v.detail += " [runtime over " + g(c.budget_s) + " s]";
        }
        failed += !v.pass;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(cs.size()) - failed, cs.size());
    return failed ? 1 : 0;
}
