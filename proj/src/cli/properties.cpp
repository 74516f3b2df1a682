#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "abcd/cli/commands.hpp"
#include "abcd/random_state.hpp"

namespace abcd::cli {

namespace {

using atlas::NormalizedParameters;
using diag::DiagnosticsRecord;
using spectral::Field;
using spectral::Grid;
using spectral::SpectralOps;
using spectral::WeightKind;

constexpr double kSixth = 1.0 / 6.0;

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

PropertyResult verdict(bool ok, std::string detail) {
    return {"", ok ? PropertyStatus::pass : PropertyStatus::fail, std::move(detail), 0.0};
}

PropertyResult inconclusive(const sim::RunResult& r) {
    return {"", PropertyStatus::inconclusive, std::string("run ") + sim::to_string(r.status) + ": " + r.message, 0.0};
}

std::mt19937_64 rng_for(const VerifySettings& s, std::uint64_t salt) { return std::mt19937_64(s.seed ^ (salt * 0x9E3779B97F4A7C15ull)); }

NormalizedParameters lab_point() { return {-1.0, -1.0, 0.0}; }

NormalizedParameters chart_point(double nu, double b) { return atlas::normalize(atlas::from_nu_b({nu, b})); }

//! Small-Gaussian reference run used by the identity properties.
sim::SimulationConfig identity_config(const VerifySettings& s, NormalizedParameters n, double dt, double T) {
    sim::SimulationConfig c;
    c.params = n;
    c.grid = {1024, 100.0};
    c.dt = dt * s.dt_factor;
    c.T = T;
    c.lambda = 20.0;
    c.initial = {sim::InitialKind::gaussian, 0.01, 0.01, 5.0, 0.0};
    c.dealias = sim::DealiasMode::off;
    return c;
}

std::vector<double> grid_b(int n) {
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(j)] = kSixth + (1.0 - kSixth) * (j + 1) / n;
    return b;
}

std::vector<double> grid_nu(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
    return v;
}

// --- atlas ----------------------------------------------------------------

PropertyResult atlas_roundtrip(const VerifySettings&) {
    std::size_t inside = 0, mismatches = 0;
    for (double b : grid_b(200)) {
        const auto iv = atlas::admissible_nu_interval(b);
        for (double nu : grid_nu(200)) {
            const bool pass = atlas::validate_physical(atlas::from_nu_b({nu, b})).pass();
            inside += pass;
            mismatches += pass != iv.contains(nu);
        }
    }
    return verdict(mismatches == 0, std::to_string(inside) + " admissible of 40000, " + std::to_string(mismatches) +
                                        " disagreements with the nu-interval");
}

PropertyResult atlas_dispersive_interval(const VerifySettings&) {
    std::size_t checked = 0, mismatches = 0, boundary = 0;
    for (double b : grid_b(200)) {
        const auto I = atlas::dispersive_nu_interval(b);
        for (double nu : grid_nu(200)) {
            const auto p = atlas::from_nu_b({nu, b});
            if (!atlas::validate_physical(p).pass()) continue;
            const auto n = atlas::normalize(p);
            if (std::abs(atlas::dispersion_margin(n)) <= 1e-12) {
                ++boundary;
                continue;
            }
            ++checked;
            mismatches += atlas::is_dispersion_like(n) != I.contains(nu);
        }
    }
    return verdict(mismatches == 0, std::to_string(checked) + " points, " + std::to_string(mismatches) +
                                        " disagreements, " + std::to_string(boundary) + " on the boundary");
}

PropertyResult atlas_band_positivity(const VerifySettings&) {
    std::size_t checked = 0, bad = 0;
    double worst = INFINITY;
    for (double b : grid_b(100)) {
        for (double nu : grid_nu(100)) {
            const auto p = atlas::from_nu_b({nu, b});
            if (!atlas::validate_physical(p).pass()) continue;
            const auto n = atlas::normalize(p);
            if (!atlas::is_dispersion_like(n)) continue;
            ++checked;
            const auto ab = atlas::select_alpha_beta(n);
            const auto bands = atlas::alpha_beta_bands(n);
            const double off = ab.beta - ab.alpha;
            const bool strict = bands.a2.contains_offset(off) && bands.a3.contains_offset(off) &&
                                bands.a4.contains_offset(off);
            const auto v = atlas::virial_coefficients(n, ab);
            const double m = std::min({v.A[1], v.A[2], v.A[3], v.B[1], v.B[2], v.B[3]});
            worst = std::min(worst, m);
            bad += !(strict && m > 0.0);
        }
    }
    return verdict(bad == 0 && checked > 0, std::to_string(checked) + " dispersion-like points, " + std::to_string(bad) +
                                                " failures, min of A2..A4, B2..B4 = " + g6(worst));
}

PropertyResult atlas_gamma(const VerifySettings&) {
    double worst = 0.0;
    for (double b : grid_b(100)) {
        for (int i = 0; i <= 200; ++i) {
            const double a = -1.0 + i / 200.0;
            const double c = atlas::gamma_boundary(b, a);
            worst = std::max(worst, std::abs(3.0 * b * (a + c) + 2.0 * b * b - 8.0 * a * c));
        }
    }
    return verdict(worst < 1e-10, "max |3b(a+c) + 2b^2 - 8ac| = " + g6(worst));
}

PropertyResult atlas_group_velocity(const VerifySettings& s) {
    auto rng = rng_for(s, 5);
    std::uniform_real_distribution<double> ub(kSixth + 1e-3, 1.0), u01(0.0, 1.0);
    std::size_t checked = 0, mismatches = 0, skipped = 0;
    const int K = 20001;
    for (int trial = 0; trial < 300; ++trial) {
        const double b = ub(rng);
        const auto iv = atlas::admissible_nu_interval(b);
        const double nu = iv.lo + (iv.hi - iv.lo) * (0.02 + 0.96 * u01(rng));
        const auto p = atlas::from_nu_b({nu, b});
        if (!atlas::validate_physical(p).pass()) continue;
        const auto n = atlas::normalize(p);
        const auto rep = atlas::analyze_group_velocity(b, n);
        // Signed numerator of |w'| straight from (a, c), scanned on k in [0, 100].
        double pmin = INFINITY;
        for (int i = 0; i < K; ++i) {
            const double k = 100.0 * i / (K - 1), k2 = k * k, ac = n.a * n.c;
            pmin = std::min(pmin, ((ac * k2 + 3.0 * ac) * k2 - (1.0 + 2.0 * n.a + 2.0 * n.c)) * k2 + 1.0);
        }
        if (std::abs(rep.min_value) < 1e-6) {
            ++skipped;
            continue;
        }
        ++checked;
        mismatches += rep.everywhere_positive != (pmin > 0.0);
        if (b >= 2.0 / 9.0 && !rep.everywhere_positive) ++mismatches;
    }
    return verdict(mismatches == 0, std::to_string(checked) + " random points, " + std::to_string(mismatches) +
                                        " disagreements with the k-scan, " + std::to_string(skipped) + " near-tangent");
}

// --- spectral -------------------------------------------------------------

PropertyResult spectral_parseval(const VerifySettings& s) {
    auto rng = rng_for(s, 11);
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    double worst = 0.0, worst_rt = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Field f = sim::random_smooth_field(g, rng);
        const auto X = ops.forward(f);
        double spec = std::norm(X.front()) + std::norm(X.back());
        for (std::size_t m = 1; m + 1 < X.size(); ++m) spec += 2.0 * std::norm(X[m]);
        spec /= static_cast<double>(g.size());
        double phys = 0.0;
        for (double v : f.values) phys += v * v;
        worst = std::max(worst, std::abs(spec - phys) / phys);
        const Field back = ops.backward(X);
        worst_rt = std::max(worst_rt, (back - f).sup_norm() / f.sup_norm());
    }
    return verdict(worst < 1e-12 && worst_rt < 1e-12,
                   "relative L2 mismatch " + g6(worst) + ", roundtrip " + g6(worst_rt));
}

PropertyResult spectral_comparison(const VerifySettings& s) {
    auto rng = rng_for(s, 12);
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    sim::SmoothStateSpec pos;
    pos.max_wavenumber = 0.0;  // plain Gaussians
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Field v = sim::random_smooth_field(g, rng);
        Field d = sim::random_smooth_field(g, rng, pos);
        for (double& x : d.values) x = x * x;  // d >= 0, so w = v + d >= v
        const Field w = v + d;
        const Field diff = ops.helmholtz_inverse(w) - ops.helmholtz_inverse(v);
        double mn = 0.0;
        for (double x : diff.values) mn = std::min(mn, x);
        // H w and H v are formed separately, so rounding is relative to the operands.
        worst = std::max(worst, -mn / (w.sup_norm() + v.sup_norm()));
    }
    return verdict(worst <= 1e-13, "100 pairs v <= w; worst negative part of H w - H v relative to sup|v| + sup|w|: " + g6(worst));
}

PropertyResult spectral_kernel(const VerifySettings&) {
    // Discrete Green's function of 1 - d_xx: periodic and positive in the
    // continuum, slightly negative after spectral truncation.
    std::ostringstream os;
    double prev = INFINITY;
    bool shrinking = true, bounded = true;
    for (std::size_t N : {1024u, 2048u, 4096u}) {
        const Grid g(N, 100.0);
        SpectralOps ops(g);
        Field delta = Field::zeros(g);
        delta[N / 2] = 1.0 / g.dx();
        const Field G = ops.helmholtz_inverse(delta);
        double mn = 0.0, mx = 0.0;
        for (double x : G.values) {
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        const double rel = -mn / mx;
        bounded &= rel < 1e-5;
        shrinking &= rel <= prev;
        prev = rel;
        os << "N=" << N << ": min/max " << g6(-rel) << "; ";
    }
    os << "negative part bounded and shrinking under refinement";
    return verdict(bounded && shrinking, os.str());
}

PropertyResult spectral_domain(const VerifySettings& s) {
    auto rng = rng_for(s, 13);
    double worst = 0.0;
    const Grid g1(1024, 100.0), g2(2048, 200.0);
    SpectralOps o1(g1), o2(g2);
    const auto phi1 = spectral::weight_family(WeightKind::tanh, 20.0, g1);
    const auto phi2 = spectral::weight_family(WeightKind::tanh, 20.0, g2);
    const NormalizedParameters n{-0.8, -0.6, 0.0};
    const atlas::AlphaBeta ab{0.1, -0.2};
    for (int t = 0; t < 10; ++t) {
        // Same analytic state on both grids (g2 contains g1's nodes).
        auto r2 = rng;
        const auto s1 = sim::random_smooth_pair(g1, rng);
        const auto s2 = sim::random_smooth_pair(g2, r2);
        const auto d1 = diag::dH_decomposition(o1, s1, phi1, n, ab);
        const auto d2 = diag::dH_decomposition(o2, s2, phi2, n, ab);
        const auto v1 = diag::virials(o1, s1, phi1, ab);
        const auto v2 = diag::virials(o2, s2, phi2, ab);
        worst = std::max({worst, std::abs(d1.total() - d2.total()), std::abs(v1.H - v2.H)});
    }
    return verdict(worst < 1e-10, "max change of H, dH/dt when L doubles at fixed dx: " + g6(worst));
}

PropertyResult spectral_weights(const VerifySettings&) {
    const Grid g(2048, 100.0);
    double r2 = 0.0, r3 = 0.0, q1 = 0.0, q2 = 0.0;
    for (double lam : {5.0, 20.0, 40.0}) {
        const auto phi = spectral::weight_family(WeightKind::tanh, lam, g);
        const auto psi = spectral::weight_family(WeightKind::sech4, lam, g);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double w1 = phi.w1[j];
            if (w1 < 1e-200) continue;
            r2 = std::max(r2, std::abs(phi.w2[j]) / w1 * lam / 2.0);
            r3 = std::max(r3, std::abs(phi.w3[j]) / w1 * lam * lam);
            q1 = std::max(q1, std::abs(psi.w1[j]) / (4.0 * w1));
            q2 = std::max(q2, std::abs(psi.w2[j]) / w1 * lam / 20.0);
        }
    }
    const bool ok = r2 <= 1.0 + 1e-12 && r3 <= 4.0 + 1e-12 && q1 <= 1.0 + 1e-12 && q2 <= 1.0 + 1e-12;
    return verdict(ok, "max |phi''|/((2/l) phi') = " + g6(r2) + ", max l^2 |phi'''|/phi' = " + g6(r3) +
                           " (<= 4; equals 2 at x = 0), max |psi'|/(4 phi') = " + g6(q1) +
                           ", max |psi''|/((20/l) phi') = " + g6(q2));
}

// --- simulator ------------------------------------------------------------

PropertyResult sim_conservation(const VerifySettings& s) {
    std::ostringstream os;
    bool ok = true;
    for (auto n : {lab_point(), chart_point(0.8, 0.45)}) {
        auto c = identity_config(s, n, 0.005, 50.0);
        c.cadence = 100;
        const auto r = sim::run(c);
        if (r.status != sim::RunStatus::completed) return inconclusive(r);
        const auto& R = r.records;
        double e = 0.0, p = 0.0;
        for (const auto& x : R) {
            e = std::max(e, std::abs(x.E - R[0].E) / std::abs(R[0].E));
            p = std::max(p, std::abs(x.P - R[0].P) / std::abs(R[0].P));
        }
        ok &= e < 1e-7 && p < 1e-7;
        os << "(a,c)=(" << g6(n.a) << "," << g6(n.c) << "): E drift " << g6(e) << ", P drift " << g6(p) << "; ";
    }
    return verdict(ok, os.str() + "T = 50");
}

PropertyResult sim_linear_modes(const VerifySettings& s) {
    const Grid g(256, 50.0);
    const NormalizedParameters n{-0.7, -0.4, 0.0};
    sim::AbcdSystem sys(g, n, {false, false});
    double worst = 0.0;
    for (int m : {1, 5, 17, 40}) {
        const double k = g.wavenumbers()[static_cast<std::size_t>(m)];
        const double w = atlas::dispersion_omega(k, n);
        const double C = (n.c * k * k - 1.0) / (1.0 + k * k);
        sim::FieldPair st{Field::zeros(g), Field::sample(g, [&](double x) { return std::cos(k * x); })};
        const double dt = 0.01 * s.dt_factor, T = 5.0;
        const auto steps = static_cast<int>(std::llround(T / dt));
        for (int i = 0; i < steps; ++i) st = sys.rk4_step(st, dt);
        const double t = steps * dt;
        const Field eta = Field::sample(g, [&](double x) { return std::cos(k * x) * std::cos(w * t); });
        const Field u = Field::sample(g, [&](double x) { return -(k * C / w) * std::sin(k * x) * std::sin(w * t); });
        if (!st.all_finite() || st.amplitude() > 1e3)
            return {"", PropertyStatus::inconclusive, "linear run blew up at dt = " + g6(dt), 0.0};
        worst = std::max({worst, (st.eta - eta).sup_norm(), (st.u - u).sup_norm()});
    }
    return verdict(worst < 1e-8, "max deviation from cos/sin(kx) modes at frequency omega(k) after T = 5: " + g6(worst));
}

PropertyResult sim_symmetry(const VerifySettings& s) {
    auto c = identity_config(s, chart_point(0.8, 0.45), 0.01, 10.0);
    const Grid g(c.grid);
    // u odd, eta even about x = 0 (node index j <-> N - j).
    sim::FieldPair init{Field::sample(g, [](double x) { return 0.2 * x / 3.0 * std::exp(-x * x / 9.0); }),
                        Field::sample(g, [](double x) { return 0.2 * std::exp(-x * x / 16.0); })};
    const auto r = sim::run_from(c, init);
    if (r.status != sim::RunStatus::completed) return inconclusive(r);
    const auto& u = r.final_state.u;
    const auto& e = r.final_state.eta;
    const std::size_t N = g.size();
    double worst = 0.0;
    for (std::size_t j = 1; j < N; ++j) {
        worst = std::max({worst, std::abs(u[j] + u[N - j]), std::abs(e[j] - e[N - j])});
    }
    const double scale = r.final_state.amplitude();
    return verdict(worst <= 1e-12 * scale, "max parity defect " + g6(worst) + " (state size " + g6(scale) + ")");
}

PropertyResult sim_solitary(const VerifySettings& s) {
    const Grid g(2048, 100.0);
    const auto n = lab_point();
    sim::AbcdSystem sys(g, n);
    const auto st = sim::solitary_wave(g, n);
    const auto r0 = sys.rhs(st);
    const double resid = std::max(r0.u.sup_norm(), r0.eta.sup_norm());
    // Q'' - Q + Q^2 for the profile itself
    const Field Q = Field::sample(g, sim::soliton_profile);
    const Field Qxx = sys.ops().derivative(Q, 2);
    const double ode = (Qxx - Q + Q * Q).sup_norm();

    sim::SimulationConfig c;
    c.params = n;
    c.grid = {2048, 100.0};
    c.T = 10.0;
    c.dt = 0.01 * s.dt_factor;
    c.cadence = 50;
    c.initial.kind = sim::InitialKind::solitary;
    const auto r = sim::run(c);
    if (r.status != sim::RunStatus::completed) return inconclusive(r);
    const double drift = std::max((r.final_state.u - st.u).sup_norm(), (r.final_state.eta - st.eta).sup_norm());
    double vdrift = 0.0;
    for (const auto& x : r.records) {
        const auto& y = r.records.front();
        vdrift = std::max({vdrift, std::abs(x.I - y.I), std::abs(x.J - y.J), std::abs(x.K - y.K), std::abs(x.H - y.H)});
    }
    return verdict(resid < 1e-8 && drift < 1e-6 && ode < 1e-10 && vdrift < 1e-6,
                   "rhs sup " + g6(resid) + ", sup drift over T=10 " + g6(drift) + ", profile ODE residual " + g6(ode) +
                       ", I/J/K/H drift " + g6(vdrift));
}

PropertyResult sim_rk4_order(const VerifySettings& s) {
    const Grid g(256, 40.0);
    const NormalizedParameters n{-1.0, -0.5, 0.0};
    sim::AbcdSystem sys(g, n);
    const auto init = sim::gaussian_data(g, 0.3, 0.3, 2.0);
    auto evolve = [&](double dt) {
        auto st = init;
        const auto steps = static_cast<int>(std::llround(2.0 / dt));
        for (int i = 0; i < steps; ++i) st = sys.rk4_step(st, dt);
        return st;
    };
    const double dt = 0.08 * s.dt_factor;
    const auto ref = evolve(dt / 8.0);
    const auto a = evolve(dt);
    const auto b = evolve(dt / 2.0);
    if (!a.all_finite() || a.amplitude() > 1e3) return {"", PropertyStatus::inconclusive, "coarse run unstable", 0.0};
    const double ea = std::max((a.u - ref.u).sup_norm(), (a.eta - ref.eta).sup_norm());
    const double eb = std::max((b.u - ref.u).sup_norm(), (b.eta - ref.eta).sup_norm());
    const double ratio = ea / eb;
    return verdict(ratio > 12.0 && ratio < 20.0, "error ratio for dt -> dt/2: " + g6(ratio) + " (errors " + g6(ea) +
                                                     ", " + g6(eb) + ")");
}

// --- diagnostics ----------------------------------------------------------

PropertyResult diag_representation(const VerifySettings& s) {
    auto rng = rng_for(s, 21);
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    const auto phi = spectral::weight_family(WeightKind::tanh, 20.0, g);
    std::uniform_real_distribution<double> ua(-2.0, -0.05), uab(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const NormalizedParameters n{ua(rng), ua(rng), 0.0};
        const atlas::AlphaBeta ab{uab(rng), uab(rng)};
        const auto st = sim::random_smooth_pair(g, rng);
        auto v = atlas::virial_coefficients(n, ab);
        if (s.mutation == Mutation::a3_sign) {
            v.A[2] = -v.A[2];
            v.B[2] = -v.B[2];
        }
        const double q = diag::dH_decomposition(ops, st, phi, n, ab).Q;
        const double qc = diag::quadratic_Q_canonical(ops, st, phi, v);
        worst = std::max(worst, std::abs(q - qc) / std::abs(q));
    }
    std::string detail = "max relative |Q - Q_canonical| over 100 random states " + g6(worst);
    if (s.mutation != Mutation::none) detail += " [mutation a3_sign active]";
    return verdict(worst < 1e-9, detail);
}

PropertyResult diag_sq_rewrite(const VerifySettings& s) {
    auto rng = rng_for(s, 22);
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    const auto phi = spectral::weight_family(WeightKind::tanh, 20.0, g);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto st = sim::random_smooth_pair(g, rng);
        const auto r = diag::sq_canonical_rewrite(ops, st, phi, {-0.7, -0.4, 0.0}, {0.3, -0.2});
        const double sb = std::max(std::abs(r.beta_lhs), 1e-300), sa = std::max(std::abs(r.alpha_lhs), 1e-300);
        worst = std::max({worst, std::abs(r.beta_lhs - r.beta_rhs) / sb, std::abs(r.alpha_lhs - r.alpha_rhs) / sa});
    }
    return verdict(worst < 1e-9, "max relative mismatch of the phi'' -> phi''' rewrites " + g6(worst));
}

PropertyResult diag_chain_rule(const VerifySettings& s) {
    auto rng = rng_for(s, 23);
    const Grid g(1024, 100.0);
    std::uniform_real_distribution<double> ua(-2.0, -0.05), uab(-1.0, 1.0);
    double wh = 0.0, we = 0.0;
    for (int t = 0; t < 30; ++t) {
        const NormalizedParameters n{ua(rng), ua(rng), 0.0};
        const atlas::AlphaBeta ab{uab(rng), uab(rng)};
        sim::AbcdSystem sys(g, n);
        auto& ops = sys.ops();
        const auto phi = spectral::weight_family(WeightKind::tanh, 20.0, g);
        const auto psi = spectral::weight_family(WeightKind::sech4, 20.0, g);
        const auto st = sim::random_smooth_pair(g, rng);
        const auto vel = sys.rhs(st);
        const double dh = diag::dH_dt_chain(ops, st, vel, phi, ab);
        const double de = diag::dEloc_dt_chain(ops, st, vel, psi, n);
        wh = std::max(wh, std::abs(dh - diag::dH_decomposition(ops, st, phi, n, ab).total()) / std::abs(dh));
        we = std::max(we, std::abs(de - diag::dEloc_rhs(ops, st, psi, n)) / std::abs(de));
    }
    return verdict(wh < 1e-9 && we < 1e-9, "instantaneous dH/dt vs Q+SQ+NQ " + g6(wh) + ", dE_loc/dt vs decomposition " +
                                               g6(we));
}

PropertyResult diag_virial_identity(const VerifySettings& s) {
    const auto c1 = identity_config(s, lab_point(), 0.005, 20.0);
    auto c2 = c1;
    c2.dt = c1.dt / 2.0;
    const auto r1 = sim::run(c1);
    if (r1.status != sim::RunStatus::completed) return inconclusive(r1);
    const auto r2 = sim::run(c2);
    if (r2.status != sim::RunStatus::completed) return inconclusive(r2);
    const auto e1 = diag::identity_residual(r1.records, &DiagnosticsRecord::H, &DiagnosticsRecord::dH_predicted, true);
    const auto e2 = diag::identity_residual(r2.records, &DiagnosticsRecord::H, &DiagnosticsRecord::dH_predicted, true);
    const double gain = e1.max_relative / e2.max_relative;
    return verdict(e1.max_relative < 1e-5 && gain >= 3.5, "max relative residual " + g6(e1.max_relative) + " at " +
                                                              std::to_string(e1.points) + " points; dt/2 gain " + g6(gain));
}

PropertyResult diag_eloc_identity(const VerifySettings& s) {
    const auto r = sim::run(identity_config(s, lab_point(), 0.005, 20.0));
    if (r.status != sim::RunStatus::completed) return inconclusive(r);
    const auto e = diag::identity_residual(r.records, &DiagnosticsRecord::E_loc, &DiagnosticsRecord::dEloc_predicted, false);
    return verdict(e.max_relative < 1e-5, "max residual relative to max |dE_loc/dt| " + g6(e.max_relative));
}

PropertyResult diag_moving_weight(const VerifySettings& s) {
    auto c = identity_config(s, chart_point(1.0 / 3.0, 0.5), 0.005, 20.0);
    c.time_dependent_weight = true;
    c.C0 = 4.0;
    // Off-center data so the odd weight-rate integrals do not vanish by parity;
    // lambda(t) moves fast near t0, so sample every step.
    c.initial.center = 3.0;
    c.cadence = 1;
    const auto r = sim::run(c);
    if (r.status != sim::RunStatus::completed) return inconclusive(r);
    const auto h = diag::identity_residual(r.records, &DiagnosticsRecord::H, &DiagnosticsRecord::dH_predicted, false);
    const auto e = diag::identity_residual(r.records, &DiagnosticsRecord::E_loc, &DiagnosticsRecord::dEloc_predicted, false);
    return verdict(h.max_relative < 1e-5 && e.max_relative < 1e-5,
                   "lambda(t) weights: H residual " + g6(h.max_relative) + ", E_loc residual " + g6(e.max_relative));
}

PropertyResult diag_positivity(const VerifySettings& s) {
    std::ostringstream os;
    bool ok = true;
    for (auto n : {lab_point(), chart_point(1.0 / 3.0, 0.5), chart_point(0.8, 0.45)}) {
        auto c = identity_config(s, n, 0.01, 20.0);
        const auto r = sim::run(c);
        if (r.status != sim::RunStatus::completed) return inconclusive(r);
        const auto v = atlas::virial_coefficients(n, c.resolved_alpha_beta());
        double minq = INFINITY, mind = INFINITY, lower = INFINITY;
        for (const auto& x : r.records) {
            minq = std::min(minq, x.Q);
            mind = std::min(mind, x.dH_predicted());
            lower = std::min(lower, x.dH_predicted() / (0.5 * v.min_coercive() * x.canonical_norm));
        }
        ok &= minq >= 0.0 && mind > 0.0 && lower >= 1.0;
        os << "(" << g6(n.a) << "," << g6(n.c) << "): min Q " << g6(minq) << ", min dH/dt " << g6(mind)
           << ", min dH/dt over half-coercive norm " << g6(lower) << "; ";
    }
    bool empty_band = false;
    try {
        (void)atlas::select_alpha_beta({-0.25, -0.25, 0.0});
    } catch (const atlas::ParameterError&) {
        empty_band = atlas::alpha_beta_bands({-0.25, -0.25, 0.0}).a3.empty();
    }
    ok &= empty_band;
    os << "(-1/4,-1/4): A3 band " << (empty_band ? "empty" : "NOT empty");
    return verdict(ok, os.str());
}

PropertyResult diag_reflection(const VerifySettings& s) {
    auto rng = rng_for(s, 24);
    const Grid g(1024, 100.0);
    const NormalizedParameters n{-0.9, -0.5, 0.0};
    diag::DiagnosticsOptions o;
    o.ab = {0.2, -0.1};
    diag::DiagnosticsEvaluator ev(g, n, o);
    double worst = 0.0;
    const std::size_t N = g.size();
    for (int t = 0; t < 10; ++t) {
        const auto st = sim::random_smooth_pair(g, rng);
        sim::FieldPair rf = st;
        for (std::size_t j = 0; j < N; ++j) {
            rf.u[j] = -st.u[(N - j) % N];
            rf.eta[j] = st.eta[(N - j) % N];
        }
        const auto a = ev.evaluate(st, 0.0);
        const auto b = ev.evaluate(rf, 0.0);
        // P is odd under the reflection, everything else even.
        const double pairs[][2] = {{a.E, b.E},   {a.P, -b.P},   {a.I, b.I},         {a.J, b.J},
                                   {a.K, b.K},   {a.H, b.H},   {a.Q, b.Q},         {a.SQ, b.SQ},
                                   {a.NQ, b.NQ}, {a.E_loc, b.E_loc}, {a.dEloc_rhs, b.dEloc_rhs}, {a.localH1, b.localH1}};
        for (const auto& p : pairs) worst = std::max(worst, std::abs(p[0] - p[1]) / std::max(std::abs(p[0]), 1e-300));
    }
    return verdict(worst < 1e-10, "max relative change of diagnostics (P up to sign) under (u, eta)(x) -> (-u(-x), eta(-x)): " + g6(worst));
}

PropertyResult diag_norm_equivalence(const VerifySettings& s) {
    auto rng = rng_for(s, 25);
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    const double lam = 20.0;
    const auto w = spectral::weight_family(WeightKind::sech2, lam, g);
    double lo2 = INFINITY, hi2 = 0.0, lo1 = INFINITY, hi1 = 0.0, resid = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Field u = sim::random_smooth_field(g, rng);
        const auto r = diag::norm_equivalence(ops, u, w);
        lo2 = std::min(lo2, r.l2_ratio);
        hi2 = std::max(hi2, r.l2_ratio);
        lo1 = std::min(lo1, r.h1_ratio);
        hi1 = std::max(hi1, r.h1_ratio);
        resid = std::max(resid, std::abs(r.identity_residual) / spectral::weighted_integral(w.w, u, u));
    }
    // |w''| <= eps w with eps = 4/lam^2 for this weight gives 1/2 <= ratio <= 1/(1 - eps).
    const double eps = 4.0 / (lam * lam);
    const double upper = 1.0 / (1.0 - eps);
    const bool ok = lo2 >= 0.5 && hi2 <= upper && lo1 >= 0.5 && hi1 <= upper && resid < 1e-10;
    return verdict(ok, "L2 ratio in [" + g6(lo2) + ", " + g6(hi2) + "], H1 ratio in [" + g6(lo1) + ", " + g6(hi1) +
                           "], admissible [0.5, " + g6(upper) + "]; weighted identity residual " + g6(resid));
}

PropertyResult diag_decay(const VerifySettings& s) {
    sim::SimulationConfig c;
    c.params = chart_point(1.0 / 3.0, 0.5);
    c.grid = {2048, 256.0};
    c.T = 200.0;
    c.dt = sim::default_dt(Grid(c.grid), c.params) * s.dt_factor;
    c.lambda = 20.0;
    c.initial = {sim::InitialKind::gaussian, 0.01, 0.01, 5.0, 0.0};
    const auto r = sim::run(c);
    if (r.status != sim::RunStatus::completed) return inconclusive(r);
    const double ratio = r.records.back().localH1 / r.records.front().localH1;
    const auto ti = diag::localized_time_integral(r.records, c.C0, c.t0);
    double bflag = 0.0;
    for (const auto& x : r.records) bflag = std::max(bflag, x.boundary_flag);
    return verdict(ratio < 0.5 && ti.tail_fraction() < 0.1,
                   "localH1(200)/localH1(0) = " + g6(ratio) + ", last-quarter share of the lambda(t) integral " +
                       g6(ti.tail_fraction()) + ", max outer-domain amplitude " + g6(bflag));
}

}  // namespace

const char* to_string(PropertyStatus s) {
    switch (s) {
        case PropertyStatus::pass: return "PASS";
        case PropertyStatus::fail: return "FAIL";
        case PropertyStatus::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const std::vector<PropertyCase>& property_catalog() {
    static const std::vector<PropertyCase> cat = {
        {"atlas.roundtrip", atlas_roundtrip},
        {"atlas.dispersive_interval", atlas_dispersive_interval},
        {"atlas.band_positivity", atlas_band_positivity},
        {"atlas.gamma_boundary", atlas_gamma},
        {"atlas.group_velocity", atlas_group_velocity},
        {"spectral.parseval", spectral_parseval},
        {"spectral.comparison_principle", spectral_comparison},
        {"spectral.helmholtz_kernel", spectral_kernel},
        {"spectral.domain_enlargement", spectral_domain},
        {"spectral.weight_bounds", spectral_weights},
        {"sim.conservation", sim_conservation},
        {"sim.linear_modes", sim_linear_modes},
        {"sim.parity", sim_symmetry},
        {"sim.solitary_wave", sim_solitary},
        {"sim.rk4_order", sim_rk4_order},
        {"diag.representation", diag_representation},
        {"diag.sq_rewrite", diag_sq_rewrite},
        {"diag.chain_rule", diag_chain_rule},
        {"diag.virial_identity", diag_virial_identity},
        {"diag.local_energy_identity", diag_eloc_identity},
        {"diag.moving_weight_identity", diag_moving_weight},
        {"diag.positivity", diag_positivity},
        {"diag.reflection", diag_reflection},
        {"diag.norm_equivalence", diag_norm_equivalence},
        {"diag.decay", diag_decay},
    };
    return cat;
}

std::vector<PropertyResult> run_property_suite(const VerifySettings& s) {
    std::vector<const PropertyCase*> chosen;
    for (const auto& pc : property_catalog()) {
        if (s.only.empty() || std::find(s.only.begin(), s.only.end(), pc.name) != s.only.end()) chosen.push_back(&pc);
    }
    std::vector<PropertyResult> out(chosen.size());
    parallel_for(chosen.size(), s.jobs, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        PropertyResult r;
        try {
            r = chosen[i]->run(s);
        } catch (const std::exception& e) {
            r = {"", PropertyStatus::fail, std::string("exception: ") + e.what(), 0.0};
        }
        r.name = chosen[i]->name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out[i] = std::move(r);
    });
    return out;
}

int suite_exit_code(const std::vector<PropertyResult>& rs) {
    bool inc = false;
    for (const auto& r : rs) {
        if (r.status == PropertyStatus::fail) return kExitProperty;
        inc |= r.status == PropertyStatus::inconclusive;
    }
    return inc ? kExitInstability : kExitOk;
}

std::string format_result_line(const PropertyResult& r) {
    return std::string(to_string(r.status)) + "\t" + r.name + "\t" + r.detail;
}

}  // namespace abcd::cli
