#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "abcd/run.hpp"
#include "oracles.hpp"

using namespace abcd;
using sim::FieldPair;
using spectral::Field;
using spectral::Grid;

namespace {

const atlas::NormalizedParameters kLab{-1.0, -1.0, 0.0};

double sup(const FieldPair& s) { return std::max(s.u.sup_norm(), s.eta.sup_norm()); }

}  // namespace

TEST_CASE("zero state is a fixed point") {
    const Grid g(256, 50.0);
    sim::AbcdSystem sys(g, kLab);
    const auto z = sim::zero_data(g);
    CHECK(sup(sys.rhs(z)) == 0.0);
    CHECK(sup(sys.rk4_step(z, 0.1)) == 0.0);
}

TEST_CASE("solitary pair") {
    const Grid g(2048, 100.0);
    sim::AbcdSystem sys(g, kLab);
    const auto s = sim::solitary_wave(g, kLab);
    CHECK(s.u[1024] == doctest::Approx(3.0 * std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(s.eta[1024] == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(sim::soliton_profile(0.0) == 1.5);
    CHECK(sup(sys.rhs(s)) < 1e-8);

    const Field Q = Field::sample(g, sim::soliton_profile);
    CHECK((sys.ops().derivative(Q, 2) - Q + Q * Q).sup_norm() < 1e-10);

    // stretched profile for a = c != -1 is still stationary
    const atlas::NormalizedParameters n{-2.0, -2.0, 0.0};
    sim::AbcdSystem sys2(g, n);
    CHECK(sup(sys2.rhs(sim::solitary_wave(g, n))) < 1e-8);

    CHECK_THROWS_AS((void)sim::solitary_wave(g, {-1.0, -0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("solitary wave stays put over T = 10") {
    const Grid g(2048, 100.0);
    sim::AbcdSystem sys(g, kLab);
    const auto s0 = sim::solitary_wave(g, kLab);
    auto s = s0;
    for (int i = 0; i < 1000; ++i) s = sys.rk4_step(s, 0.01);
    CHECK(sup(s - s0) < 1e-6);
}

TEST_CASE("linear symbol of a single Fourier mode") {
    const Grid g(256, 30.0);
    const atlas::NormalizedParameters n{-0.7, -0.3, 0.0};
    sim::AbcdSystem sys(g, n, {false, false});
    for (std::size_t m : {1u, 4u, 20u, 60u}) {
        const double k = g.wavenumbers()[m];
        const double A = (n.a * k * k - 1.0) / (1.0 + k * k);
        const double C = (n.c * k * k - 1.0) / (1.0 + k * k);
        // eta = cos kx, u = 0: u_t = C d_x eta, eta_t = 0
        const FieldPair s{Field::zeros(g), Field::sample(g, [&](double x) { return std::cos(k * x); })};
        const auto r = sys.rhs(s);
        CHECK((r.u - Field::sample(g, [&](double x) { return -k * C * std::sin(k * x); })).sup_norm() < 1e-12);
        CHECK(r.eta.sup_norm() < 1e-14);
        // the product of the two symbols is -omega^2
        const double w = atlas::dispersion_omega(k, n);
        CHECK(-(k * A) * (k * C) == doctest::Approx(-w * w).epsilon(1e-12));
    }
}

TEST_CASE("RK4 converges at fourth order") {
    const Grid g(256, 40.0);
    sim::AbcdSystem sys(g, {-1.0, -0.5, 0.0});
    const auto init = sim::gaussian_data(g, 0.3, 0.3, 2.0);
    auto evolve = [&](double dt) {
        auto s = init;
        for (long i = 0, n = std::lround(2.0 / dt); i < n; ++i) s = sys.rk4_step(s, dt);
        return s;
    };
    const auto ref = evolve(0.01);
    const double e1 = sup(evolve(0.08) - ref), e2 = sup(evolve(0.04) - ref);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("initial data") {
    const Grid g(1024, 100.0);
    CHECK(sup(sim::gaussian_data(g, 0.0, 0.0, 5.0)) == 0.0);
    CHECK_THROWS((void)sim::gaussian_data(g, 0.01, 0.01, 0.0));

    spectral::SpectralOps ops(g);
    const double closed = sim::gaussian_h1_pair_norm(0.01, 0.01, 5.0);
    CHECK(closed < 0.1);
    CHECK(sim::h1_pair_norm(ops, sim::gaussian_data(g, 0.01, 0.01, 5.0)) == doctest::Approx(closed).epsilon(1e-12));
    // Simpson oracle for the same norm
    auto f = [](double x) {
        const double e = 0.01 * std::exp(-x * x / 25.0), d = e * (-2.0 * x / 25.0);
        return 2.0 * (e * e + d * d);
    };
    CHECK(std::sqrt(oracle::simpson(f, -100, 100, 40000)) == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("translation leaves energy and momentum unchanged") {
    const Grid g(1024, 100.0);
    spectral::SpectralOps ops(g);
    const atlas::NormalizedParameters n{-0.8, -0.6, 0.0};
    const auto a = sim::gaussian_data(g, 0.1, 0.05, 4.0, 0.0);
    const auto b = sim::gaussian_data(g, 0.1, 0.05, 4.0, 7.3);
    CHECK(std::abs(diag::energy(ops, a, n) - diag::energy(ops, b, n)) < 1e-12);
    CHECK(std::abs(diag::momentum(ops, a) - diag::momentum(ops, b)) < 1e-12);
}

TEST_CASE("default step and outer-domain amplitude") {
    const Grid g(1024, 100.0);
    CHECK(sim::default_dt(g, kLab) == doctest::Approx(0.25 * g.dx()));
    CHECK(sim::default_dt(g, {-4.0, -1.0, 0.0}) == doctest::Approx(0.125 * g.dx()));
    auto s = sim::zero_data(g);
    s.u[3] = 0.5;  // x near -L
    s.eta[512] = 9.0;  // x = 0, not in the outer band
    CHECK(sim::boundary_amplitude(g, s) == 0.5);
}

TEST_CASE("state dump roundtrip") {
    const Grid g(64, 12.5);
    const auto s = sim::gaussian_data(g, 0.3, -0.2, 2.0, 1.0);
    const auto p = std::filesystem::temp_directory_path() / "abcd_state_dump_test.bin";
    sim::write_state_dump(p, s, 3.25);
    CHECK(std::filesystem::file_size(p) == 8 + 8 + 8 + 2 * 64 * 8);
    const auto d = sim::read_state_dump(p);
    CHECK(d.t == 3.25);
    CHECK(d.state.u.grid == g.spec());
    CHECK(sup(d.state - s) == 0.0);
    std::filesystem::remove(p);
    CHECK_THROWS_AS((void)sim::read_state_dump(p), sim::SimulationError);
}

TEST_CASE("energy conservation over T = 50") {
    sim::SimulationConfig c;
    c.params = kLab;
    c.dt = 0.005;
    c.T = 50.0;
    c.cadence = 500;
    c.dealias = sim::DealiasMode::off;
    const auto r = sim::run(c);
    REQUIRE(r.status == sim::RunStatus::completed);
    CHECK(r.records.size() == 21);
    for (const auto& x : r.records) {
        CHECK(std::abs(x.E - r.records[0].E) / r.records[0].E < 1e-8);
        CHECK(std::abs(x.P - r.records[0].P) / std::abs(r.records[0].P) < 1e-8);
    }
}

TEST_CASE("driver behavior") {
    sim::SimulationConfig c;
    c.T = 1.0;
    c.grid = {256, 50.0};
    c.initial.kind = sim::InitialKind::zero;
    c.cadence = 5;
    auto r = sim::run(c);
    CHECK(r.status == sim::RunStatus::completed);
    for (const auto& x : r.records) {
        CHECK(x.E == 0.0);
        CHECK(x.H == 0.0);
        CHECK(x.Q == 0.0);
        CHECK(x.E_loc == 0.0);
        CHECK(x.localH1 == 0.0);
    }

    // callback sees every record in order
    c.initial.kind = sim::InitialKind::gaussian;
    std::vector<double> seen;
    r = sim::run(c, [&](const diag::DiagnosticsRecord& x) { seen.push_back(x.t); });
    REQUIRE(seen.size() == r.records.size());
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] > seen[i - 1]);

    // a far too large step is caught and reported
    c.dt = 2.0;
    c.T = 200.0;
    r = sim::run(c);
    CHECK(r.status != sim::RunStatus::completed);
    CHECK(r.steps < 100);

    sim::SimulationConfig bad;
    bad.T = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.cadence = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.params = {0.1, -1.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.grid = {1000, 10.0};
    CHECK_THROWS(bad.validate());

    sim::SimulationConfig d;
    d.T = 40.0;
    CHECK_FALSE(d.resolved_dealias());
    d.T = 200.0;
    CHECK(d.resolved_dealias());
    d.dealias = sim::DealiasMode::off;
    CHECK_FALSE(d.resolved_dealias());
}

TEST_CASE("deterministic runs") {
    sim::SimulationConfig c;
    c.T = 2.0;
    c.grid = {512, 50.0};
    const auto a = sim::run(c), b = sim::run(c);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].H == b.records[i].H);
    CHECK(sup(a.final_state - b.final_state) == 0.0);
}
