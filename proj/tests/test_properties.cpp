// Randomized invariants. Inputs come from the seeded splitmix generator in
// oracles.hpp; every case prints its seed on failure through doctest's INFO.

#include <doctest.h>

#include <cmath>

#include "abcd/run.hpp"
#include "oracles.hpp"

using namespace abcd;
using sim::FieldPair;
using spectral::Field;
using spectral::Grid;
using spectral::WeightKind;

namespace {

constexpr std::uint64_t kSeed = 20240611;

FieldPair draw_pair(const Grid& g, oracle::Gen& gen) {
    return {Field::sample(g, oracle::Bumps::draw(gen)), Field::sample(g, oracle::Bumps::draw(gen))};
}

atlas::NormalizedParameters draw_negative_pair(oracle::Gen& gen) {
    return {gen.uniform(-2.5, -0.02), gen.uniform(-2.5, -0.02), 0.0};
}

}  // namespace

TEST_CASE("chart: every admissible (nu, b) validates and normalizes into a, c < 0") {
    oracle::Gen gen(kSeed);
    for (int i = 0; i < 5000; ++i) {
        const double b = gen.uniform(1.0 / 6 + 1e-9, 1.5);
        const auto iv = atlas::admissible_nu_interval(b);
        const double nu = iv.lo + (iv.hi - iv.lo) * gen.uniform(1e-6, 1 - 1e-6);
        INFO("nu = " << nu << ", b = " << b);
        const auto p = atlas::from_nu_b({nu, b});
        REQUIRE(atlas::validate_physical(p).pass());
        const auto n = atlas::normalize(p);
        CHECK(n.a < 0.0);
        CHECK(n.c < 0.0);
        CHECK(std::abs((n.a + n.c) * b - (1.0 / 3 - 2 * b)) < 1e-12);
    }
}

TEST_CASE("chart: points outside the nu-interval fail validation") {
    oracle::Gen gen(kSeed + 1);
    for (int i = 0; i < 5000; ++i) {
        const double b = gen.uniform(0.05, 1.0);
        const double nu = gen.uniform(-0.5, 1.5);
        const bool inside = b > 1.0 / 6 && atlas::admissible_nu_interval(b).contains(nu);
        INFO("nu = " << nu << ", b = " << b);
        CHECK(atlas::validate_physical(atlas::from_nu_b({nu, b})).pass() == inside);
    }
}

TEST_CASE("dispersion-like test agrees with the nu-interval away from its ends") {
    oracle::Gen gen(kSeed + 2);
    for (int i = 0; i < 5000; ++i) {
        const double b = gen.uniform(1.0 / 6 + 1e-6, 1.0);
        const auto iv = atlas::admissible_nu_interval(b);
        const double nu = iv.lo + (iv.hi - iv.lo) * gen.uniform(0, 1);
        const auto p = atlas::from_nu_b({nu, b});
        if (!atlas::validate_physical(p).pass()) continue;
        const auto n = atlas::normalize(p);
        if (std::abs(atlas::dispersion_margin(n)) < 1e-10) continue;
        INFO("nu = " << nu << ", b = " << b);
        CHECK(atlas::is_dispersion_like(n) == atlas::dispersive_nu_interval(b).contains(nu));
    }
}

TEST_CASE("spectral operators: linearity, symmetry and skew-symmetry") {
    const Grid g(512, 60.0);
    spectral::SpectralOps ops(g);
    oracle::Gen gen(kSeed + 3);
    for (int i = 0; i < 50; ++i) {
        const Field f = Field::sample(g, oracle::Bumps::draw(gen));
        const Field h = Field::sample(g, oracle::Bumps::draw(gen));
        const double s = gen.uniform(-3, 3);
        CHECK((ops.helmholtz_inverse(f + s * h) - ops.helmholtz_inverse(f) - s * ops.helmholtz_inverse(h)).sup_norm() <
              1e-14);
        // <H f, h> = <f, H h>
        CHECK(spectral::weighted_integral(ops.helmholtz_inverse(f), h) ==
              doctest::Approx(spectral::weighted_integral(f, ops.helmholtz_inverse(h))).epsilon(1e-12));
        // <f', h> = -<f, h'>
        const double lhs = spectral::weighted_integral(ops.derivative(f), h);
        const double rhs = -spectral::weighted_integral(f, ops.derivative(h));
        CHECK(std::abs(lhs - rhs) < 1e-14);
        // H is a contraction in L2
        CHECK(spectral::l2_norm_squared(ops.helmholtz_inverse(f)) <= spectral::l2_norm_squared(f) * (1 + 1e-14));
    }
}

TEST_CASE("comparison principle on random ordered pairs") {
    const Grid g(1024, 100.0);
    spectral::SpectralOps ops(g);
    oracle::Gen gen(kSeed + 4);
    for (int i = 0; i < 100; ++i) {
        const Field v = Field::sample(g, oracle::Bumps::draw(gen));
        auto bump = oracle::Bumps::draw(gen);
        for (double& a : bump.amp) a = std::abs(a);
        const Field w = v + Field::sample(g, bump);
        const Field d = ops.helmholtz_inverse(w) - ops.helmholtz_inverse(v);
        double mn = 0.0;
        for (double x : d.values) mn = std::min(mn, x);
        // rounding only
        CHECK(mn >= -1e-15 * (v.sup_norm() + w.sup_norm()));
    }
}

TEST_CASE("energy and momentum are first integrals of the semidiscrete flow") {
    // d/dt E(s + t F(s)) at t = 0 by a centered difference in t.
    const Grid g(512, 60.0);
    oracle::Gen gen(kSeed + 5);
    for (int i = 0; i < 20; ++i) {
        const auto n = draw_negative_pair(gen);
        sim::AbcdSystem sys(g, n);
        const auto s = draw_pair(g, gen);
        const auto F = sys.rhs(s);
        const double h = 1e-4;
        const auto sp = s + h * F, sm = s - h * F;
        auto& ops = sys.ops();
        const double dE = (diag::energy(ops, sp, n) - diag::energy(ops, sm, n)) / (2 * h);
        const double dP = (diag::momentum(ops, sp) - diag::momentum(ops, sm)) / (2 * h);
        const double scale = std::sqrt(diag::energy(ops, F, n) * diag::energy(ops, s, n)) + 1e-300;
        INFO("a = " << n.a << ", c = " << n.c);
        CHECK(std::abs(dE) / scale < 1e-7);
        CHECK(std::abs(dP) / scale < 1e-7);
    }
}

TEST_CASE("quadratic representation identity on random parameters, weights and states") {
    oracle::Gen gen(kSeed + 6);
    const Grid g(1024, 100.0);
    spectral::SpectralOps ops(g);
    for (int i = 0; i < 100; ++i) {
        const auto n = draw_negative_pair(gen);
        const atlas::AlphaBeta ab{gen.uniform(-1.5, 1.5), gen.uniform(-1.5, 1.5)};
        const auto phi = spectral::weight_family(WeightKind::tanh, gen.uniform(4, 40), g);
        const auto s = draw_pair(g, gen);
        const double q = diag::dH_decomposition(ops, s, phi, n, ab).Q;
        CHECK(std::abs(diag::quadratic_Q_canonical(ops, s, phi, n, ab) - q) <= 1e-9 * std::abs(q));
    }
}

TEST_CASE("dispersion-like parameters with the selected (alpha, beta) give Q >= 0 at large lambda") {
    oracle::Gen gen(kSeed + 7);
    const Grid g(1024, 100.0);
    spectral::SpectralOps ops(g);
    int tested = 0;
    for (int i = 0; i < 400 && tested < 60; ++i) {
        const auto n = draw_negative_pair(gen);
        // keep a margin from the region boundary so the bands are not razor thin
        if (atlas::dispersion_margin(n) < 0.5) continue;
        ++tested;
        const auto ab = atlas::select_alpha_beta(n);
        const auto phi = spectral::weight_family(WeightKind::tanh, 40.0, g);
        const auto s = draw_pair(g, gen);
        const auto v = atlas::virial_coefficients(n, ab);
        const auto parts = diag::canonical_parts(ops, s, phi, v);
        INFO("a = " << n.a << ", c = " << n.c);
        CHECK(parts.leading_f + parts.leading_g > 0.0);
        CHECK(diag::quadratic_Q_canonical(ops, s, phi, v) >= 0.0);
    }
    CHECK(tested >= 30);
}

TEST_CASE("Parseval-type identity for the canonical variable") {
    // int w u^2 = int w (f^2 + 2 f_x^2 + f_xx^2) - int w'' f^2 for f = H u
    const Grid g(1024, 100.0);
    spectral::SpectralOps ops(g);
    oracle::Gen gen(kSeed + 8);
    for (int i = 0; i < 50; ++i) {
        const double lam = gen.uniform(3, 40);
        const auto w = spectral::weight_family(WeightKind::sech2, lam, g);
        const Field u = Field::sample(g, oracle::Bumps::draw(gen));
        const Field f = ops.helmholtz_inverse(u), fx = ops.derivative(f), fxx = ops.derivative(f, 2);
        using spectral::weighted_integral;
        const double lhs = weighted_integral(w.w, u, u);
        const double rhs = weighted_integral(w.w, f, f) + 2 * weighted_integral(w.w, fx, fx) +
                           weighted_integral(w.w, fxx, fxx) - weighted_integral(w.w2, f, f);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
        const auto ne = diag::norm_equivalence(ops, u, w);
        CHECK(ne.l2_ratio >= 0.5);
        CHECK(ne.l2_ratio <= 1.0 / (1.0 - 4.0 / (lam * lam)) * (1 + 1e-12));
    }
}

TEST_CASE("group velocity: analytic verdict matches a k-scan on random physical points") {
    oracle::Gen gen(kSeed + 9);
    for (int i = 0; i < 200; ++i) {
        const double b = gen.uniform(1.0 / 6 + 1e-3, 1.0);
        const auto iv = atlas::admissible_nu_interval(b);
        const double nu = iv.lo + (iv.hi - iv.lo) * gen.uniform(0.01, 0.99);
        const auto n = atlas::normalize(atlas::from_nu_b({nu, b}));
        const auto rep = atlas::analyze_group_velocity(b, n);
        double mn = INFINITY;
        for (int j = 0; j <= 20000; ++j) mn = std::min(mn, atlas::group_velocity(100.0 * j / 20000, n));
        INFO("nu = " << nu << ", b = " << b);
        if (rep.everywhere_positive) CHECK(mn > 0.0);
        if (b >= 2.0 / 9) CHECK(rep.everywhere_positive);
    }
}
