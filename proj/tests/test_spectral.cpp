#include <doctest.h>

#include <cmath>

#include "abcd/spectral.hpp"
#include "oracles.hpp"

using namespace abcd::spectral;

TEST_CASE("grid construction") {
    CHECK_THROWS_AS(Grid(1000, 10.0), GridError);
    CHECK_THROWS_AS(Grid(2, 10.0), GridError);
    CHECK_THROWS_AS(Grid(64, 0.0), GridError);
    CHECK_THROWS_AS(Grid(64, INFINITY), GridError);
    const Grid g(8, 4.0);
    CHECK(g.dx() == 1.0);
    CHECK(g.nodes().front() == -4.0);
    CHECK(g.nodes()[4] == 0.0);
    CHECK(g.wavenumbers().size() == 5);
    CHECK(g.wavenumbers()[2] == doctest::Approx(M_PI / 2));
    CHECK_THROWS_AS(Field(g.spec(), std::vector<double>(7)), GridError);
}

TEST_CASE("fields on different grids do not mix") {
    const Grid a(64, 10.0), b(64, 20.0);
    const Field fa = Field::zeros(a), fb = Field::zeros(b);
    CHECK_THROWS_AS((void)(fa + fb), GridError);
    SpectralOps ops(a);
    CHECK_THROWS_AS((void)ops.derivative(fb), GridError);
    CHECK_THROWS_AS((void)weighted_integral(fa, fb), GridError);
}

TEST_CASE("derivatives of Fourier modes and constants") {
    const Grid g(256, 10.0);
    SpectralOps ops(g);
    const double k0 = g.wavenumbers()[7];
    const Field s = Field::sample(g, [&](double x) { return std::sin(k0 * x); });
    const Field ds = ops.derivative(s, 1);
    const Field want = Field::sample(g, [&](double x) { return k0 * std::cos(k0 * x); });
    CHECK((ds - want).sup_norm() < 1e-12);
    const Field d3 = ops.derivative(s, 3);
    CHECK((d3 + k0 * k0 * want).sup_norm() < 1e-10);

    const Field one = Field::sample(g, [](double) { return 3.5; });
    for (int order = 1; order <= 3; ++order) CHECK(ops.derivative(one, order).sup_norm() < 1e-13);
    CHECK_THROWS((void)ops.derivative(one, 4));
}

TEST_CASE("second derivative of a Gaussian against second-order differences") {
    // Finite-difference error must fall like h^2 when compared with the spectral value.
    double prev = 0.0;
    for (std::size_t N : {256u, 512u, 1024u}) {
        const Grid g(N, 20.0);
        SpectralOps ops(g);
        const Field f = Field::sample(g, [](double x) { return std::exp(-x * x / 4.0); });
        const double err = oracle::sup_diff(ops.derivative(f, 2).values, oracle::fd2(f.values, g.dx()));
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
        prev = err;
    }
}

TEST_CASE("Helmholtz inverse") {
    const Grid g(256, 10.0);
    SpectralOps ops(g);
    const double k0 = g.wavenumbers()[5];
    const Field c = Field::sample(g, [&](double x) { return std::cos(k0 * x); });
    CHECK((ops.helmholtz_inverse(c) - c * (1.0 / (1.0 + k0 * k0))).sup_norm() < 1e-14);

    // u = f - f'' recovers f
    const Field f = Field::sample(g, [](double x) { return std::exp(-x * x / 3.0) * std::sin(x); });
    const Field u = f - ops.derivative(f, 2);
    CHECK((ops.helmholtz_inverse(u) - f).sup_norm() < 1e-12);
    CHECK((ops.helmholtz(f) - u).sup_norm() < 1e-12);
}

TEST_CASE("discrete Helmholtz kernel") {
    // The continuum periodic kernel cosh(L - |x|) / (2 sinh L) is positive; the
    // sampled one has a small negative tail from spectral truncation.
    const Grid g(1024, 100.0);
    SpectralOps ops(g);
    Field delta = Field::zeros(g);
    delta[512] = 1.0 / g.dx();
    const Field G = ops.helmholtz_inverse(delta);
    double mn = 0.0;
    for (double v : G.values) mn = std::min(mn, v);
    CHECK(mn < 0.0);
    CHECK(-mn / G[512] < 1e-5);
    CHECK(G[512] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("dealiasing removes exactly the top third") {
    const Grid g(128, 10.0);
    SpectralOps ops(g);
    const std::size_t keep = 128 / 3, drop = keep + 1;
    const double kk = g.wavenumbers()[keep], kd = g.wavenumbers()[drop];
    const Field a = Field::sample(g, [&](double x) { return std::cos(kk * x); });
    const Field b = Field::sample(g, [&](double x) { return std::cos(kd * x); });
    CHECK((ops.dealias(a) - a).sup_norm() < 1e-13);
    CHECK(ops.dealias(b).sup_norm() < 1e-13);
}

TEST_CASE("weight families") {
    const Grid g(2048, 100.0);
    const double lam = 20.0;
    const auto phi = weight_family(WeightKind::tanh, lam, g);
    const std::size_t mid = 1024;
    CHECK(phi.w[mid] == 0.0);
    CHECK(phi.w1[mid] == 1.0);
    CHECK(phi.w2[mid] == 0.0);

    // each sampled derivative against centered differences of the one before
    for (auto kind : {WeightKind::tanh, WeightKind::sech2, WeightKind::sech4}) {
        const auto w = weight_family(kind, lam, g);
        const auto d1 = oracle::fd1_4(w.w.values, g.dx());
        const auto d2 = oracle::fd1_4(w.w1.values, g.dx());
        const auto d3 = oracle::fd1_4(w.w2.values, g.dx());
        // skip the periodic seam of the odd tanh weight
        for (std::size_t j = 2; j + 2 < g.size(); ++j) {
            CHECK(std::abs(d1[j] - w.w1[j]) < 1e-8);
            CHECK(std::abs(d2[j] - w.w2[j]) < 1e-8);
            CHECK(std::abs(d3[j] - w.w3[j]) < 1e-8);
        }
    }
    const auto scaled = weight_family(WeightKind::tanh, lam, g, 1.0 / lam);
    CHECK(scaled.w1[mid] == doctest::Approx(1.0 / lam));
    CHECK_THROWS((void)weight_family(WeightKind::tanh, 0.0, g));
    CHECK(std::string(to_string(WeightKind::sech4)) == "sech4");
}

TEST_CASE("tanh weight derivative bounds") {
    const Grid g(4096, 100.0);
    for (double lam : {5.0, 20.0, 50.0}) {
        const auto phi = weight_family(WeightKind::tanh, lam, g);
        const auto psi = weight_family(WeightKind::sech4, lam, g);
        double worst3 = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double w1 = phi.w1[j];
            CHECK(std::abs(phi.w2[j]) <= (2.0 / lam) * w1 * (1 + 1e-12));
            CHECK(std::abs(phi.w3[j]) <= (4.0 / (lam * lam)) * w1 * (1 + 1e-12));
            CHECK(std::abs(psi.w1[j]) <= 4.0 * w1 * (1 + 1e-12));
            worst3 = std::max(worst3, std::abs(phi.w3[j]) / w1 * lam * lam);
        }
        // the ratio 2|3 tanh^2 - 1| grows toward 4 in |x|, so the sup sits at the domain edge
        const double th = std::tanh(g.half_length() / lam);
        CHECK(worst3 == doctest::Approx(2.0 * std::max(1.0, std::abs(3 * th * th - 1))).epsilon(1e-9));
    }
}

TEST_CASE("the constant lambda^-2 in |phi'''| <= C phi' is too small at the origin") {
    // phi''' = (2/lambda^2) sech^2 (3 tanh^2 - 1) gives |phi'''(0)| = 2 phi'(0) / lambda^2.
    const Grid g(1024, 100.0);
    const double lam = 20.0;
    const auto phi = weight_family(WeightKind::tanh, lam, g);
    const std::size_t mid = 512;
    CHECK(std::abs(phi.w3[mid]) > phi.w1[mid] / (lam * lam));
    CHECK(std::abs(phi.w3[mid]) * lam * lam / phi.w1[mid] == doctest::Approx(2.0));
}

TEST_CASE("quadrature") {
    const Grid g(2048, 50.0);
    const Field s2 = Field::sample(g, [](double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); });
    CHECK(std::abs(integral(s2) - 2.0) < 1e-10);
    const Field odd = Field::sample(g, [](double x) { return x * std::exp(-x * x); });
    CHECK(std::abs(integral(odd)) < 1e-15);

    oracle::Gen gen(31);
    for (int i = 0; i < 20; ++i) {
        const auto f = oracle::Bumps::draw(gen);
        const auto h = oracle::Bumps::draw(gen);
        const Field F = Field::sample(g, f), H = Field::sample(g, h);
        const double want = oracle::simpson([&](double x) { return f(x) * h(x); }, -50.0, 50.0, 20000);
        CHECK(std::abs(weighted_integral(F, H) - want) < 1e-10);
        const double l2 = oracle::simpson([&](double x) { return f(x) * f(x); }, -50.0, 50.0, 20000);
        CHECK(std::abs(l2_norm_squared(F) - l2) < 1e-10);
    }
}

TEST_CASE("transforms: roundtrip and Parseval on random data") {
    const Grid g(512, 30.0);
    SpectralOps ops(g);
    oracle::Gen gen(32);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> v(g.size());
        for (double& x : v) x = gen.uniform(-1, 1);
        const Field f(g.spec(), v);
        const auto X = ops.forward(f);
        CHECK((ops.backward(X) - f).sup_norm() < 1e-13);
        double spec = std::norm(X.front()) + std::norm(X.back()), phys = 0.0;
        for (std::size_t m = 1; m + 1 < X.size(); ++m) spec += 2 * std::norm(X[m]);
        for (double x : v) phys += x * x;
        CHECK(spec / g.size() == doctest::Approx(phys).epsilon(1e-12));
    }
}

TEST_CASE("field helpers") {
    const Grid g(8, 4.0);
    Field f = Field::sample(g, [](double x) { return x; });
    CHECK(f.sup_norm() == 4.0);
    CHECK(f.all_finite());
    f[3] = NAN;
    CHECK_FALSE(f.all_finite());
    const Field a = Field::sample(g, [](double x) { return x; });
    const Field p = a * a;
    CHECK(p[0] == 16.0);
    CHECK((2.0 * a - a - a).sup_norm() == 0.0);
}
