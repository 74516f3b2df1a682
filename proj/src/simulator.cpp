#include "abcd/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace abcd::sim {

using spectral::Spectrum;

FieldPair operator+(const FieldPair& a, const FieldPair& b) { return {a.u + b.u, a.eta + b.eta}; }
FieldPair operator-(const FieldPair& a, const FieldPair& b) { return {a.u - b.u, a.eta - b.eta}; }
FieldPair operator*(double s, const FieldPair& a) { return {a.u * s, a.eta * s}; }

AbcdSystem::AbcdSystem(const Grid& g, const NormalizedParameters& n, RhsOptions opt)
    : ops_(g), n_(n), opt_(opt) {}

FieldPair AbcdSystem::rhs(const FieldPair& s) {
    spectral::require_same_grid(s.u, s.eta, "AbcdSystem::rhs");
    const auto& k = ops_.grid().wavenumbers();
    const std::size_t M = k.size();

    Spectrum uh = ops_.forward(s.u);
    Spectrum eh = ops_.forward(s.eta);
    Spectrum ph, qh;
    if (opt_.nonlinear) {
        Field u = s.u, e = s.eta;
        if (opt_.dealias) {
            Spectrum ut = uh, et = eh;
            ops_.dealias_in_place(ut);
            ops_.dealias_in_place(et);
            u = ops_.backward(ut);
            e = ops_.backward(et);
        }
        Field p = u * e;
        Field q = u * u;
        q *= 0.5;
        ph = ops_.forward(p);
        qh = ops_.forward(q);
        if (opt_.dealias) {
            ops_.dealias_in_place(ph);
            ops_.dealias_in_place(qh);
        }
    }

    const double a = n_.a, c = n_.c;
    const std::complex<double> I(0.0, 1.0);
    Spectrum eta_t(M), u_t(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double km = k[m];
        const double h = 1.0 / (1.0 + km * km);
        eta_t[m] = I * km * ((a - (1.0 + a) * h) * uh[m]);
        u_t[m] = I * km * ((c - (1.0 + c) * h) * eh[m]);
        if (opt_.nonlinear) {
            eta_t[m] -= I * km * h * ph[m];
            u_t[m] -= I * km * h * qh[m];
        }
    }
    eta_t.back() = 0.0;
    u_t.back() = 0.0;
    return {ops_.backward(u_t), ops_.backward(eta_t)};
}

FieldPair AbcdSystem::rk4_step(const FieldPair& s, double dt) {
    const FieldPair k1 = rhs(s);
    const FieldPair k2 = rhs(s + (0.5 * dt) * k1);
    const FieldPair k3 = rhs(s + (0.5 * dt) * k2);
    const FieldPair k4 = rhs(s + dt * k3);
    FieldPair out = s;
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < out.u.size(); ++j) {
        out.u[j] += w * (k1.u[j] + 2.0 * k2.u[j] + 2.0 * k3.u[j] + k4.u[j]);
        out.eta[j] += w * (k1.eta[j] + 2.0 * k2.eta[j] + 2.0 * k3.eta[j] + k4.eta[j]);
    }
    return out;
}

double default_dt(const Grid& g, const NormalizedParameters& n) {
    return 0.25 * g.dx() / std::max(1.0, std::sqrt(n.a * n.c));
}

double soliton_profile(double x) {
    const double ch = std::cosh(0.5 * x);
    return 1.5 / (ch * ch);
}

FieldPair solitary_wave(const Grid& g, const NormalizedParameters& n) {
    if (!(n.a < 0.0) || n.a != n.c)
        throw std::invalid_argument("solitary_wave: explicit profile requires a = c < 0");
    const double r = std::sqrt(-n.a);
    const double s2 = std::numbers::sqrt2;
    return {Field::sample(g, [&](double x) { return s2 * soliton_profile(x / r); }),
            Field::sample(g, [&](double x) { return -soliton_profile(x / r); })};
}

FieldPair gaussian_data(const Grid& g, double amp_u, double amp_eta, double width, double center) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_data: width must be positive");
    auto bump = [&](double amp) {
        return Field::sample(g, [=](double x) {
            const double y = (x - center) / width;
            return amp * std::exp(-y * y);
        });
    };
    return {bump(amp_u), bump(amp_eta)};
}

FieldPair zero_data(const Grid& g) { return {Field::zeros(g), Field::zeros(g)}; }

double gaussian_h1_pair_norm(double amp_u, double amp_eta, double width) {
    const double c = std::sqrt(std::numbers::pi / 2.0) * (width + 1.0 / width);
    return std::sqrt((amp_u * amp_u + amp_eta * amp_eta) * c);
}

double h1_pair_norm(SpectralOps& ops, const FieldPair& s) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    using spectral::l2_norm_squared;
    return std::sqrt(l2_norm_squared(s.u) + l2_norm_squared(ux) + l2_norm_squared(s.eta) + l2_norm_squared(ex));
}

double boundary_amplitude(const Grid& g, const FieldPair& s) {
    const auto& x = g.nodes();
    const double edge = 0.9 * g.half_length();
    double m = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (std::abs(x[j]) < edge) continue;
        m = std::max({m, std::abs(s.u[j]), std::abs(s.eta[j])});
    }
    return m;
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(sizeof(T) == 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    os.write(buf, 8);
}

template <class T>
T get_le(std::istream& is) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) throw SimulationError("state dump truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_state_dump(const std::filesystem::path& p, const FieldPair& s, double t) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw SimulationError("cannot open " + p.string() + " for writing");
    put_le<std::uint64_t>(os, s.u.grid.N);
    put_le<double>(os, s.u.grid.L);
    put_le<double>(os, t);
    for (double v : s.u.values) put_le<double>(os, v);
    for (double v : s.eta.values) put_le<double>(os, v);
    if (!os) throw SimulationError("write failed: " + p.string());
}

StateDump read_state_dump(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw SimulationError("cannot open " + p.string());
    const auto N = get_le<std::uint64_t>(is);
    const double L = get_le<double>(is);
    const double t = get_le<double>(is);
    const Grid g(static_cast<std::size_t>(N), L);
    std::vector<double> u(N), e(N);
    for (auto& v : u) v = get_le<double>(is);
    for (auto& v : e) v = get_le<double>(is);
    return {{Field(g.spec(), std::move(u)), Field(g.spec(), std::move(e))}, t};
}

}  // namespace abcd::sim
