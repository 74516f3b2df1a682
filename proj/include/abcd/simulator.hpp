#pragma once

// Semidiscrete normalized abcd system (b = d = 1) on a periodic grid, RK4
// stepping, and the canonical initial-data generators.

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "abcd/atlas.hpp"
#include "abcd/spectral.hpp"

namespace abcd::sim {

using atlas::NormalizedParameters;
using spectral::Field;
using spectral::Grid;
using spectral::SpectralOps;

class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FieldPair {
    Field u;
    Field eta;

    [[nodiscard]] bool all_finite() const { return u.all_finite() && eta.all_finite(); }
    //! sup|u| + sup|eta|
    [[nodiscard]] double amplitude() const { return u.sup_norm() + eta.sup_norm(); }
};

FieldPair operator+(const FieldPair& a, const FieldPair& b);
FieldPair operator-(const FieldPair& a, const FieldPair& b);
FieldPair operator*(double s, const FieldPair& a);

struct RhsOptions {
    bool nonlinear = true;
    bool dealias = false;
};

//! eta_t = a u_x - (1+a) H u_x - H (u eta)_x
//! u_t   = c eta_x - (1+c) H eta_x - H (u^2/2)_x,    H = (1 - d_xx)^{-1}
class AbcdSystem {
  public:
    AbcdSystem(const Grid& g, const NormalizedParameters& n, RhsOptions opt = {});

    [[nodiscard]] const Grid& grid() const { return ops_.grid(); }
    [[nodiscard]] const NormalizedParameters& parameters() const { return n_; }
    [[nodiscard]] const RhsOptions& options() const { return opt_; }
    SpectralOps& ops() { return ops_; }

    FieldPair rhs(const FieldPair& s);
    FieldPair rk4_step(const FieldPair& s, double dt);

  private:
    SpectralOps ops_;
    NormalizedParameters n_;
    RhsOptions opt_;
};

//! 0.25 dx / max(1, sqrt(ac)).
[[nodiscard]] double default_dt(const Grid& g, const NormalizedParameters& n);

//! Q(x) = 3 / (2 cosh^2(x/2)), the profile solving Q'' - Q + Q^2 = 0.
[[nodiscard]] double soliton_profile(double x);

//! Stationary pair (sqrt(2) Q(x/sqrt|a|), -Q(x/sqrt|a|)); requires a = c < 0.
[[nodiscard]] FieldPair solitary_wave(const Grid& g, const NormalizedParameters& n);

[[nodiscard]] FieldPair gaussian_data(const Grid& g, double amp_u, double amp_eta, double width, double center = 0.0);

[[nodiscard]] FieldPair zero_data(const Grid& g);

//! Closed-form H^1 x H^1 norm of gaussian_data on the line.
[[nodiscard]] double gaussian_h1_pair_norm(double amp_u, double amp_eta, double width);

//! Grid H^1 x H^1 norm (derivatives spectral).
[[nodiscard]] double h1_pair_norm(SpectralOps& ops, const FieldPair& s);

//! Max of |u|, |eta| over the outer 10% of the domain (|x| >= 0.9 L).
[[nodiscard]] double boundary_amplitude(const Grid& g, const FieldPair& s);

//! Little-endian: uint64 N, float64 L, float64 t, then N values of u and N of eta.
void write_state_dump(const std::filesystem::path& p, const FieldPair& s, double t);

struct StateDump {
    FieldPair state;
    double t = 0.0;
};

[[nodiscard]] StateDump read_state_dump(const std::filesystem::path& p);

}  // namespace abcd::sim
