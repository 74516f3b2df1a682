#pragma once

// Parameter-space algebra for the Hamiltonian abcd Boussinesq system
// (b = d > 0, a, c < 0, zero surface tension): admissibility, the (nu, b)
// chart, the dispersion-like region, the (alpha, beta) bands that make the
// modified virial coercive, and the linear dispersion relation.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcd::atlas {

class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//! Coefficients (a, b, c, d) of the unscaled system.
struct PhysicalParameters {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

//! Coefficients after the stretching that sets b = d = 1.
//! b_origin is the pre-stretching b; it is 0 when the pair was built directly
//! (e.g. the a = c = -1 laboratory point, which has no physical preimage).
struct NormalizedParameters {
    double a = 0.0;
    double c = 0.0;
    double b_origin = 0.0;
};

struct NuB {
    double nu = 0.0;
    double b = 0.0;
};

//! Real interval with independently open/closed ends.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;

    [[nodiscard]] bool empty() const;
    [[nodiscard]] bool contains(double x) const;
    [[nodiscard]] std::string to_string() const;

    static Interval empty_set() { return {0.0, 0.0, false, false}; }
};

//! Open band {(alpha, beta) : alpha + lower < beta < alpha + upper}.
struct Band {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool empty() const { return !(lower < upper); }
    [[nodiscard]] bool contains_offset(double beta_minus_alpha) const {
        return lower < beta_minus_alpha && beta_minus_alpha < upper;
    }
    [[nodiscard]] Band intersect(const Band& other) const;
};

struct BandSet {
    Band a2;
    Band a3;
    Band a4;

    [[nodiscard]] Band intersection() const { return a2.intersect(a3).intersect(a4); }
};

struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

//! A_k, B_k multiply phi' f_k^2 and phi' g_k^2 (k = number of derivatives,
//! index 0 is the undifferentiated term); D multiplies the phi''' terms.
struct VirialCoefficients {
    std::array<double, 4> A{};
    std::array<double, 4> B{};
    double D11 = 0.0;
    double D12 = 0.0;
    double D21 = 0.0;
    double D22 = 0.0;

    //! Smallest of all A_k, B_k.
    [[nodiscard]] double min_coercive() const;
};

enum class RegionStatus { inside, boundary, outside };

[[nodiscard]] const char* to_string(RegionStatus s);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;

    [[nodiscard]] bool pass() const;
    [[nodiscard]] const Check* find(const std::string& name) const;
    [[nodiscard]] std::string summary() const;
};

inline constexpr double kSumTolerance = 1e-12;

// --- admissibility -------------------------------------------------------

//! Membership tests for B0 (signs), B1(b) (a + c = 1/3 - 2b), B2(b), B3(b),
//! the b = d constraint and the derived bound b > 1/6.
[[nodiscard]] ValidationReport validate_physical(const PhysicalParameters& p,
                                                 double tol = kSumTolerance);

[[nodiscard]] PhysicalParameters from_nu_b(const NuB& q);

//! [0,1] intersected with (2/3 - 2b, 2b); empty iff b <= 1/6.
[[nodiscard]] Interval admissible_nu_interval(double b);

//! Values of nu in the admissible interval whose normalized pair is
//! dispersion-like. Empty for b <= 2/9.
[[nodiscard]] Interval dispersive_nu_interval(double b);

//! 6b^2 - 11b/6 + 1/9, the squared half-width of the hyperbola window in nu.
[[nodiscard]] double dispersive_radicand(double b);

//! Stretch to b = d = 1. Throws ParameterError when validation fails.
[[nodiscard]] NormalizedParameters normalize(const PhysicalParameters& p);

// --- dispersion-like region ----------------------------------------------

//! 8ac - 3(a + c) - 2; positive exactly on the dispersion-like region.
[[nodiscard]] double dispersion_margin(const NormalizedParameters& n);

[[nodiscard]] bool is_dispersion_like(const NormalizedParameters& n, double tol = 0.0);

[[nodiscard]] RegionStatus dispersion_status(const NormalizedParameters& n, double tol = 0.0);

//! c on the curve 3b(a + c) + 2b^2 - 8ac = 0. Throws at a = 3b/8.
[[nodiscard]] double gamma_boundary(double b, double a);

//! 3456 b^2 - 1056 b + 64: positive iff the gamma curve cuts the line
//! a + c = 1/3 - 2b in two distinct points.
[[nodiscard]] double gamma_line_discriminant(double b);

//! The a-coordinates where gamma(b) meets a + c = 1/3 - 2b (0, 1 or 2 roots).
[[nodiscard]] std::vector<double> gamma_line_intersections(double b);

// --- virial bands and coefficients ---------------------------------------

[[nodiscard]] BandSet alpha_beta_bands(const NormalizedParameters& n);

//! alpha = 0, beta = midpoint of A2 ∩ A3 ∩ A4. Throws ParameterError when
//! the triple intersection is empty.
[[nodiscard]] AlphaBeta select_alpha_beta(const NormalizedParameters& n);

[[nodiscard]] VirialCoefficients virial_coefficients(const NormalizedParameters& n,
                                                     const AlphaBeta& ab);

// --- linear dispersion ---------------------------------------------------

//! Positive branch |k| sqrt((1 - a k^2)(1 - c k^2)) / (1 + k^2).
[[nodiscard]] double dispersion_omega(double k, const NormalizedParameters& n);

[[nodiscard]] double group_velocity(double k, const NormalizedParameters& n);

//! Cubic in mu = k^2 whose sign controls the group velocity, with the
//! linear coefficient written through b (a + c = 1/(3b) - 2).
struct GroupVelocityCubic {
    double ac = 0.0;
    double linear = 0.0;

    [[nodiscard]] double operator()(double mu) const {
        return ((ac * mu + 3.0 * ac) * mu + linear) * mu + 1.0;
    }
};

struct GroupVelocityReport {
    GroupVelocityCubic cubic;
    double radicand = 0.0;   // 1 + (2/(3b) - 3) / (3ac)
    bool real_critical_points = false;
    double mu_minus = 0.0;
    double mu_plus = 0.0;
    bool positive_critical_point = false;
    double min_value = 1.0;  // min of p over mu >= 0
    double argmin = 0.0;
    bool everywhere_positive = true;

    [[nodiscard]] std::string describe() const;
};

[[nodiscard]] GroupVelocityReport analyze_group_velocity(double b, const NormalizedParameters& n);

//! Same analysis with the linear coefficient -(1 + 2a + 2c) taken from the
//! pair itself; covers pairs built without a physical b (e.g. a = c = -1).
[[nodiscard]] GroupVelocityReport analyze_group_velocity(const NormalizedParameters& n);

[[nodiscard]] bool group_velocity_everywhere_positive(double b, const NormalizedParameters& n);

}  // namespace abcd::atlas
