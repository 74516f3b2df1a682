#pragma once

// Periodic pseudo-spectral toolkit on [-L, L): grids, sampled fields, Fourier
// multipliers backed by FFTW, analytic weight families and rectangle-rule
// quadrature.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace abcd::spectral {

class GridError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    std::size_t N = 1024;
    double L = 100.0;

    bool operator==(const GridSpec&) const = default;
};

//! Uniform periodic grid; N must be a power of two (>= 4).
class Grid {
  public:
    Grid(std::size_t N, double L);
    explicit Grid(const GridSpec& s) : Grid(s.N, s.L) {}

    [[nodiscard]] std::size_t size() const { return spec_.N; }
    [[nodiscard]] double half_length() const { return spec_.L; }
    [[nodiscard]] double dx() const { return 2.0 * spec_.L / static_cast<double>(spec_.N); }
    [[nodiscard]] const GridSpec& spec() const { return spec_; }
    [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
    //! Nonnegative half spectrum k_m = pi m / L, m = 0..N/2.
    [[nodiscard]] const std::vector<double>& wavenumbers() const { return k_; }
    [[nodiscard]] std::size_t spectrum_size() const { return spec_.N / 2 + 1; }

  private:
    GridSpec spec_;
    std::vector<double> nodes_;
    std::vector<double> k_;
};

//! Samples at the nodes of a grid. The grid spec travels with the values so
//! that mixing fields from different grids is caught.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    Field(const GridSpec& g, std::vector<double> v);
    static Field zeros(const Grid& g);
    static Field sample(const Grid& g, const std::function<double(double)>& f);

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    [[nodiscard]] double sup_norm() const;
    [[nodiscard]] bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, double s);
Field operator*(double s, Field a);
//! Pointwise product.
Field operator*(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* where);

using Spectrum = std::vector<std::complex<double>>;

//! FFTW workspace bound to one grid. Not safe for concurrent use; give each
//! thread its own instance.
class SpectralOps {
  public:
    explicit SpectralOps(const Grid& g);
    ~SpectralOps();
    SpectralOps(const SpectralOps&) = delete;
    SpectralOps& operator=(const SpectralOps&) = delete;

    [[nodiscard]] const Grid& grid() const { return grid_; }

    //! Unnormalized forward transform (r2c, N/2+1 coefficients).
    Spectrum forward(const Field& f);
    //! Inverse of forward, including the 1/N normalization.
    Field backward(const Spectrum& s);

    //! (ik)^order, order 1..3. The Nyquist coefficient is dropped for odd orders.
    Field derivative(const Field& f, int order = 1);
    //! Fourier multiplier 1/(1 + k^2).
    Field helmholtz_inverse(const Field& f);
    //! (1 - d^2/dx^2) f.
    Field helmholtz(const Field& f);
    //! 2/3-rule truncation: zeroes every mode with m > N/3.
    Field dealias(const Field& f);
    //! Generic real-space multiplier m(k) applied on the half spectrum.
    Field apply_multiplier(const Field& f, const std::function<std::complex<double>(double)>& symbol);

    //! Multiplies a spectrum in place by (ik)^order with the Nyquist rule above.
    void differentiate_in_place(Spectrum& s, int order) const;
    void dealias_in_place(Spectrum& s) const;

  private:
    struct Plans;
    Grid grid_;
    std::unique_ptr<Plans> plans_;
};

enum class WeightKind { tanh, sech2, sech4 };

const char* to_string(WeightKind k);

//! w and its first three derivatives, sampled from closed forms.
//! tanh: w = scale lambda tanh(x/lambda); sech2: w = scale sech^2(x/lambda);
//! sech4: w = scale lambda sech^4(x/lambda).
struct WeightFamily {
    WeightKind kind = WeightKind::tanh;
    double lambda = 20.0;
    double scale = 1.0;
    Field w;
    Field w1;
    Field w2;
    Field w3;
};

[[nodiscard]] WeightFamily weight_family(WeightKind kind, double lambda, const Grid& g, double scale = 1.0);

//! dx * sum_j w_j * prod f_j.
[[nodiscard]] double weighted_integral(const Field& w, const std::vector<const Field*>& fs);

template <class... Fs>
[[nodiscard]] double weighted_integral(const Field& w, const Fs&... fs) {
    return weighted_integral(w, std::vector<const Field*>{&fs...});
}

[[nodiscard]] double integral(const Field& f);

//! dx * sum f_j^2.
[[nodiscard]] double l2_norm_squared(const Field& f);

}  // namespace abcd::spectral
