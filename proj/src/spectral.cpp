#include "abcd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace abcd::spectral {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string spec_string(const GridSpec& g) {
    return "(N=" + std::to_string(g.N) + ", L=" + std::to_string(g.L) + ")";
}

}  // namespace

Grid::Grid(std::size_t N, double L) : spec_{N, L} {
    if (N < 4 || !is_power_of_two(N)) throw GridError("grid size must be a power of two >= 4, got " + std::to_string(N));
    if (!(L > 0.0) || !std::isfinite(L)) throw GridError("grid half-length must be positive and finite");
    nodes_.resize(N);
    const double h = dx();
    for (std::size_t j = 0; j < N; ++j) nodes_[j] = -L + h * static_cast<double>(j);
    k_.resize(N / 2 + 1);
    for (std::size_t m = 0; m < k_.size(); ++m) k_[m] = std::numbers::pi * static_cast<double>(m) / L;
}

Field::Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.N) throw GridError("field length does not match grid size");
}

Field Field::zeros(const Grid& g) { return Field(g.spec(), std::vector<double>(g.size(), 0.0)); }

Field Field::sample(const Grid& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    const auto& x = g.nodes();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(x[j]);
    return Field(g.spec(), std::move(v));
}

double Field::sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size())
        throw GridError(std::string(where) + ": grid mismatch " + spec_string(a.grid) + " vs " + spec_string(b.grid));
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "Field::operator+=");
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += o.values[j];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "Field::operator-=");
    for (std::size_t j = 0; j < values.size(); ++j) values[j] -= o.values[j];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, double s) { return a *= s; }
Field operator*(double s, Field a) { return a *= s; }

Field operator*(const Field& a, const Field& b) {
    require_same_grid(a, b, "Field product");
    Field r = a;
    for (std::size_t j = 0; j < r.values.size(); ++j) r.values[j] *= b.values[j];
    return r;
}

struct SpectralOps::Plans {
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Plans(std::size_t N) : n(N) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        real = fftw_alloc_real(N);
        spec = fftw_alloc_complex(N / 2 + 1);
        const int ni = static_cast<int>(N);
        fwd = fftw_plan_dft_r2c_1d(ni, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(ni, spec, real, FFTW_ESTIMATE);
        if (!real || !spec || !fwd || !bwd) throw std::runtime_error("FFTW plan creation failed");
    }
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
};

SpectralOps::SpectralOps(const Grid& g) : grid_(g), plans_(std::make_unique<Plans>(g.size())) {}

SpectralOps::~SpectralOps() = default;

Spectrum SpectralOps::forward(const Field& f) {
    if (!(f.grid == grid_.spec())) throw GridError("SpectralOps::forward: grid mismatch " + spec_string(f.grid));
    std::copy(f.values.begin(), f.values.end(), plans_->real);
    fftw_execute(plans_->fwd);
    Spectrum s(grid_.spectrum_size());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = {plans_->spec[m][0], plans_->spec[m][1]};
    return s;
}

Field SpectralOps::backward(const Spectrum& s) {
    if (s.size() != grid_.spectrum_size()) throw GridError("SpectralOps::backward: spectrum size mismatch");
    for (std::size_t m = 0; m < s.size(); ++m) {
        plans_->spec[m][0] = s[m].real();
        plans_->spec[m][1] = s[m].imag();
    }
    // c2r ignores the imaginary parts of the DC and Nyquist bins anyway.
    fftw_execute(plans_->bwd);
    const double inv = 1.0 / static_cast<double>(grid_.size());
    std::vector<double> v(grid_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = plans_->real[j] * inv;
    return Field(grid_.spec(), std::move(v));
}

void SpectralOps::differentiate_in_place(Spectrum& s, int order) const {
    if (order < 0 || order > 3) throw std::invalid_argument("derivative order must be in 0..3");
    const auto& k = grid_.wavenumbers();
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t m = 0; m < s.size(); ++m) {
        std::complex<double> mult(1.0, 0.0);
        for (int p = 0; p < order; ++p) mult *= I * k[m];
        s[m] *= mult;
    }
    if (order % 2 == 1) s.back() = 0.0;
}

void SpectralOps::dealias_in_place(Spectrum& s) const {
    const std::size_t cutoff = grid_.size() / 3;
    for (std::size_t m = cutoff + 1; m < s.size(); ++m) s[m] = 0.0;
}

Field SpectralOps::derivative(const Field& f, int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be in 1..3");
    auto s = forward(f);
    differentiate_in_place(s, order);
    return backward(s);
}

Field SpectralOps::helmholtz_inverse(const Field& f) {
    auto s = forward(f);
    const auto& k = grid_.wavenumbers();
    for (std::size_t m = 0; m < s.size(); ++m) s[m] /= 1.0 + k[m] * k[m];
    return backward(s);
}

Field SpectralOps::helmholtz(const Field& f) {
    auto s = forward(f);
    const auto& k = grid_.wavenumbers();
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= 1.0 + k[m] * k[m];
    return backward(s);
}

Field SpectralOps::dealias(const Field& f) {
    auto s = forward(f);
    dealias_in_place(s);
    return backward(s);
}

Field SpectralOps::apply_multiplier(const Field& f, const std::function<std::complex<double>(double)>& symbol) {
    auto s = forward(f);
    const auto& k = grid_.wavenumbers();
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= symbol(k[m]);
    return backward(s);
}

const char* to_string(WeightKind k) {
    switch (k) {
        case WeightKind::tanh: return "tanh";
        case WeightKind::sech2: return "sech2";
        case WeightKind::sech4: return "sech4";
    }
    return "?";
}

WeightFamily weight_family(WeightKind kind, double lambda, const Grid& g, double scale) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("weight scale lambda must be positive");
    WeightFamily wf;
    wf.kind = kind;
    wf.lambda = lambda;
    wf.scale = scale;
    const std::size_t n = g.size();
    std::vector<double> w(n), w1(n), w2(n), w3(n);
    const double l = lambda, l2 = lambda * lambda, l3 = l2 * lambda;
    const auto& x = g.nodes();
    for (std::size_t j = 0; j < n; ++j) {
        const double s = x[j] / l;
        const double t = std::tanh(s);
        const double sc = 1.0 / std::cosh(s);
        const double s2 = sc * sc;
        const double s4 = s2 * s2;
        switch (kind) {
            case WeightKind::tanh:
                w[j] = l * t;
                w1[j] = s2;
                w2[j] = -(2.0 / l) * s2 * t;
                w3[j] = (2.0 / l2) * s2 * (3.0 * t * t - 1.0);
                break;
            case WeightKind::sech2:
                w[j] = s2;
                w1[j] = -(2.0 / l) * s2 * t;
                w2[j] = (2.0 / l2) * s2 * (3.0 * t * t - 1.0);
                w3[j] = (8.0 / l3) * s2 * t * (2.0 - 3.0 * t * t);
                break;
            case WeightKind::sech4:
                w[j] = l * s4;
                w1[j] = -4.0 * s4 * t;
                w2[j] = (4.0 / l) * s4 * (5.0 * t * t - 1.0);
                w3[j] = (8.0 / l2) * s4 * t * (7.0 - 15.0 * t * t);
                break;
        }
        w[j] *= scale;
        w1[j] *= scale;
        w2[j] *= scale;
        w3[j] *= scale;
    }
    wf.w = Field(g.spec(), std::move(w));
    wf.w1 = Field(g.spec(), std::move(w1));
    wf.w2 = Field(g.spec(), std::move(w2));
    wf.w3 = Field(g.spec(), std::move(w3));
    return wf;
}

double weighted_integral(const Field& w, const std::vector<const Field*>& fs) {
    for (const Field* f : fs) require_same_grid(w, *f, "weighted_integral");
    const std::size_t n = w.values.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double p = w.values[j];
        for (const Field* f : fs) p *= f->values[j];
        sum += p;
    }
    return sum * 2.0 * w.grid.L / static_cast<double>(w.grid.N);
}

double integral(const Field& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum * 2.0 * f.grid.L / static_cast<double>(f.grid.N);
}

double l2_norm_squared(const Field& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v * v;
    return sum * 2.0 * f.grid.L / static_cast<double>(f.grid.N);
}

}  // namespace abcd::spectral
