#pragma once

// Test-side reference computations, written without the library's
// spectral machinery so they can check it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

//! Composite Simpson on [lo, hi] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}

//! Second-order centered differences on a periodic sample.
inline std::vector<double> fd1(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = (y[(j + 1) % n] - y[(j + n - 1) % n]) / (2.0 * h);
    return d;
}

// fourth-order centered first derivative
inline std::vector<double> fd1_4(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j)
        d[j] = (-y[(j + 2) % n] + 8.0 * y[(j + 1) % n] - 8.0 * y[(j + n - 1) % n] + y[(j + n - 2) % n]) / (12.0 * h);
    return d;
}

inline std::vector<double> fd2(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = (y[(j + 1) % n] - 2.0 * y[j] + y[(j + n - 1) % n]) / (h * h);
    return d;
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

//! Small deterministic generator (splitmix64) so property inputs do not
//! depend on the library's own RNG plumbing.
struct Gen {
    std::uint64_t s;
    explicit Gen(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53; }
};

//! Sum of a few Gaussian bumps with random centers, widths and amplitudes.
struct Bumps {
    std::vector<double> amp, center, width;
    static Bumps draw(Gen& g, int n = 3, double extent = 30.0) {
        Bumps b;
        for (int i = 0; i < n; ++i) {
            b.amp.push_back(g.uniform(-0.2, 0.2));
            b.center.push_back(g.uniform(-extent, extent));
            b.width.push_back(g.uniform(2.0, 8.0));
        }
        return b;
    }
    double operator()(double x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double z = (x - center[i]) / width[i];
            s += amp[i] * std::exp(-z * z);
        }
        return s;
    }
    double d1(double x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double z = (x - center[i]) / width[i];
            s += amp[i] * std::exp(-z * z) * (-2.0 * z / width[i]);
        }
        return s;
    }
};

}  // namespace oracle
