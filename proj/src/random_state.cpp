#include "abcd/random_state.hpp"

#include <cmath>
#include <numbers>

namespace abcd::sim {

Field random_smooth_field(const Grid& g, std::mt19937_64& rng, const SmoothStateSpec& spec) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> width(spec.min_width, spec.max_width);
    std::uniform_real_distribution<double> wave(0.0, spec.max_wavenumber);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    Field f = Field::zeros(g);
    const auto& x = g.nodes();
    for (int b = 0; b < spec.bumps; ++b) {
        const double amp = spec.amplitude * unit(rng);
        const double c = spec.center_extent * unit(rng);
        const double w = width(rng);
        const double k = wave(rng);
        const double ph = phase(rng);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double y = (x[j] - c) / w;
            f[j] += amp * std::exp(-y * y) * std::cos(k * x[j] + ph);
        }
    }
    return f;
}

FieldPair random_smooth_pair(const Grid& g, std::mt19937_64& rng, const SmoothStateSpec& spec) {
    Field u = random_smooth_field(g, rng, spec);
    Field e = random_smooth_field(g, rng, spec);
    return {std::move(u), std::move(e)};
}

}  // namespace abcd::sim
