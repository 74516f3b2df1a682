#pragma once

// Seeded generators of smooth, localized states for property checks.

#include <cstdint>
#include <random>

#include "abcd/simulator.hpp"

namespace abcd::sim {

struct SmoothStateSpec {
    int bumps = 3;
    double amplitude = 0.1;
    double center_extent = 30.0;  // centers drawn in [-extent, extent]
    double min_width = 2.0;
    double max_width = 8.0;
    double max_wavenumber = 1.0;  // carrier cos(k x + phase)
};

//! Sum of modulated Gaussians; decays far below machine precision at |x| = L
//! for the default spec on L >= 100.
[[nodiscard]] Field random_smooth_field(const Grid& g, std::mt19937_64& rng, const SmoothStateSpec& spec = {});

[[nodiscard]] FieldPair random_smooth_pair(const Grid& g, std::mt19937_64& rng, const SmoothStateSpec& spec = {});

}  // namespace abcd::sim
