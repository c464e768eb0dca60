#pragma once

#include "dsm/hvector.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dsm {

using Rng = std::mt19937_64;

/// Derives an independent named stream from a master seed, so that every
/// random draw in a run is reproducible from a single --seed value.
std::uint64_t sub_seed(std::uint64_t seed, std::string_view name);

/// Uniformly distributed unit vector in R^n.
HVector unit_direction(Rng& rng, std::size_t n);

/// Uniform sample from the closed ball of the given radius.
HVector uniform_in_ball(Rng& rng, std::size_t n, double radius);

/// n seeded points uniform in the ball; the usual "20 seeded points" helper.
std::vector<HVector> seeded_points(std::uint64_t seed, std::size_t count, std::size_t n,
                                   double radius);

}  // namespace dsm
