#include "dsm/sampling.hpp"

#include <cmath>
#include <numbers>

namespace dsm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(Rng& rng) {
    // 53 random bits -> [0, 1); fixed formula, independent of <random>
    // distribution implementations.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ splitmix64(h));
}

HVector unit_direction(Rng& rng, std::size_t n) {
    HVector d(n);
    double len = 0.0;
    do {
        for (auto& x : d) x = standard_normal(rng);
        len = norm(d);
    } while (len < 1e-12);
    d *= 1.0 / len;
    return d;
}

HVector uniform_in_ball(Rng& rng, std::size_t n, double radius) {
    HVector d = unit_direction(rng, n);
    const double r = radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(n));
    d *= r;
    return d;
}

std::vector<HVector> seeded_points(std::uint64_t seed, std::size_t count, std::size_t n,
                                   double radius) {
    Rng rng(seed);
    std::vector<HVector> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) pts.push_back(uniform_in_ball(rng, n, radius));
    return pts;
}

}  // namespace dsm
