#pragma once

#include <cmath>
#include <random>

#include "gzk/grid.hpp"
#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"

namespace gzk::test {

inline RealField random_field(const Grid3& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealField f(g);
    for (double& v : f.v) v = gauss(rng);
    return f;
}

// random field whose spectrum is confined to |m| <= band per axis; the class
// on which unitary / reality statements hold exactly on the lattice
inline RealField random_band_limited(const Grid3& g, std::uint64_t seed, int band = 0) {
    if (band == 0) band = std::min(g.nx, std::min(g.ny1, g.ny2)) / 4;
    RealField f = random_field(g, seed);
    SpectralField F = forward_transform(f);
    const double fraction = 2.0 * band / std::min(g.nx, std::min(g.ny1, g.ny2));
    apply_mask(F, dealias_mask(g, fraction));
    return inverse_transform(F);
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

inline double l2_diff(const RealField& a, const RealField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double d = a.v[i] - b.v[i];
        acc += d * d;
    }
    return std::sqrt(acc * a.grid.cell());
}

inline double l2_diff(const SpectralField& a, const SpectralField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) acc += std::norm(a.c[i] - b.c[i]);
    return std::sqrt(acc / a.grid.volume());
}

inline double l2(const SpectralField& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) acc += std::norm(a.c[i]);
    return std::sqrt(acc / a.grid.volume());
}

}  // namespace gzk::test
