// Seeded random vortex configurations for the randomized suites.

#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace kleinvort {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Strength with random sign and magnitude in [0.5, 2].
inline double random_gamma(Rng& rng) {
    const double mag = uniform(rng, 0.5, 2.0);
    return (rng() & 1) ? mag : -mag;
}

inline TorusState random_torus_state(Rng& rng, std::size_t n, double min_sep = 0.2) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Vortex> vs;
        for (std::size_t i = 0; i < n; ++i)
            vs.push_back({uniform(rng, -kPi, kPi), uniform(rng, -kPi / 2, kPi / 2), random_gamma(rng)});
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (torus_distance(vs[i].x - vs[j].x, vs[i].y - vs[j].y) < min_sep) {
                    ok = false;
                    break;
                }
        if (ok) return TorusState(vs);
    }
    throw std::runtime_error("random_torus_state: rejection sampling failed");
}

/// Random fundamental-domain state with pairwise twisted separation at least
/// min_sep.  y_margin > 0 additionally keeps every |y| away from 0 and pi/2
/// by that margin (the pole lines of the non-invariant candidate energy).
inline KleinState random_klein_state(Rng& rng, std::size_t n, double min_sep = 0.2,
                                     double y_margin = 0.0) {
    for (int attempt = 0; attempt < 2000; ++attempt) {
        std::vector<Vortex> vs;
        for (std::size_t i = 0; i < n; ++i) {
            double y = uniform(rng, -kPi / 2 + y_margin, kPi / 2 - y_margin);
            if (y_margin > 0.0 && std::abs(y) < y_margin) y += (y >= 0 ? y_margin : -y_margin);
            vs.push_back({uniform(rng, -kPi / 2, kPi / 2), y, random_gamma(rng)});
        }
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (pair_separation(vs[i], vs[j]).min() < min_sep) {
                    ok = false;
                    break;
                }
        if (!ok) continue;
        return KleinState(vs);
    }
    throw std::runtime_error("random_klein_state: rejection sampling failed");
}

} // namespace kleinvort
