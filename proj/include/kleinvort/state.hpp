// Vortex configurations on the square model of the Klein bottle and on its
// 2pi-by-pi covering torus.
//
// The bottle is the pi-by-pi square [-pi/2, pi/2)^2.  Its double cover is the
// torus x mod 2pi, y mod pi; the deck transformation is the orientation
// reversing involution mu(z) = conj(z) + pi, i.e. (x, y) -> (x + pi, -y),
// under which vortex strengths flip sign (twisted scalars).  Points with
// x in [pi/2, 3pi/2) form the second copy of the bottle and are folded back
// through mu.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "theta.hpp"

namespace kleinvort {

/// Minimal separation (chart units) below which configurations are rejected:
/// the logarithmic interaction makes closer evaluations meaningless in double
/// precision.  Applies to direct and mu-image separations alike.
inline constexpr double kDeltaColl = 1e-6;

struct Vortex {
    double x = 0.0;
    double y = 0.0;
    double gamma = 0.0;

    complex z() const { return {x, y}; }
};

/// The deck involution of the double cover; strengths flip alongside.
inline Vortex mu_image(const Vortex& v) { return {v.x + kPi, -v.y, -v.gamma}; }

/// Reduce v into [-period/2, period/2).
inline double wrap_centered(double v, double period) {
    return v - period * std::floor(v / period + 0.5);
}

/// Distance on the 2pi-by-pi covering torus.
inline double torus_distance(double dx, double dy) {
    return std::hypot(wrap_centered(dx, 2 * kPi), wrap_centered(dy, kPi));
}

/// Direct and mu-image separation of two chart points.
struct PairSeparation {
    double direct;
    double image;
    double min() const { return direct < image ? direct : image; }
};

inline PairSeparation pair_separation(const Vortex& a, const Vortex& b) {
    return {torus_distance(a.x - b.x, a.y - b.y),
            torus_distance(a.x - b.x - kPi, a.y + b.y)};
}

/// Canonical wrap into the fundamental domain [-pi/2, pi/2)^2: reduce x mod
/// 2pi, apply mu if the lift sits in the second copy, then reduce y mod pi.
inline Vortex fold_to_fundamental(Vortex v) {
    v.x -= 2 * kPi * std::floor((v.x + kPi / 2) / (2 * kPi));
    if (v.x >= kPi / 2) {
        v.x -= kPi;
        v.y = -v.y;
        v.gamma = -v.gamma;
    }
    v.y = wrap_centered(v.y, kPi);
    return v;
}

struct collision_error : std::runtime_error {
    std::size_t first;
    std::size_t second;
    bool image; // true when the mu-image separation is the violated one
    double distance;

    collision_error(std::size_t i, std::size_t j, bool img, double d)
        : std::runtime_error("vortices " + std::to_string(i) + " and " + std::to_string(j) +
                             (img ? " collide through a mu-image" : " collide") +
                             " (separation " + std::to_string(d) + ")"),
          first(i), second(j), image(img), distance(d) {}
};

namespace detail {

inline void check_gammas(const std::vector<Vortex>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i].gamma == 0.0)
            throw std::invalid_argument("vortex " + std::to_string(i) + ": gamma must be nonzero");
}

} // namespace detail

/// N vortices on the fundamental domain, collision-free including mu-images.
/// The constructor folds arbitrary chart coordinates and validates.
class KleinState {
  public:
    explicit KleinState(std::vector<Vortex> vortices) : vortices_(std::move(vortices)) {
        detail::check_gammas(vortices_);
        // collisions are classified in the caller's frame, before folding
        // (folding a vortex through mu swaps the direct and image separations)
        for (std::size_t i = 0; i < vortices_.size(); ++i)
            for (std::size_t j = i + 1; j < vortices_.size(); ++j) {
                const auto sep = pair_separation(vortices_[i], vortices_[j]);
                if (sep.direct < kDeltaColl) throw collision_error(i, j, false, sep.direct);
                if (sep.image < kDeltaColl) throw collision_error(i, j, true, sep.image);
            }
        for (auto& v : vortices_) v = fold_to_fundamental(v);
    }

    const std::vector<Vortex>& vortices() const { return vortices_; }
    std::size_t size() const { return vortices_.size(); }
    const Vortex& operator[](std::size_t i) const { return vortices_[i]; }

  private:
    std::vector<Vortex> vortices_;
};

/// Vortices on the 2pi-by-pi covering torus (plain, untwisted strengths).
class TorusState {
  public:
    explicit TorusState(std::vector<Vortex> vortices) : vortices_(std::move(vortices)) {
        for (auto& v : vortices_) {
            v.x = wrap_centered(v.x, 2 * kPi);
            v.y = wrap_centered(v.y, kPi);
        }
        for (std::size_t i = 0; i < vortices_.size(); ++i)
            for (std::size_t j = i + 1; j < vortices_.size(); ++j) {
                const double d = torus_distance(vortices_[i].x - vortices_[j].x,
                                                vortices_[i].y - vortices_[j].y);
                if (d < kDeltaColl) throw collision_error(i, j, false, d);
            }
    }

    const std::vector<Vortex>& vortices() const { return vortices_; }
    std::size_t size() const { return vortices_.size(); }
    const Vortex& operator[](std::size_t i) const { return vortices_[i]; }

  private:
    std::vector<Vortex> vortices_;
};

} // namespace kleinvort
