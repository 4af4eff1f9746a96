// Vortex velocities on the Klein bottle.
//
// The symplectic form carries the strengths as weights, so the equations of
// motion read Gk zdot_k = -2i dH/dconj(zk); the single-vortex closed form
//
//   xdot = G/(4pi) (i theta1'/theta1(iy - pi/2) - 4y/pi),   ydot = 0
//
// is the Gk = G specialization.  The momentum of the horizontal S^1 action is
// C = SUM Gk yk, conserved instantaneously at every state.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hamiltonian.hpp"
#include "state.hpp"

namespace kleinvort {

struct VelocitySample {
    std::size_t index;
    complex velocity; // chart units per unit time
};

struct Momentum {
    double c;
};

/// Velocity of vortex k within an arbitrary (possibly lifted) configuration.
inline complex velocity_of(std::span<const Vortex> vs, std::size_t k) {
    return complex(0.0, -2.0) * strength_normalized_dzbar(vs, k);
}

/// Closed-form speed of a solitary vortex; the imaginary part is structurally
/// zero (theta1'/theta1 is purely imaginary on the line iy - pi/2).
inline complex velocity_single(double y, double gamma) {
    const complex l = log_deriv_theta1(complex(-kPi / 2, y), kNomeHalfPi);
    return {gamma / (4 * kPi) * ((complex(0, 1) * l).real() - 4.0 * y / kPi), 0.0};
}

inline std::vector<VelocitySample> velocities(const KleinState& s) {
    std::vector<VelocitySample> out;
    out.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        out.push_back({k, velocity_of(s.vortices(), k)});
    return out;
}

/// Induced fluid velocity at passive probe points: the pair kernel summed
/// over the vortices with the probe's own (zero-strength) terms absent.
/// Points within kDeltaColl of a vortex or a mu-image are flagged and get a
/// quiet-NaN sentinel instead of a value.
struct ProbeField {
    std::vector<complex> velocity;
    std::vector<std::uint8_t> singular;
};

inline complex probe_velocity(std::span<const Vortex> vs, const complex& w) {
    complex acc = 0.0;
    for (const auto& v : vs) acc += v.gamma * klein_pair_dzbar(w, v.z());
    return complex(0.0, -2.0) * acc;
}

inline ProbeField probe_field(const KleinState& s, std::span<const complex> points) {
    ProbeField out;
    out.velocity.reserve(points.size());
    out.singular.reserve(points.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& w : points) {
        const Vortex probe{w.real(), w.imag(), 0.0};
        bool bad = false;
        for (const auto& v : s.vortices())
            if (pair_separation(probe, v).min() < kDeltaColl) {
                bad = true;
                break;
            }
        out.singular.push_back(bad ? 1 : 0);
        out.velocity.push_back(bad ? complex(nan, nan) : probe_velocity(s.vortices(), w));
    }
    return out;
}

inline Momentum momentum(const KleinState& s) {
    double c = 0.0;
    for (const auto& v : s.vortices()) c += v.gamma * v.y;
    return {c};
}

/// Rigid horizontal motion test: all vertical components vanish and all
/// horizontal components agree, within tol.
struct EquilibriumReport {
    bool is_equilibrium;
    double speed;            // common horizontal speed (mean of Re zdot)
    double max_vertical;     // max |Im zdot|
    double max_speed_spread; // max |Re zdot - speed|
};

inline EquilibriumReport check_relative_equilibrium(const KleinState& s, double tol) {
    const auto vel = velocities(s);
    double mean = 0.0;
    for (const auto& v : vel) mean += v.velocity.real();
    mean /= double(vel.size());
    double max_v = 0.0, max_spread = 0.0;
    for (const auto& v : vel) {
        max_v = std::max(max_v, std::abs(v.velocity.imag()));
        max_spread = std::max(max_spread, std::abs(v.velocity.real() - mean));
    }
    return {max_v <= tol && max_spread <= tol, mean, max_v, max_spread};
}

} // namespace kleinvort
