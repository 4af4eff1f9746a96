// Energy functions of point-vortex systems on the 2pi-by-pi torus and on the
// Klein bottle, their Wirtinger derivatives, and the truncated lattice-sum
// oracle used to cross-check the torus form.
//
// The well-defined Klein-bottle Hamiltonian is, with p = e^{-pi/2},
//
//   H = - 1/(2pi) SUM_{a<b} Ga Gb log|theta1((za - zb)/2, p)|
//       + 1/(2pi) SUM_{a<b} Ga Gb log|theta2((za - conj(zb))/2, p)|
//       - 1/pi^2  SUM_{a<b} Ga Gb ya yb
//       + 1/(4pi) SUM_a    Ga^2  (log|theta1(i ya - pi/2, p)| - 2 ya^2/pi)
//
// It is invariant under mu (x -> x+pi, y -> -y, gamma -> -gamma), 2pi-periodic
// horizontally and pi-periodic vertically, so the raw evaluators below accept
// arbitrary chart coordinates; the KleinState overloads rely on the validated
// fundamental-domain representative.
//
// Velocities derive from H through the strength-weighted symplectic form
// (see dynamics.hpp): zdot_k = -2i/Gk dH/dconj(zk).

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

#include "state.hpp"
#include "theta.hpp"

namespace kleinvort {

// ---------------------------------------------------------------------------
// Raw evaluators on arbitrary chart coordinates (no collision checks; the
// interaction terms return -inf at exact collisions).

/// Pair interaction of the Klein Hamiltonian per unit Ga*Gb.
inline double klein_pair_energy(const complex& za, const complex& zb) {
    return -log_abs_theta1((za - zb) / 2.0, kNomeHalfPi) / (2 * kPi) +
           log_abs_theta2((za - std::conj(zb)) / 2.0, kNomeHalfPi) / (2 * kPi) -
           za.imag() * zb.imag() / (kPi * kPi);
}

/// Self (Robin) term of the Klein Hamiltonian per unit Ga^2.
inline double klein_self_energy(double y) {
    return (log_abs_theta1(complex(-kPi / 2, y), kNomeHalfPi) - 2.0 * y * y / kPi) / (4 * kPi);
}

inline double ham_klein_raw(std::span<const Vortex> vs) {
    double h = 0.0;
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            h += vs[a].gamma * vs[b].gamma * klein_pair_energy(vs[a].z(), vs[b].z());
        h += vs[a].gamma * vs[a].gamma * klein_self_energy(vs[a].y);
    }
    return h;
}

/// d/dconj(zk) of the pair term, per unit Gk*Gl, with (zl, yl) the partner.
inline complex klein_pair_dzbar(const complex& zk, const complex& zl) {
    const complex zkc = std::conj(zk);
    return -log_deriv_theta1((zkc - std::conj(zl)) / 2.0, kNomeHalfPi) / (8 * kPi) +
           log_deriv_theta2((zkc - zl) / 2.0, kNomeHalfPi) / (8 * kPi) -
           complex(0.0, zl.imag() / (2 * kPi * kPi));
}

/// d/dconj(zk) of the self term, per unit Gk^2.
inline complex klein_self_dzbar(double y) {
    return -log_deriv_theta1(complex(-kPi / 2, y), kNomeHalfPi) / (8 * kPi) -
           complex(0.0, y / (2 * kPi * kPi));
}

/// dH/dconj(zk) divided by Gk: the quantity -2i times which is the velocity.
inline complex strength_normalized_dzbar(std::span<const Vortex> vs, std::size_t k) {
    complex acc = vs[k].gamma * klein_self_dzbar(vs[k].y);
    for (std::size_t l = 0; l < vs.size(); ++l) {
        if (l == k) continue;
        acc += vs[l].gamma * klein_pair_dzbar(vs[k].z(), vs[l].z());
    }
    return acc;
}

inline complex dham_dzbar_raw(std::span<const Vortex> vs, std::size_t k) {
    return vs[k].gamma * strength_normalized_dzbar(vs, k);
}

// ---------------------------------------------------------------------------
// Public operations.

/// Horizontally-periodized torus Hamiltonian,
/// -1/(2pi) SUM_{k<l} Gk Gl (log|theta1((zk-zl)/2, e^{-pi/2})| - Im(zk-zl)^2/(2pi)).
inline double ham_torus_h1(const TorusState& s) {
    double h = 0.0;
    const auto& vs = s.vortices();
    for (std::size_t k = 0; k < vs.size(); ++k)
        for (std::size_t l = k + 1; l < vs.size(); ++l) {
            const complex u = vs[k].z() - vs[l].z();
            h -= vs[k].gamma * vs[l].gamma / (2 * kPi) *
                 (log_abs_theta1(u / 2.0, kNomeHalfPi) - u.imag() * u.imag() / (2 * kPi));
        }
    return h;
}

/// Vertically-periodized torus Hamiltonian,
/// -1/(2pi) SUM_{k<l} Gk Gl (log|theta1(i(zk-zl), e^{-2pi})| - Re(zk-zl)^2/(2pi)).
/// Differs from ham_torus_h1 by the constant log(2)/(4pi) SUM Gk Gl.
inline double ham_torus_h2(const TorusState& s) {
    double h = 0.0;
    const auto& vs = s.vortices();
    for (std::size_t k = 0; k < vs.size(); ++k)
        for (std::size_t l = k + 1; l < vs.size(); ++l) {
            const complex u = vs[k].z() - vs[l].z();
            h -= vs[k].gamma * vs[l].gamma / (2 * kPi) *
                 (log_abs_theta1(complex(0, 1) * u, kNomeTwoPi) - u.real() * u.real() / (2 * kPi));
        }
    return h;
}

/// The candidate Klein Hamiltonian obtained by periodizing the vertical torus
/// form.  NOT invariant under mu: applying mu to vortex 1 shifts the value by
/// -1/2 SUM_{k != 1} G1 Gk.  Kept as the negative control for that defect.
/// The self term log|theta1(2y, e^{-2pi})| has poles at y in (pi/2) Z.
inline double ham_h0_raw(std::span<const Vortex> vs) {
    double h = 0.0;
    const complex i{0.0, 1.0};
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (detail::theta1_zero_distance(complex(2.0 * vs[k].y, 0.0), kNomeTwoPi) < kDeltaZero)
            throw pole_error("ham_h0: theta1(2y) vanishes at vortex " + std::to_string(k));
        h += vs[k].gamma * vs[k].gamma / (4 * kPi) *
             log_abs_theta1(complex(2.0 * vs[k].y, 0.0), kNomeTwoPi);
        for (std::size_t l = 0; l < vs.size(); ++l) {
            if (l == k) continue;
            if (l > k)
                h -= vs[k].gamma * vs[l].gamma / (2 * kPi) *
                     log_abs_theta1(i * (vs[k].z() - vs[l].z()), kNomeTwoPi);
            h += vs[k].gamma * vs[l].gamma / (4 * kPi) *
                 log_abs_theta1(i * (vs[k].z() - std::conj(vs[l].z()) - kPi), kNomeTwoPi);
        }
    }
    return h;
}

inline double ham_h0(const KleinState& s) { return ham_h0_raw(s.vortices()); }

/// The well-defined Klein-bottle Hamiltonian (see file header).
inline double ham_klein(const KleinState& s) { return ham_klein_raw(s.vortices()); }

/// dH/dconj(zk) of ham_klein, assembled analytically from log-derivatives.
inline complex dham_dzbar(const KleinState& s, std::size_t k) {
    if (k >= s.size()) throw std::out_of_range("dham_dzbar: vortex index out of range");
    return dham_dzbar_raw(s.vortices(), k);
}

/// Green's function of the bottle:
/// G(z,w) = 1/(2pi) log|theta1((z-w)/2, p)| - 1/(2pi) log|theta2((z-conj w)/2, p)|
///          + Im(z) Im(w)/pi^2.  Symmetric; singular at w = z and w = mu(z).
inline double green_klein(const complex& z, const complex& w) {
    const Vortex a{z.real(), z.imag(), 1.0}, b{w.real(), w.imag(), 1.0};
    const auto sep = pair_separation(a, b);
    if (sep.min() < kDeltaColl)
        throw collision_error(0, 1, sep.image < sep.direct, sep.min());
    return log_abs_theta1((z - w) / 2.0, kNomeHalfPi) / (2 * kPi) -
           log_abs_theta2((z - std::conj(w)) / 2.0, kNomeHalfPi) / (2 * kPi) +
           z.imag() * w.imag() / (kPi * kPi);
}

/// Robin-function profile of the bottle,
/// R(y) = 1/(2pi) (log|theta1(iy - pi/2, e^{-pi/2})| - 2y^2/pi).
/// Even, pi/2-periodic; equals (log|theta4(2y, e^{-2pi})| + log sqrt 2)/(2pi).
inline double robin_klein(double y) {
    return (log_abs_theta1(complex(-kPi / 2, y), kNomeHalfPi) - 2.0 * y * y / kPi) / (2 * kPi);
}

/// dR/dy.  theta1'/theta1 is purely imaginary on the line iy - pi/2, so the
/// derivative of the log-modulus is Re(i * theta1'/theta1).
inline double robin_klein_deriv(double y) {
    const complex l = log_deriv_theta1(complex(-kPi / 2, y), kNomeHalfPi);
    return ((complex(0, 1) * l).real() - 4.0 * y / kPi) / (2 * kPi);
}

// ---------------------------------------------------------------------------
// Truncated double-sum oracle.

/// Rectangular partial sum of the divergent lattice form
///   -1/(2pi) SUM_{k<l} SUM_{m,n} Gk Gl log|zk - zl + i pi n + 2 pi m|
/// over |m| <= M, |n| <= N, regularized per shell by log(4 pi^2 m^2)
/// horizontally and log cosh^2(pi n / 2) vertically, with the periodizing
/// Im(u)^2/(2pi) subtracted per pair so that differences of the value between
/// two states approach differences of ham_torus_h1.  Two caveats are forced
/// by the construction: the residual shell constants scale with Gk Gl, so
/// differences only cancel them between states sharing their strengths; and
/// row sums must dominate, since the truncation error of a difference scales
/// like Re(u^2) (2N+1)/(4 pi^2 M), so convergence requires M >> N (the
/// horizontal-first iterated limit).
inline double ham_oracle_truncated(const TorusState& s, int m_max, int n_max) {
    if (m_max < 1 || n_max < 0) throw std::invalid_argument("ham_oracle_truncated: bad truncation");
    const auto& vs = s.vortices();
    double total = 0.0;
    // u-independent vertical shell constants (cancel in differences)
    double shell_const = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double x = kPi * n / 2;
        shell_const += 2.0 * (x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0)); // log cosh^2
    }
    for (std::size_t k = 0; k < vs.size(); ++k)
        for (std::size_t l = k + 1; l < vs.size(); ++l) {
            // reindexing m and n wraps u into the fundamental lattice cell
            complex u{wrap_centered(vs[k].x - vs[l].x, 2 * kPi),
                      wrap_centered(vs[k].y - vs[l].y, kPi)};
            double sum = 0.0;
            for (int n = -n_max; n <= n_max; ++n) {
                const complex v = u + complex(0.0, kPi * n);
                const complex v2 = v * v;
                double row = std::log(std::abs(v));
                for (int m = 1; m <= m_max; ++m)
                    row += std::log(std::abs(v2 / (4.0 * kPi * kPi * m * m) - 1.0));
                sum += row;
            }
            sum -= shell_const;
            sum -= u.imag() * u.imag() / (2 * kPi);
            total -= vs[k].gamma * vs[l].gamma / (2 * kPi) * sum;
        }
    return total;
}

} // namespace kleinvort
