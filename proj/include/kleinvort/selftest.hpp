// Randomized invariant suite: theta identities, the energy lemmas, gradient
// consistency and conservation runs, each reported with its measured error.
// The checks take their sample counts as parameters so the CLI self-test and
// the full verification suite can run the same code at different sizes.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "hamiltonian.hpp"
#include "integrator.hpp"
#include "sampling.hpp"
#include "state.hpp"
#include "theta.hpp"

namespace kleinvort {

struct Check {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    // one representative measured/expected pair, for the lemma checks
    std::optional<double> measured;
    std::optional<double> expected;
};

inline Check make_check(std::string name, double err, double tol) {
    return {std::move(name), err, tol, err <= tol, std::nullopt, std::nullopt};
}

/// Relative error against the larger magnitude, with a 1e-14 absolute floor.
inline double rel_err(const complex& a, const complex& b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-14});
    return std::abs(a - b) / scale;
}

namespace detail {

inline complex random_z(Rng& rng) {
    return {uniform(rng, -kPi, kPi), uniform(rng, -1.0, 1.0)};
}

inline const Nome& pick_nome(Rng& rng) { return (rng() & 1) ? kNomeHalfPi : kNomeTwoPi; }

} // namespace detail

// ---------------------------------------------------------------------------
// Theta identities.

inline Check check_theta_parity(Rng& rng, int n, double tol = 1e-13) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        err = std::max(err, rel_err(theta1(-z, q), -theta1(z, q)));
        err = std::max(err, rel_err(theta2(-z, q), theta2(z, q)));
        err = std::max(err, rel_err(theta1_prime(-z, q), theta1_prime(z, q)));
        err = std::max(err, rel_err(theta2_prime(-z, q), -theta2_prime(z, q)));
    }
    return make_check("theta parity", err, tol);
}

inline Check check_theta_conjugation(Rng& rng, int n, double tol = 1e-15) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        err = std::max(err, rel_err(theta1(std::conj(z), q), std::conj(theta1(z, q))));
        err = std::max(err, rel_err(theta2(std::conj(z), q), std::conj(theta2(z, q))));
    }
    return make_check("theta conjugation", err, tol);
}

inline Check check_theta_pi_shift(Rng& rng, int n, double tol = 1e-13) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        err = std::max(err, rel_err(theta1(z + kPi, q), -theta1(z, q)));
        err = std::max(err, rel_err(theta1_prime(z + kPi, q), -theta1_prime(z, q)));
    }
    return make_check("theta pi-shift", err, tol);
}

inline Check check_theta_quasiperiodicity(Rng& rng, int n, double tol = 1e-12) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        const complex pi_tau{0.0, q.lattice_im()};
        const complex rhs = -std::exp(complex(0, -2) * z) / q.q * theta1(z, q);
        err = std::max(err, rel_err(theta1(z + pi_tau, q), rhs));
    }
    return make_check("theta1 quasi-periodicity", err, tol);
}

inline Check check_theta_half_pi_shift(Rng& rng, int n, double tol = 1e-14) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        err = std::max(err, rel_err(theta2(z, q), theta1(z + kPi / 2, q)));
    }
    return make_check("theta2 = theta1(z + pi/2)", err, tol);
}

/// lambda = 2 case of the modular identity
/// (1/sqrt(l)) e^{z^2/(pi l)} theta1(z/l, e^{-pi/l}) = -i theta1(iz, e^{-pi l}).
inline Check check_theta_lambda(Rng& rng, int n, double tol = 1e-11) {
    double err = 0.0;
    const complex i{0, 1};
    for (int k = 0; k < n; ++k) {
        const complex z = (k % 2) ? detail::random_z(rng) : complex(uniform(rng, -kPi, kPi), 0.0);
        const complex lhs =
            std::exp(z * z / (2 * kPi)) / std::sqrt(2.0) * theta1(z / 2.0, kNomeHalfPi);
        const complex rhs = -i * theta1(i * z, kNomeTwoPi);
        err = std::max(err, rel_err(lhs, rhs));
    }
    return make_check("theta1 lambda=2 transformation", err, tol);
}

inline Check check_logderiv_shift(Rng& rng, int n, double tol = 1e-12) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        const complex pi_tau{0.0, q.lattice_im()};
        err = std::max(err, rel_err(log_deriv_theta1(z + pi_tau, q),
                                    log_deriv_theta1(z, q) - complex(0, 2)));
        err = std::max(err, rel_err(log_deriv_theta1(z + kPi, q), log_deriv_theta1(z, q)));
    }
    return make_check("theta1'/theta1 lattice shifts", err, tol);
}

inline Check check_logderiv_ratio(Rng& rng, int n, double tol = 1e-12) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        complex z = detail::random_z(rng);
        const Nome& q = detail::pick_nome(rng);
        if (detail::theta1_zero_distance(z, q) < 1e-3) z += complex(0.3, 0.0);
        err = std::max(err, rel_err(log_deriv_theta1(z, q), theta1_prime(z, q) / theta1(z, q)));
    }
    return make_check("theta1'/theta1 vs series ratio", err, tol);
}

// ---------------------------------------------------------------------------
// Energy lemmas.

inline double gamma_pair_sum(const std::vector<Vortex>& vs) {
    double s = 0.0;
    for (std::size_t k = 0; k < vs.size(); ++k)
        for (std::size_t l = k + 1; l < vs.size(); ++l) s += vs[k].gamma * vs[l].gamma;
    return s;
}

inline Check check_torus_offset(Rng& rng, int n_states, double tol = 1e-11) {
    Check c = make_check("torus H1/H2 constant offset", 0.0, tol);
    for (int i = 0; i < n_states; ++i) {
        const auto s = random_torus_state(rng, 2 + i % 3);
        const double measured = ham_torus_h1(s) - ham_torus_h2(s);
        const double expected = -std::log(2.0) / (4 * kPi) * gamma_pair_sum(s.vortices());
        c.max_error = std::max(c.max_error, std::abs(measured - expected));
        if (!c.measured) {
            c.measured = measured;
            c.expected = expected;
        }
    }
    c.pass = c.max_error <= tol;
    return c;
}

inline Check check_h0_defect(Rng& rng, int n_states, double tol = 1e-11) {
    Check c = make_check("H0 mu-defect equals -1/2 sum G1 Gk", 0.0, tol);
    for (int i = 0; i < n_states; ++i) {
        const auto s = random_klein_state(rng, 2 + i % 3, 0.25, 0.12);
        auto vs = s.vortices();
        const double base = ham_h0_raw(vs);
        double cross = 0.0;
        for (std::size_t k = 1; k < vs.size(); ++k) cross += vs[0].gamma * vs[k].gamma;
        vs[0] = mu_image(vs[0]);
        const double measured = ham_h0_raw(vs) - base;
        const double expected = -0.5 * cross;
        c.max_error = std::max(c.max_error, std::abs(measured - expected));
        if (!c.measured) {
            c.measured = measured;
            c.expected = expected;
        }
    }
    c.pass = c.max_error <= tol;
    return c;
}

/// Invariance of ham_klein under mu, x + 2pi and y + pi applied per vortex.
inline Check check_klein_invariance(Rng& rng, int states_per_n, double tol = 1e-11) {
    double err = 0.0;
    for (std::size_t n = 1; n <= 4; ++n)
        for (int i = 0; i < states_per_n; ++i) {
            const auto s = random_klein_state(rng, n, 0.2);
            const double base = ham_klein(s);
            const double scale = std::max(1.0, std::abs(base));
            const std::size_t k = rng() % n;
            auto mu_vs = s.vortices();
            mu_vs[k] = mu_image(mu_vs[k]);
            auto h_vs = s.vortices();
            h_vs[k].x += 2 * kPi;
            auto v_vs = s.vortices();
            v_vs[k].y += kPi;
            err = std::max(err, std::abs(ham_klein_raw(mu_vs) - base) / scale);
            err = std::max(err, std::abs(ham_klein_raw(h_vs) - base) / scale);
            err = std::max(err, std::abs(ham_klein_raw(v_vs) - base) / scale);
        }
    return make_check("Klein energy invariance (mu, 2pi-h, pi-v)", err, tol);
}

inline Check check_gradient_fd(Rng& rng, int n_states, double tol = 1e-6) {
    double err = 0.0;
    const double h = 1e-6;
    for (int i = 0; i < n_states; ++i) {
        const auto s = random_klein_state(rng, 1 + i % 4, 0.25);
        const auto& vs = s.vortices();
        for (std::size_t k = 0; k < vs.size(); ++k) {
            auto perturbed = vs;
            auto eval = [&](double dx, double dy) {
                perturbed[k].x = vs[k].x + dx;
                perturbed[k].y = vs[k].y + dy;
                return ham_klein_raw(perturbed);
            };
            const double fx = (eval(h, 0) - eval(-h, 0)) / (2 * h);
            const double fy = (eval(0, h) - eval(0, -h)) / (2 * h);
            err = std::max(err, std::abs(dham_dzbar_raw(vs, k) - complex(fx, fy) / 2.0));
        }
    }
    return make_check("analytic dH/dzbar vs finite differences", err, tol);
}

inline Check check_green_symmetry(Rng& rng, int n, double tol = 1e-12) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto s = random_klein_state(rng, 2, 0.2);
        const complex z = s[0].z(), w = s[1].z();
        err = std::max(err, std::abs(green_klein(z, w) - green_klein(w, z)));
    }
    return make_check("Green function symmetry", err, tol);
}

inline Check check_robin(double tol = 1e-11) {
    double err = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= 400; ++i) {
        const double y = -kPi / 2 + kPi * i / 400.0;
        const double v = 2 * kPi * robin_klein(y) -
                         std::log(std::abs(theta4(complex(2 * y, 0.0), kNomeTwoPi)));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        err = std::max(err, std::abs(robin_klein(-y) - robin_klein(y)));
        err = std::max(err, std::abs(robin_klein(y + kPi / 2) - robin_klein(y)));
    }
    err = std::max(err, hi - lo);
    return make_check("Robin profile: theta4 offset constant, even, pi/2-periodic", err, tol);
}

// ---------------------------------------------------------------------------
// Dynamics and conservation.

inline Check check_single_vortex_ydot(double tol = 1e-13) {
    double err = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double y = -kPi / 2 + kPi * i / 200.0;
        const std::vector<Vortex> vs{{0.3, y, 1.4}};
        err = std::max(err, std::abs(velocity_of(vs, 0).imag()));
    }
    return make_check("single vortex ydot = 0", err, tol);
}

inline Check check_momentum_rate(Rng& rng, int n_states, double tol = 1e-10) {
    double err = 0.0;
    for (int i = 0; i < n_states; ++i) {
        const auto s = random_klein_state(rng, 2 + i % 3, 0.2);
        double rate = 0.0;
        for (const auto& vel : velocities(s)) rate += s[vel.index].gamma * vel.velocity.imag();
        err = std::max(err, std::abs(rate));
    }
    return make_check("dC/dt = 0 at every state", err, tol);
}

struct ConservationResult {
    Check energy;
    Check momentum;
};

inline ConservationResult check_conservation(Rng& rng, int n_states, double t_end,
                                             double e_tol = 1e-8, double c_tol = 1e-10) {
    double e_err = 0.0, c_err = 0.0;
    IntegratorOptions opts;
    opts.sample_interval = std::max(t_end / 200.0, 1e-3);
    for (int i = 0; i < n_states; ++i) {
        const auto s = random_klein_state(rng, 2, 0.6);
        const auto traj = integrate({s.vortices(), CoverMode::cylinder}, t_end, opts);
        const double h0 = traj.samples.front().energy;
        const double c0 = traj.samples.front().momentum_c;
        for (const auto& smp : traj.samples) {
            e_err = std::max(e_err, std::abs(smp.energy - h0) / (1.0 + std::abs(h0)));
            c_err = std::max(c_err, std::abs(smp.momentum_c - c0));
        }
    }
    return {make_check("energy drift (cylinder cover)", e_err, e_tol),
            make_check("momentum drift (cylinder cover)", c_err, c_tol)};
}

inline Check check_time_reversal(Rng& rng, double t_end, double tol = 1e-7) {
    const auto s = random_klein_state(rng, 2, 0.6);
    IntegratorOptions opts;
    opts.sample_interval = t_end;
    const auto fwd = integrate({s.vortices(), CoverMode::cylinder}, t_end, opts);
    auto back = fwd.samples.back().lift;
    for (auto& v : back) v.gamma = -v.gamma;
    const auto rev = integrate({back, CoverMode::cylinder}, t_end, opts);
    double err = 0.0;
    const auto& fin = rev.samples.back().lift;
    for (std::size_t k = 0; k < fin.size(); ++k)
        err = std::max(err, std::abs(fin[k].z() - s[k].z()));
    return make_check("time-reversal round trip", err, tol);
}

// ---------------------------------------------------------------------------

struct SelftestOptions {
    std::uint64_t seed = 1;
    int theta_samples = 1000;
    int lemma_states = 100;
    int gradient_states = 50;
    int conservation_states = 2;
    double conservation_t = 10.0;
};

struct SelftestReport {
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline SelftestReport run_selftest(const SelftestOptions& opt = {}) {
    Rng rng(opt.seed);
    SelftestReport rep;
    rep.seed = opt.seed;
    auto add = [&](Check c) { rep.checks.push_back(std::move(c)); };
    add(check_theta_parity(rng, opt.theta_samples));
    add(check_theta_conjugation(rng, opt.theta_samples));
    add(check_theta_pi_shift(rng, opt.theta_samples));
    add(check_theta_quasiperiodicity(rng, opt.theta_samples));
    add(check_theta_half_pi_shift(rng, opt.theta_samples));
    add(check_theta_lambda(rng, opt.theta_samples));
    add(check_logderiv_shift(rng, opt.theta_samples));
    add(check_logderiv_ratio(rng, opt.theta_samples));
    add(check_torus_offset(rng, opt.lemma_states));
    add(check_h0_defect(rng, opt.lemma_states));
    add(check_klein_invariance(rng, opt.lemma_states / 2));
    add(check_gradient_fd(rng, opt.gradient_states));
    add(check_green_symmetry(rng, opt.lemma_states));
    add(check_robin());
    add(check_single_vortex_ydot());
    add(check_momentum_rate(rng, opt.lemma_states));
    auto cons = check_conservation(rng, opt.conservation_states, opt.conservation_t);
    add(cons.energy);
    add(cons.momentum);
    add(check_time_reversal(rng, opt.conservation_t));
    return rep;
}

} // namespace kleinvort
