// Time integration of N-vortex motion on a lift of the Klein bottle.
//
// Stepping always happens on unreduced plane coordinates with the lift's
// fixed strengths: the raw velocity field is smooth across chart seams, so
// no bookkeeping is needed mid-flight and projection is output-only.  The
// cover mode only shapes the emitted samples:
//
//   cylinder-cover: lift coordinates stay unreduced; C = SUM Gk yk computed
//     from the lift is a global invariant of the flow.
//   torus-cover: sample lifts are wrapped onto the covering torus (x mod 2pi,
//     y mod pi); every y-wrap changes the wrapped C by -pi Gk and is logged.
//
// The stepper is the adaptive embedded Dormand-Prince 5(4) pair with step
// clipping onto the sample grid, so samples are genuine solution points.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dynamics.hpp"
#include "hamiltonian.hpp"
#include "state.hpp"

namespace kleinvort {

enum class CoverMode { torus, cylinder };

struct CoverState {
    std::vector<Vortex> vortices; // lifted positions, strengths fixed by the lift
    CoverMode mode = CoverMode::cylinder;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 1.0;
    double initial_step = 1e-3;
    double sample_interval = 0.1;
    double collision_stop = 1e-4; // twisted-distance termination radius

    void validate() const {
        if (!(rtol > 0) || !(atol > 0) || !(max_step > 0) || !(initial_step > 0) ||
            !(sample_interval > 0) || !(collision_stop > 0))
            throw std::invalid_argument("IntegratorOptions: all parameters must be positive");
    }
};

struct TrajectorySample {
    double t;
    std::vector<Vortex> lift;      // mode-shaped lift coordinates
    std::vector<Vortex> projected; // fundamental-domain representative
    double energy;
    double momentum_c;
    double step_size;
};

struct CollisionEvent {
    double t;
    std::size_t first;
    std::size_t second;
    bool image; // mu-image collision family (vs direct copy)
    double distance;
};

struct CJumpEvent {
    double t;
    std::size_t vortex;
    double delta_c; // change of the wrapped C at the crossing
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::optional<CollisionEvent> collision;
    std::vector<CJumpEvent> c_jumps;
};

struct step_underflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fold a lift onto the fundamental domain (validating the projection).
inline KleinState project_to_klein(const CoverState& s) { return KleinState(s.vortices); }

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr std::array<double, 7> kDpC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr std::array<std::array<double, 6>, 6> kDpA = {{
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
// y5 - y4 error weights (b5 - b4, including the k7 slot).
inline constexpr std::array<double, 7> kDpE = {71.0 / 57600,      0.0,          -71.0 / 16695,
                                               71.0 / 1920,       -17253.0 / 339200,
                                               22.0 / 525,        -1.0 / 40};

struct VortexOde {
    std::vector<Vortex> work;

    explicit VortexOde(const std::vector<Vortex>& init) : work(init) {}

    void rhs(const std::vector<double>& y, std::vector<double>& dydt) {
        for (std::size_t k = 0; k < work.size(); ++k) {
            work[k].x = y[2 * k];
            work[k].y = y[2 * k + 1];
        }
        for (std::size_t k = 0; k < work.size(); ++k) {
            const complex v = velocity_of(work, k);
            dydt[2 * k] = v.real();
            dydt[2 * k + 1] = v.imag();
        }
    }
};

inline long wrap_count(double y) { return std::lround(std::floor((y + kPi / 2) / kPi)); }

} // namespace detail

/// Advance the lifted system to t_end, sampling every opts.sample_interval.
/// Terminates early (with a recorded event) if any pairwise twisted distance
/// drops below opts.collision_stop.
inline Trajectory integrate(const CoverState& initial, double t_end, const IntegratorOptions& opts) {
    opts.validate();
    if (!(t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
    project_to_klein(initial); // validates collision-freeness of the start

    const std::size_t nv = initial.vortices.size();
    const std::size_t dim = 2 * nv;
    detail::VortexOde ode(initial.vortices);

    std::vector<double> y(dim), ytmp(dim), ynew(dim), yerr(dim);
    std::array<std::vector<double>, 7> k;
    for (auto& s : k) s.assign(dim, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        y[2 * j] = initial.vortices[j].x;
        y[2 * j + 1] = initial.vortices[j].y;
    }

    Trajectory traj;
    std::vector<long> wraps(nv, 0), prev_wraps(nv, 0);

    auto lift_view = [&](const std::vector<double>& state) {
        std::vector<Vortex> lift = initial.vortices;
        for (std::size_t j = 0; j < nv; ++j) {
            lift[j].x = state[2 * j];
            lift[j].y = state[2 * j + 1];
        }
        if (initial.mode == CoverMode::torus) {
            for (std::size_t j = 0; j < nv; ++j) {
                lift[j].x -= 2 * kPi * std::floor((lift[j].x + kPi / 2) / (2 * kPi));
                wraps[j] = detail::wrap_count(lift[j].y);
                lift[j].y -= kPi * wraps[j];
            }
        }
        return lift;
    };

    auto emit_sample = [&](double t, double h_used) {
        std::vector<Vortex> lift = lift_view(y);
        if (initial.mode == CoverMode::torus && !traj.samples.empty()) {
            for (std::size_t j = 0; j < nv; ++j)
                if (wraps[j] != prev_wraps[j])
                    traj.c_jumps.push_back({t, j, -kPi * initial.vortices[j].gamma *
                                                      double(wraps[j] - prev_wraps[j])});
        }
        prev_wraps = wraps;
        std::vector<Vortex> proj(lift.size());
        for (std::size_t j = 0; j < nv; ++j) proj[j] = fold_to_fundamental(lift[j]);
        double c = 0.0;
        for (const auto& v : lift) c += v.gamma * v.y;
        traj.samples.push_back({t, lift, proj, ham_klein_raw(lift), c, h_used});
    };

    auto min_separation = [&](const std::vector<double>& state) {
        CollisionEvent ev{0, 0, 0, false, std::numeric_limits<double>::infinity()};
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t b = a + 1; b < nv; ++b) {
                const Vortex va{state[2 * a], state[2 * a + 1], 0.0};
                const Vortex vb{state[2 * b], state[2 * b + 1], 0.0};
                const auto sep = pair_separation(va, vb);
                if (sep.min() < ev.distance)
                    ev = {0.0, a, b, sep.image < sep.direct, sep.min()};
            }
        return ev;
    };

    double t = 0.0;
    double h = std::min({opts.initial_step, opts.max_step, opts.sample_interval});
    emit_sample(0.0, 0.0);

    ode.rhs(y, k[0]); // FSAL seed
    long next_sample = 1;
    const double tiny = 1e-12;

    while (t < t_end - tiny * (1.0 + t_end)) {
        const double t_next = std::min(next_sample * opts.sample_interval, t_end);
        h = std::min({h, opts.max_step, t_next - t});
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw step_underflow_error("integrate: step size underflow at t = " + std::to_string(t));

        // six stages plus the FSAL evaluation at the new point
        for (int stage = 1; stage < 6; ++stage) {
            for (std::size_t i = 0; i < dim; ++i) {
                double acc = 0.0;
                for (int j = 0; j < stage; ++j) acc += detail::kDpA[stage - 1][j] * k[j][i];
                ytmp[i] = y[i] + h * acc;
            }
            ode.rhs(ytmp, k[stage]);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 6; ++j) acc += detail::kDpA[5][j] * k[j][i];
            ynew[i] = y[i] + h * acc;
        }
        ode.rhs(ynew, k[6]);
        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double e = 0.0;
            for (int j = 0; j < 7; ++j) e += detail::kDpE[j] * k[j][i];
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (h * e / sc) * (h * e / sc);
        }
        err = std::sqrt(err / double(dim));

        if (err <= 1.0) { // accept
            t += h;
            y.swap(ynew);
            k[0].swap(k[6]); // FSAL
            auto sep = min_separation(y);
            if (sep.distance < opts.collision_stop) {
                sep.t = t;
                emit_sample(t, h);
                traj.collision = sep;
                return traj;
            }
            if (t >= t_next - tiny * (1.0 + t_next)) {
                emit_sample(t, h);
                if (t_next >= t_end - tiny * (1.0 + t_end)) break;
                ++next_sample;
            }
        }
        const double factor = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
    return traj;
}

/// Integral of xdot_k over the sampled range (trapezoid rule on velocities
/// re-evaluated at the sample lifts).
inline double translational_component(std::span<const TrajectorySample> samples, std::size_t k) {
    if (samples.size() < 2)
        throw std::invalid_argument("translational_component: need at least two samples");
    double acc = 0.0;
    double prev_t = samples[0].t;
    double prev_v = velocity_of(samples[0].lift, k).real();
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double v = velocity_of(samples[i].lift, k).real();
        acc += 0.5 * (v + prev_v) * (samples[i].t - prev_t);
        prev_t = samples[i].t;
        prev_v = v;
    }
    return acc;
}

} // namespace kleinvort
