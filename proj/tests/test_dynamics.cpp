#include <catch2/catch_amalgamated.hpp>

#include "kleinvort/dynamics.hpp"
#include "kleinvort/sampling.hpp"
#include "kleinvort/selftest.hpp"

using namespace kleinvort;

namespace {

// The two-vortex equations of motion written out term by term, as an
// independent regression target for the generic assembly.  All theta terms
// carry the nome e^{-pi/2}; L1, L2 are the log-derivatives of theta1, theta2.
complex printed_two_vortex_zdot(const Vortex& v1, const Vortex& v2) {
    const complex z1 = v1.z(), z2 = v2.z();
    const complex z1c = std::conj(z1), z2c = std::conj(z2);
    const double g1 = v1.gamma, g2 = v2.gamma;
    const complex bracket =
        -g2 / (8 * kPi) * log_deriv_theta1((z1c - z2c) / 2.0, kNomeHalfPi) +
        g2 / (8 * kPi) * log_deriv_theta2((z1c - z2) / 2.0, kNomeHalfPi) +
        g2 / (4 * kPi * kPi) * (z2c - z2) +
        g1 / (8 * kPi) * log_deriv_theta1((z1c - z1) / 2.0 + kPi / 2, kNomeHalfPi) +
        g1 / (4 * kPi * kPi) * (z1c - z1);
    return complex(0, -2) * bracket;
}

} // namespace

TEST_CASE("velocity_single") {
    // stationary lines y = 0, +-pi/4, +-pi/2
    for (const double y : {0.0, kPi / 4, -kPi / 4, kPi / 2, -kPi / 2})
        CHECK(std::abs(velocity_single(y, 1.0)) < 1e-10);

    CHECK(velocity_single(0.3, 1.0).real() ==
          Catch::Approx(0.001109557193528850).epsilon(1e-12));
    CHECK(velocity_single(0.3, 1.0).imag() == 0.0);

    // odd, pi/2-periodic
    for (const double y : {0.1, 0.37, 0.6}) {
        CHECK(velocity_single(-y, 1.3).real() ==
              Catch::Approx(-velocity_single(y, 1.3).real()).margin(1e-14));
        CHECK(velocity_single(y + kPi / 2, 1.3).real() ==
              Catch::Approx(velocity_single(y, 1.3).real()).margin(1e-13));
    }
}

TEST_CASE("velocities") {
    // N = 1: generic assembly agrees with the closed form
    for (const double g : {1.0, -2.3, 0.7}) {
        const KleinState one({{0.4, 0.27, g}});
        CHECK(std::abs(velocities(one)[0].velocity - velocity_single(0.27, g)) < 1e-12);
    }

    // N = 2: matches the printed system term reconstruction
    const KleinState two({{0.3, 0.2, 1.4}, {-0.5, -0.15, -0.8}});
    const auto vel = velocities(two);
    CHECK(std::abs(vel[0].velocity - printed_two_vortex_zdot(two[0], two[1])) < 1e-12);
    CHECK(std::abs(vel[1].velocity - printed_two_vortex_zdot(two[1], two[0])) < 1e-12);

    // equivariance under horizontal translation
    const double s = 0.37;
    const KleinState moved({{0.3 + s, 0.2, 1.4}, {-0.5 + s, -0.15, -0.8}});
    const auto vel2 = velocities(moved);
    CHECK(std::abs(vel2[0].velocity - vel[0].velocity) < 1e-12);
    CHECK(std::abs(vel2[1].velocity - vel[1].velocity) < 1e-12);

    // applying mu to the whole state preserves Re zdot and negates Im zdot
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
        const auto st = random_klein_state(rng, 2 + i % 3, 0.25);
        std::vector<Vortex> mu_vs;
        for (const auto& v : st.vortices()) mu_vs.push_back(mu_image(v));
        for (std::size_t k = 0; k < st.size(); ++k) {
            const complex a = velocity_of(st.vortices(), k);
            const complex b = velocity_of(mu_vs, k);
            CHECK(std::abs(b - std::conj(a)) < 1e-10);
        }
    }
}

TEST_CASE("probe_field") {
    // single vortex at the origin: flow is horizontal on the vertical line
    // through the vortex
    const KleinState one({{0.0, 0.0, 1.0}});
    std::vector<complex> line;
    for (int i = 1; i <= 20; ++i) line.emplace_back(0.0, -0.5 + i * 0.05);
    const auto fld = probe_field(one, line);
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (fld.singular[i]) continue;
        CHECK(std::abs(fld.velocity[i].imag()) < 1e-10);
    }

    // mu push-forward: velocity at mu(w) is the conjugate of the one at w
    const KleinState st({{0.3, 0.2, 1.0}, {-0.5, -0.1, 1.5}});
    const complex w{0.7, 0.31};
    const complex vw = probe_field(st, std::vector<complex>{w}).velocity[0];
    const complex vm =
        probe_field(st, std::vector<complex>{std::conj(w) + kPi}).velocity[0];
    CHECK(std::abs(vm - std::conj(vw)) < 1e-10);

    // full-period row at y = 0 around the vortex: vertical components cancel
    const KleinState vx({{0.25, 0.4, 1.0}});
    std::vector<complex> row;
    const int n = 64;
    for (int i = 0; i < n; ++i) row.emplace_back(0.25 + 2 * kPi * i / n, 0.0);
    const auto rf = probe_field(vx, row);
    double sum_v = 0.0;
    for (const auto& v : rf.velocity) sum_v += v.imag();
    CHECK(std::abs(sum_v) < 1e-10);

    // points on top of the vortex or its image get flagged
    const auto bad = probe_field(vx, std::vector<complex>{{0.25, 0.4}, {0.25 - kPi, -0.4}});
    CHECK(bad.singular[0] == 1);
    CHECK(bad.singular[1] == 1);
    CHECK(std::isnan(bad.velocity[0].real()));
}

TEST_CASE("momentum") {
    CHECK(momentum(KleinState({{0.1, 0.25, 2.0}})).c == Catch::Approx(0.5));
    // mu-image leaves C unchanged: gamma and y flip together
    const Vortex v{0.3, 0.2, 1.4};
    const KleinState a({v});
    const KleinState b({mu_image(v)});
    CHECK(momentum(a).c == Catch::Approx(momentum(b).c));
    CHECK(momentum(KleinState({{0.0, 0.3, 1.0}, {1.0, 0.3, -1.0}})).c ==
          Catch::Approx(0.0).margin(1e-15));

    Rng rng(22);
    CHECK(check_momentum_rate(rng, 100, 1e-10).pass);
}

TEST_CASE("relative equilibria") {
    // three alternating-sign vortices equally spaced on the bottle loop y = 0
    // (chart representatives: the third one folds through mu) sit still
    const KleinState ring({{0.0, 0.0, 1.0}, {kPi / 3, 0.0, -1.0}, {-kPi / 3, 0.0, -1.0}});
    const auto rep = check_relative_equilibrium(ring, 1e-10);
    CHECK(rep.is_equilibrium);
    CHECK(std::abs(rep.speed) < 1e-10);

    // a single vortex on a stationary line: equilibrium with zero speed
    const auto solo = check_relative_equilibrium(KleinState({{0.2, kPi / 4, 1.0}}), 1e-9);
    CHECK(solo.is_equilibrium);
    CHECK(std::abs(solo.speed) < 1e-9);

    // a vortex and its sign-flipped vertical mirror translate rigidly
    const KleinState pair({{0.0, 0.3, 1.0}, {0.0, -0.3, -1.0}});
    const auto mirror = check_relative_equilibrium(pair, 1e-10);
    CHECK(mirror.is_equilibrium);
    CHECK(mirror.speed == Catch::Approx(0.2337477617111616).epsilon(1e-10));

    // generic two-vortex states are not relative equilibria
    const auto generic =
        check_relative_equilibrium(KleinState({{0.3, 0.2, 1.0}, {-0.5, -0.1, 1.5}}), 1e-7);
    CHECK_FALSE(generic.is_equilibrium);
}

TEST_CASE("single vortex has no vertical velocity anywhere") {
    CHECK(check_single_vortex_ydot(1e-13).pass);
}
