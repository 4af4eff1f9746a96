#include <catch2/catch_amalgamated.hpp>

#include "kleinvort/state.hpp"

using namespace kleinvort;

TEST_CASE("fold_to_fundamental") {
    // already inside the chart
    auto v = fold_to_fundamental({0.2, 0.3, 1.0});
    CHECK(v.x == Catch::Approx(0.2));
    CHECK(v.y == Catch::Approx(0.3));
    CHECK(v.gamma == 1.0);

    // second copy folds through mu with a strength flip
    v = fold_to_fundamental({0.2 + kPi, 0.3, 1.0});
    CHECK(v.x == Catch::Approx(0.2));
    CHECK(v.y == Catch::Approx(-0.3));
    CHECK(v.gamma == -1.0);

    // vertical period is a plain translation
    v = fold_to_fundamental({0.2, 0.3 + kPi, 1.0});
    CHECK(v.x == Catch::Approx(0.2));
    CHECK(v.y == Catch::Approx(0.3));
    CHECK(v.gamma == 1.0);

    // folding is idempotent on a 2pi horizontal shift
    v = fold_to_fundamental({0.2 + 2 * kPi, 0.3, 1.0});
    CHECK(v.x == Catch::Approx(0.2));
    CHECK(v.gamma == 1.0);

    // mu twice is the identity
    const Vortex w{-0.4, 0.25, -1.3};
    const auto mu2 = fold_to_fundamental(mu_image(mu_image(w)));
    CHECK(mu2.x == Catch::Approx(w.x));
    CHECK(mu2.y == Catch::Approx(w.y));
    CHECK(mu2.gamma == w.gamma);
}

TEST_CASE("twisted separations") {
    const Vortex a{0.2, 0.3, 1.0};
    // mu-image of a at distance 0: (0.2 - pi, -0.3) folds onto a's image
    const Vortex b{0.2 - kPi, -0.3, 1.0};
    const auto sep = pair_separation(a, b);
    CHECK(sep.image < 1e-12);
    CHECK(sep.direct > 0.1);

    // direct coincidence across the lattice
    const Vortex c{0.2 + 2 * kPi, 0.3 - kPi, 1.0};
    CHECK(pair_separation(a, c).direct < 1e-12);
}

TEST_CASE("KleinState validation") {
    CHECK_THROWS_AS(KleinState({{0.0, 0.0, 1.0}, {0.0, 0.0, -1.0}}), collision_error);
    CHECK_THROWS_AS(KleinState({{0.2, 0.3, 1.0}, {0.2 - kPi, -0.3, 1.0}}), collision_error);
    CHECK_THROWS_AS(KleinState({{0.1, 0.1, 0.0}}), std::invalid_argument); // gamma = 0

    // the image-collision diagnostic names the offending pair
    try {
        KleinState({{0.0, 0.4, 1.0}, {0.2, 0.3, 1.0}, {0.2 - kPi, -0.3, 1.0}});
        FAIL("expected collision_error");
    } catch (const collision_error& e) {
        CHECK(e.first == 1);
        CHECK(e.second == 2);
        CHECK(e.image);
    }

    const KleinState s({{0.9, 0.3, 1.0}, {-0.4, -0.2, 2.0}});
    CHECK(s.size() == 2);
    CHECK(s[0].x == Catch::Approx(0.9)); // inside the chart, unchanged
}

TEST_CASE("TorusState validation") {
    CHECK_THROWS_AS(TorusState({{0.5, 0.1, 1.0}, {0.5 + 2 * kPi, 0.1 + kPi, -1.0}}),
                    collision_error);
    // mu-images do NOT collide on the torus
    const TorusState s({{0.2, 0.3, 1.0}, {0.2 + kPi, -0.3, -1.0}});
    CHECK(s.size() == 2);
    // coordinates are wrapped onto the covering torus
    const TorusState w({{0.3 + 4 * kPi, 0.1 - 3 * kPi, 1.0}});
    CHECK(w[0].x == Catch::Approx(0.3));
    CHECK(w[0].y == Catch::Approx(0.1));
}
