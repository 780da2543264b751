#include <cmath>

#include "blurtrack/geometry.hpp"
#include "blurtrack/rng.hpp"
#include "doctest.h"

using namespace blurtrack;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("blur endpoints, axis-aligned") {
    BlurLabel label{{0.0, 0.0}, 0.0, 5.0, true};
    BlurSegment seg = blur_endpoints(label);
    CHECK(seg.front.x == doctest::Approx(5.0));
    CHECK(seg.front.y == doctest::Approx(0.0));
    CHECK(seg.back.x == doctest::Approx(-5.0));
    CHECK(seg.back.y == doctest::Approx(0.0));
}

TEST_CASE("blur endpoints, degenerate zero length") {
    BlurLabel label{{10.0, 10.0}, kPi / 2.0, 0.0, true};
    BlurSegment seg = blur_endpoints(label);
    CHECK(seg.front.x == doctest::Approx(10.0));
    CHECK(seg.front.y == doctest::Approx(10.0));
    CHECK(seg.back.x == doctest::Approx(10.0));
    CHECK(seg.back.y == doctest::Approx(10.0));
}

TEST_CASE("blur endpoints, negative angle with y down") {
    // theta = -30 degrees, half length 2: front offset (2 cos(-30), 2 sin(-30)).
    BlurLabel label{{100.0, 50.0}, deg_to_rad(-30.0), 2.0, true};
    BlurSegment seg = blur_endpoints(label);
    CHECK(seg.front.x == doctest::Approx(101.7320508).epsilon(1e-6));
    CHECK(seg.front.y == doctest::Approx(49.0).epsilon(1e-6));
    CHECK(seg.back.x == doctest::Approx(98.2679491).epsilon(1e-6));
    CHECK(seg.back.y == doctest::Approx(51.0).epsilon(1e-6));
}

TEST_CASE("endpoint midpoint and distance identities") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        BlurLabel label;
        label.center = {rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)};
        label.theta = rng.uniform(-kPi, kPi);
        label.half_length = rng.uniform(0.0, 40.0);
        BlurSegment seg = blur_endpoints(label);

        Vec2 mid = (seg.front + seg.back) * 0.5;
        CHECK(std::fabs(mid.x - label.center.x) <= 1e-9);
        CHECK(std::fabs(mid.y - label.center.y) <= 1e-9);
        double span = distance(seg.front, seg.back);
        CHECK(span == doctest::Approx(2.0 * label.half_length).epsilon(1e-9));
    }
}

TEST_CASE("theta + pi generates the same unordered endpoint set") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        BlurLabel label;
        label.center = {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
        label.theta = rng.uniform(-kPi, kPi);
        label.half_length = rng.uniform(0.0, 30.0);
        BlurLabel flipped = label;
        flipped.theta += kPi;

        BlurSegment a = blur_endpoints(label);
        BlurSegment b = blur_endpoints(flipped);
        CHECK(distance(a.front, b.back) <= 1e-9);
        CHECK(distance(a.back, b.front) <= 1e-9);
    }
}

TEST_CASE("front label conversions") {
    BlurLabel label{{0.0, 0.0}, 0.0, 5.0, true};
    Vec2 front = to_front_label(label);
    CHECK(front.x == doctest::Approx(5.0));
    CHECK(front.y == doctest::Approx(0.0));

    BlurLabel still{{0.0, 0.0}, 0.0, 0.0, true};
    Vec2 same = to_front_label(still);
    CHECK(same.x == doctest::Approx(0.0));
    CHECK(same.y == doctest::Approx(0.0));

    BlurLabel back = from_front_label({5.0, 0.0}, 0.0, 5.0);
    CHECK(back.center.x == doctest::Approx(0.0));
    CHECK(back.center.y == doctest::Approx(0.0));

    BlurLabel zero = from_front_label({0.0, 0.0}, 1.234, 0.0);
    CHECK(zero.center.x == doctest::Approx(0.0));
    CHECK(zero.center.y == doctest::Approx(0.0));
}

TEST_CASE("front/mid conversion round trips on random labels") {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        BlurLabel label;
        label.center = {rng.uniform(-200.0, 800.0), rng.uniform(-200.0, 800.0)};
        label.theta = rng.uniform(-kPi, kPi);
        label.half_length = rng.uniform(0.0, 36.0);

        Vec2 front = to_front_label(label);
        BlurLabel restored = from_front_label(front, label.theta, label.half_length);
        CHECK(std::fabs(restored.center.x - label.center.x) <= 1e-9);
        CHECK(std::fabs(restored.center.y - label.center.y) <= 1e-9);
    }
}

TEST_CASE("mod-180 angle distance") {
    CHECK(rad_to_deg(angle_diff_mod180(deg_to_rad(179.0), deg_to_rad(1.0))) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rad_to_deg(angle_diff_mod180(deg_to_rad(90.0), deg_to_rad(-90.0))) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(angle_diff_mod180(1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("fold into half circle") {
    CHECK(fold_half_circle(deg_to_rad(170.0)) == doctest::Approx(deg_to_rad(-10.0)));
    CHECK(fold_half_circle(deg_to_rad(-90.0)) == doctest::Approx(deg_to_rad(90.0)));
    CHECK(fold_half_circle(deg_to_rad(45.0)) == doctest::Approx(deg_to_rad(45.0)));
}

TEST_SUITE_END();
