#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "test_helpers.hpp"
#include "tofcover/geom.hpp"

using namespace tofcover;
using tofcover::test::random_transform;
using tofcover::test::random_unit;

TEST_CASE("Vec3 rejects non-finite components") {
    CHECK_THROWS_AS(Vec3(std::numeric_limits<double>::quiet_NaN(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Vec3(0, std::numeric_limits<double>::infinity(), 0), std::invalid_argument);
    CHECK_NOTHROW(Vec3(1e300, -1e300, 0));
}

TEST_CASE("Vec3 algebra basics") {
    const Vec3 a(1, 2, 3), b(-2, 0.5, 4);
    CHECK(a.dot(b) == doctest::Approx(-2 + 1 + 12));
    const Vec3 c = a.cross(b);
    CHECK(c.dot(a) == doctest::Approx(0.0));
    CHECK(c.dot(b) == doctest::Approx(0.0));
    CHECK(Vec3(3, 4, 0).norm() == doctest::Approx(5.0));
    CHECK_THROWS_AS(Vec3(0, 0, 0).normalized(), std::invalid_argument);
}

TEST_CASE("axis_angle rotates as expected") {
    const Mat3 r = Mat3::axis_angle(Vec3(0, 0, 1), kPi / 2.0);
    const Vec3 v = r * Vec3(1, 0, 0);
    CHECK(v.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.y == doctest::Approx(1.0));
    CHECK(v.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rigid transform validates rotations") {
    Mat3 skewed = Mat3::identity();
    skewed(0, 1) = 0.1;
    CHECK_THROWS_AS(RigidTransform(skewed, Vec3{}), std::invalid_argument);

    // Reflection: orthonormal but det = -1.
    Mat3 mirror = Mat3::identity();
    mirror(0, 0) = -1.0;
    CHECK_THROWS_AS(RigidTransform(mirror, Vec3{}), std::invalid_argument);
}

TEST_CASE("rigid transform group laws") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const RigidTransform t = random_transform(rng);
        const RigidTransform round_trip = t.compose(t.inverse());
        const Vec3 p = tofcover::test::random_point(rng, -3, 3);
        CHECK(distance(round_trip.apply(p), p) < 1e-9);

        const RigidTransform u = random_transform(rng);
        const RigidTransform v = random_transform(rng);
        const Vec3 left = t.compose(u).compose(v).apply(p);
        const Vec3 right = t.compose(u.compose(v)).apply(p);
        CHECK(distance(left, right) < 1e-9);
    }
}

TEST_CASE("any_perpendicular is deterministic, unit, perpendicular") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const Vec3 d = random_unit(rng);
        const Vec3 p = any_perpendicular(d);
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(p.dot(d)) < 1e-9);
        CHECK(distance(p, any_perpendicular(d)) == 0.0);
    }
    // Parallel-to-z fallback.
    const Vec3 p = any_perpendicular(Vec3(0, 0, 1));
    CHECK(std::abs(p.dot(Vec3(0, 0, 1))) < 1e-12);
}

TEST_CASE("aabb containment and intersection") {
    Aabb box;
    box.lo = Vec3(0, 0, 0);
    box.hi = Vec3(1, 2, 3);
    CHECK(box.contains(Vec3(0.5, 1.0, 2.9)));
    CHECK(box.contains(Vec3(0, 0, 0)));  // inclusive
    CHECK_FALSE(box.contains(Vec3(1.001, 0, 0)));

    Aabb other;
    other.lo = Vec3(0.9, 1.9, 2.9);
    other.hi = Vec3(5, 5, 5);
    CHECK(box.intersects(other));
    other.lo = Vec3(1.1, 0, 0);
    other.hi = Vec3(2, 1, 1);
    CHECK_FALSE(box.intersects(other));

    CHECK(Aabb::empty_box().empty());
    Aabb grown = Aabb::empty_box();
    grown.expand(Vec3(1, 1, 1));
    CHECK_FALSE(grown.empty());
    CHECK(grown.contains(Vec3(1, 1, 1)));
}
