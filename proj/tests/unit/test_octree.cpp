#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "tofcover/discs.hpp"
#include "tofcover/octree.hpp"

using namespace tofcover;
using tofcover::test::DenseVoxels;

namespace {

SolidPtr standard_cone() {
    return make_cone(Vec3(0, 0, 0), Vec3(0, 0, 1), deg_to_rad(12.5), 1.5);
}

double analytic_cone_volume(double half_angle, double height) {
    const double r = height * std::tan(half_angle);
    return kPi / 3.0 * r * r * height;
}

/// Seeded random solid rejected until it fits inside the given box.
SolidPtr random_solid(std::mt19937_64& rng, const Aabb& box) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vec3 size = box.hi - box.lo;
    const double scale = std::min({size.x, size.y, size.z});
    while (true) {
        const Vec3 center = box.lo + Vec3(size.x * (0.3 + 0.4 * u01(rng)),
                                          size.y * (0.3 + 0.4 * u01(rng)),
                                          size.z * (0.3 + 0.4 * u01(rng)));
        SolidPtr solid;
        switch (rng() % 3) {
            case 0:
                solid = make_sphere(center, scale * (0.05 + 0.2 * u01(rng)));
                break;
            case 1:
                solid = make_cone(center, tofcover::test::random_unit(rng),
                                  0.15 + 0.6 * u01(rng), scale * (0.1 + 0.15 * u01(rng)));
                break;
            default: {
                const Vec3 dir = tofcover::test::random_unit(rng);
                const double len = scale * (0.1 + 0.2 * u01(rng));
                auto curve = std::make_shared<PiecewiseBezierCurve>(PiecewiseBezierCurve::build(
                    {center - dir * (len / 2), center + dir * (len / 2)}, 0.25, 32));
                const double outer = scale * (0.04 + 0.08 * u01(rng));
                solid = make_tube_shell(curve, outer * 0.3 * u01(rng), outer);
                break;
            }
        }
        if (box.contains(solid->bounding_box())) return solid;
    }
}

}  // namespace

TEST_CASE("cone volumetry approaches the analytic value") {
    // l_voxel = 0.02 m: domain edge 2.56 at depth 7.
    const VoxelDomain domain(Vec3(-1.28, -1.28, -0.2), 2.56, 7);
    CHECK(domain.voxel_size() == doctest::Approx(0.02));
    const Octree tree = voxelize(*standard_cone(), domain);
    const double analytic = analytic_cone_volume(deg_to_rad(12.5), 1.5);
    CHECK(analytic == doctest::Approx(0.17369).epsilon(1e-3));
    CHECK(std::abs(tree.volume() - analytic) / analytic < 0.03);
}

TEST_CASE("sphere volumetry at 1.3 m within 1%") {
    const VoxelDomain domain(Vec3(-2.56, -2.56, -2.56), 5.12, 8);
    CHECK(domain.voxel_size() == doctest::Approx(0.02));
    const Octree tree = voxelize(*make_sphere(Vec3(0, 0, 0), 1.3), domain);
    const double analytic = 4.0 / 3.0 * kPi * 1.3 * 1.3 * 1.3;
    CHECK(analytic == doctest::Approx(9.2028).epsilon(1e-4));
    CHECK(std::abs(tree.volume() - analytic) / analytic < 0.01);
}

TEST_CASE("sub-voxel solid occupies at most one voxel") {
    const VoxelDomain domain(Vec3(-1, -1, -1), 2.0, 5);
    const Octree tree = voxelize(*make_sphere(Vec3(0.01, 0.01, 0.01), 1e-6), domain);
    CHECK(tree.occupied_count() <= 1);
}

TEST_CASE("volume arithmetic on trivial trees") {
    const VoxelDomain domain(Vec3(0, 0, 0), 2.0, 4);
    CHECK(Octree::empty(domain).volume() == 0.0);
    CHECK(Octree::full(domain).volume() == doctest::Approx(8.0).epsilon(1e-12));

    // Exactly 5 leaf voxels: a tiny box of spheres is awkward, so check the
    // count-to-volume arithmetic directly at l = 0.1.
    const VoxelDomain d2(Vec3(0, 0, 0), 1.6, 4);
    CHECK(d2.voxel_size() == doctest::Approx(0.1));
    std::uint64_t count = 5;
    CHECK(static_cast<double>(count) * std::pow(d2.voxel_size(), 3) ==
          doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("voxelize rejects solids that exceed the domain") {
    const VoxelDomain domain(Vec3(-0.5, -0.5, -0.5), 1.0, 4);
    CHECK_THROWS_AS(voxelize(*make_sphere(Vec3(0, 0, 0), 2.0), domain), std::invalid_argument);
}

TEST_CASE("boolean identities") {
    const VoxelDomain domain(Vec3(-1, -1, -1), 2.0, 5);
    const Octree a = voxelize(*make_sphere(Vec3(0.2, 0, 0), 0.5), domain);
    const Octree b = voxelize(*make_sphere(Vec3(-0.2, 0.1, 0), 0.4), domain);
    const Octree empty = Octree::empty(domain);

    CHECK(subtract(a, a).occupied_count() == 0);
    CHECK(subtract(a, empty) == a);
    CHECK(merge(a, empty) == a);
    CHECK(merge(a, a) == a);
    CHECK(intersect(a, a) == a);
    CHECK(intersect(a, empty).occupied_count() == 0);

    // Lambda(a) - Lambda(a minus b) = Lambda(a intersect b).
    CHECK(a.occupied_count() - subtract(a, b).occupied_count() ==
          intersect(a, b).occupied_count());
    // Inclusion-exclusion.
    CHECK(merge(a, b).occupied_count() + intersect(a, b).occupied_count() ==
          a.occupied_count() + b.occupied_count());
    // Intersection via double subtraction, bit-exact.
    CHECK(intersect(a, b) == subtract(a, subtract(a, b)));
}

TEST_CASE("boolean ops against the dense voxel-set oracle") {
    std::mt19937_64 rng(20240);
    const VoxelDomain domain(Vec3(-1, -1, -1), 2.0, 5);
    for (int scene = 0; scene < 10; ++scene) {
        const SolidPtr sa = random_solid(rng, domain.box());
        const SolidPtr sb = random_solid(rng, domain.box());
        const Octree a = voxelize(*sa, domain);
        const Octree b = voxelize(*sb, domain);

        const DenseVoxels da = DenseVoxels::from_solid(*sa, domain);
        const DenseVoxels db = DenseVoxels::from_solid(*sb, domain);
        CHECK(DenseVoxels::from_octree(a) == da);
        CHECK(DenseVoxels::from_octree(b) == db);

        const auto or_op = [](bool x, bool y) { return x || y; };
        const auto and_op = [](bool x, bool y) { return x && y; };
        const auto diff_op = [](bool x, bool y) { return x && !y; };
        CHECK(DenseVoxels::from_octree(merge(a, b)) == da.binary(db, or_op));
        CHECK(DenseVoxels::from_octree(intersect(a, b)) == da.binary(db, and_op));
        CHECK(DenseVoxels::from_octree(subtract(a, b)) == da.binary(db, diff_op));
    }
}

TEST_CASE("boolean ops demand matching domains") {
    const VoxelDomain d1(Vec3(0, 0, 0), 2.0, 5);
    const VoxelDomain d2(Vec3(0, 0, 0), 2.0, 6);
    CHECK_THROWS_AS(merge(Octree::empty(d1), Octree::empty(d2)), std::invalid_argument);
    CHECK_THROWS_AS(subtract(Octree::empty(d1), Octree::empty(d2)), std::invalid_argument);
    CHECK_THROWS_AS(intersect(Octree::empty(d1), Octree::empty(d2)), std::invalid_argument);
}

TEST_CASE("sphere volume error shrinks with depth") {
    const SolidPtr sphere = make_sphere(Vec3(0, 0, 0), 1.0);
    const double analytic = 4.0 / 3.0 * kPi;
    double prev_err = 1e9;
    for (int depth = 4; depth <= 8; ++depth) {
        const VoxelDomain domain(Vec3(-1.28, -1.28, -1.28), 2.56, depth);
        const double err = std::abs(voxelize(*sphere, domain).volume() - analytic) / analytic;
        // Monotone within a small plateau allowance.
        CHECK(err <= prev_err + 1e-3);
        prev_err = err;
    }
    CHECK(prev_err < 0.01);
}

TEST_CASE("volume bounds") {
    std::mt19937_64 rng(77);
    const VoxelDomain domain(Vec3(-1, -1, -1), 2.0, 4);
    for (int i = 0; i < 10; ++i) {
        const Octree t = voxelize(*random_solid(rng, domain.box()), domain);
        CHECK(t.volume() >= 0.0);
        CHECK(t.volume() <= 8.0 + 1e-12);
    }
}

TEST_CASE("early-out voxelization stays near the exact tree on the cone") {
    const VoxelDomain domain(Vec3(-1.28, -1.28, -0.2), 2.56, 7);
    const Octree exact = voxelize(*standard_cone(), domain);
    VoxelizeOptions fast;
    fast.early_out = true;
    const Octree approx = voxelize(*standard_cone(), domain, fast);
    CHECK(std::abs(approx.volume() - exact.volume()) / exact.volume() < 0.005);
}

TEST_CASE("translating a solid by whole voxels changes volume only slightly") {
    const VoxelDomain domain(Vec3(-1.6, -1.6, -0.4), 3.2, 7);
    const double l = domain.voxel_size();
    const Octree base = voxelize(*standard_cone(), domain);
    const Octree moved = voxelize(
        *make_cone(Vec3(3 * l, 5 * l, 2 * l), Vec3(0, 0, 1), deg_to_rad(12.5), 1.5), domain);
    // Exactly grid-aligned translation: identical count.
    CHECK(moved.occupied_count() == base.occupied_count());

    // Off-grid translation stays within the surface-quantization budget.
    const Octree off = voxelize(
        *make_cone(Vec3(0.4 * l, 0.7 * l, 0.2 * l), Vec3(0, 0, 1), deg_to_rad(12.5), 1.5),
        domain);
    CHECK(std::abs(off.volume() - base.volume()) / base.volume() < 0.05);
}

TEST_CASE("serialization round-trips bit-exactly") {
    std::mt19937_64 rng(616);
    const VoxelDomain domain(Vec3(-1, -1, -1), 2.0, 6);
    for (int i = 0; i < 5; ++i) {
        const Octree t = voxelize(*random_solid(rng, domain.box()), domain);
        const auto bytes = t.serialize();
        const Octree back = Octree::deserialize(bytes);
        CHECK(back == t);
        CHECK(back.serialize() == bytes);
    }
    // Header layout: 4 doubles + depth byte up front.
    const auto bytes = Octree::empty(domain).serialize();
    REQUIRE(bytes.size() >= 34);
    CHECK(bytes[32] == 6);
}

TEST_CASE("disc decimation of the standard cone") {
    const auto discs = disc_decimate(*standard_cone(), 0.1);
    REQUIRE(discs.size() == 16);
    CHECK(discs.front().radius == doctest::Approx(0.0));
    CHECK(discs.back().radius == doctest::Approx(1.5 * std::tan(deg_to_rad(12.5))).epsilon(1e-9));
    // Similar-triangles radius law: linear in station.
    for (size_t k = 0; k < discs.size(); ++k)
        CHECK(discs[k].radius ==
              doctest::Approx(0.1 * k * std::tan(deg_to_rad(12.5))).epsilon(1e-9));
}

TEST_CASE("disc decimation of a sphere at its own radius gives the polar pattern") {
    const auto discs = disc_decimate(*make_sphere(Vec3(0, 0, 0), 0.4), 0.4);
    REQUIRE(discs.size() == 3);
    CHECK(discs[0].radius == doctest::Approx(0.0));
    CHECK(discs[1].radius == doctest::Approx(0.4));
    CHECK(discs[2].radius == doctest::Approx(0.0));
}

TEST_CASE("tube shell discs are annuli") {
    auto curve = std::make_shared<PiecewiseBezierCurve>(
        PiecewiseBezierCurve::build({Vec3(0, 0, 0), Vec3(0, 0, 1)}, 0.25, 64));
    const TubeShell tube(curve, 0.15, 0.5);
    const auto discs = disc_decimate(tube, 0.25);
    REQUIRE(discs.size() == 5);
    for (const Disc& d : discs) {
        CHECK(d.radius == doctest::Approx(0.5));
        CHECK(d.inner_radius == doctest::Approx(0.15));
    }
}

TEST_CASE("disc decimation rejects unions") {
    const SolidPtr u = make_union({standard_cone()});
    CHECK_THROWS_AS(disc_decimate(*u, 0.1), std::invalid_argument);
}

TEST_CASE("disc-stack voxelization agrees with direct voxelization") {
    // Canonical pipeline alignment: the solid's extent sits on voxel layer
    // boundaries, as when the domain is sized around the shape.
    const VoxelDomain domain(Vec3(-1.28, -1.28, -0.2), 2.56, 7);
    const double l = domain.voxel_size();
    const Octree direct = voxelize(*standard_cone(), domain);
    const auto discs = disc_decimate(*standard_cone(), l);
    const Octree stacked = voxelize(*make_disc_stack(discs, l), domain);
    const double tolerance = 2.0 * static_cast<double>(discs.size()) * l * l * l;
    CHECK(std::abs(stacked.volume() - direct.volume()) <= tolerance);

    // Off-alignment the station-sampled staircase picks up a phase bias of
    // up to about half a voxel of radius; allow twice the budget there.
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> jitter(0.0, l);
    for (int trial = 0; trial < 3; ++trial) {
        const VoxelDomain shifted(Vec3(-1.28, -1.28, -0.2 - jitter(rng)), 2.56, 7);
        const double d = voxelize(*make_disc_stack(discs, l), shifted).volume() -
                         voxelize(*standard_cone(), shifted).volume();
        CHECK(std::abs(d) <= 2.0 * tolerance);
    }
}
